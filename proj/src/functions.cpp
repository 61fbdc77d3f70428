#include "sfm/functions.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <set>

#include "sfm/rng.hpp"

namespace sfm::functions {

// ----------------------------------------------------------------- graphs --

WeightedGraph::WeightedGraph(int vertex_count, std::vector<WeightedEdge> edges)
    : n_(vertex_count), edges_(std::move(edges)) {
  if (n_ < 0) throw PreconditionViolated("vertex count must be nonnegative");
  std::set<std::pair<int, int>> seen;
  for (auto& e : edges_) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
      throw PreconditionViolated("edge endpoint outside vertex range");
    if (e.u == e.v) throw PreconditionViolated("self-loops are not allowed");
    if (e.weight < 0)
      throw NegativeEdgeWeight("edge weight " + std::to_string(e.weight) +
                               " breaks cut submodularity");
    if (!std::isfinite(e.weight))
      throw PreconditionViolated("edge weight must be finite");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!seen.emplace(e.u, e.v).second)
      throw PreconditionViolated("duplicate edge " + std::to_string(e.u) + "-" +
                                 std::to_string(e.v));
  }
  offset_.assign(n_ + 1, 0);
  for (const auto& e : edges_) {
    ++offset_[e.u + 1];
    ++offset_[e.v + 1];
  }
  for (int v = 0; v < n_; ++v) offset_[v + 1] += offset_[v];
  nbr_.resize(offset_[n_]);
  nbr_weight_.resize(offset_[n_]);
  std::vector<int> cursor(offset_.begin(), offset_.end() - 1);
  for (const auto& e : edges_) {
    nbr_[cursor[e.u]] = e.v;
    nbr_weight_[cursor[e.u]++] = e.weight;
    nbr_[cursor[e.v]] = e.u;
    nbr_weight_[cursor[e.v]++] = e.weight;
  }
}

// ---------------------------------------------------------------- kernels --

KernelMatrix kernel_from_points(const Eigen::MatrixXd& points, double alpha,
                                double jitter_scale) {
  const int p = static_cast<int>(points.rows());
  KernelMatrix km;
  km.k.resize(p, p);
  for (int i = 0; i < p; ++i) {
    km.k(i, i) = 1.0;
    for (int j = i + 1; j < p; ++j) {
      double d2 = (points.row(i) - points.row(j)).squaredNorm();
      km.k(i, j) = km.k(j, i) = std::exp(-alpha * d2);
    }
  }
  km.jitter = (p > 0) ? jitter_scale * km.k.diagonal().mean() : 0.0;
  km.k.diagonal().array() += km.jitter;
  return km;
}

LabelPrior prior_from_labels(int p, const std::vector<std::pair<int, int>>& labels,
                             double clamp) {
  if (clamp <= 0.0 || clamp >= 0.5)
    throw PreconditionViolated("prior clamp must lie in (0, 0.5)");
  LabelPrior prior;
  prior.clamp = clamp;
  prior.eta = Eigen::VectorXd::Constant(p, 0.5);
  for (auto [j, y] : labels) {
    if (j < 0 || j >= p) throw PreconditionViolated("label index outside ground set");
    if (y != 1 && y != -1) throw PreconditionViolated("labels must be +1 or -1");
    prior.eta[j] = (y == 1) ? 1.0 : 0.0;
  }
  return prior;
}

// ---------------------------------------------------------------- modular --

ModularOracle::ModularOracle(Eigen::VectorXd weights)
    : SubmodularOracle(static_cast<int>(weights.size())), w_(std::move(weights)) {}

double ModularOracle::eval_raw(const ElementSet& a) const {
  double s = 0.0;
  for (int j : a.members()) s += w_[j];
  return s;
}

void ModularOracle::chain_values(const ElementSet& base, const std::vector<int>& order,
                                 std::vector<double>& out) const {
  count_calls(static_cast<long long>(order.size()) + 1);
  out.resize(order.size() + 1);
  double s = 0.0;
  for (int j : base.members()) s += w_[j];
  out[0] = s;
  for (size_t k = 0; k < order.size(); ++k) out[k + 1] = out[k] + w_[order[k]];
}

// ---------------------------------------------------- concave cardinality --

ConcaveCardinalityOracle::ConcaveCardinalityOracle(std::vector<double> g_samples,
                                                   Eigen::VectorXd weights)
    : SubmodularOracle(static_cast<int>(weights.size())),
      g_(std::move(g_samples)),
      w_(std::move(weights)) {
  if (static_cast<int>(g_.size()) != ground_size() + 1)
    throw PreconditionViolated("need g samples for 0..p");
  if (g_[0] != 0.0) throw PreconditionViolated("g(0) must be 0");
  for (size_t k = 0; k + 2 < g_.size(); ++k) {
    double d1 = g_[k + 1] - g_[k], d2 = g_[k + 2] - g_[k + 1];
    if (d2 > d1 + 1e-12)
      throw PreconditionViolated("g samples are not concave");
  }
}

double ConcaveCardinalityOracle::eval_raw(const ElementSet& a) const {
  double s = g_[a.cardinality()];
  for (int j : a.members()) s += w_[j];
  return s;
}

void ConcaveCardinalityOracle::chain_values(const ElementSet& base,
                                            const std::vector<int>& order,
                                            std::vector<double>& out) const {
  count_calls(static_cast<long long>(order.size()) + 1);
  out.resize(order.size() + 1);
  int card = base.cardinality();
  double mod = 0.0;
  for (int j : base.members()) mod += w_[j];
  out[0] = g_[card] + mod;
  for (size_t k = 0; k < order.size(); ++k) {
    mod += w_[order[k]];
    out[k + 1] = g_[card + static_cast<int>(k) + 1] + mod;
  }
}

// -------------------------------------------------------------------- cut --

CutOracle::CutOracle(WeightedGraph graph, Eigen::VectorXd unary)
    : SubmodularOracle(graph.vertex_count()),
      graph_(std::move(graph)),
      unary_(std::move(unary)) {
  if (unary_.size() != ground_size())
    throw PreconditionViolated("unary length differs from vertex count");
}

double CutOracle::eval_raw(const ElementSet& a) const {
  double val = 0.0;
  for (int j : a.members()) val += unary_[j];
  for (const auto& e : graph_.edges())
    if (a.contains(e.u) != a.contains(e.v)) val += e.weight;
  return val;
}

void CutOracle::chain_values(const ElementSet& base, const std::vector<int>& order,
                             std::vector<double>& out) const {
  count_calls(static_cast<long long>(order.size()) + 1);
  out.resize(order.size() + 1);
  const int p = ground_size();
  std::vector<char> in(p, 0);
  for (int j : base.members()) in[j] = 1;
  out[0] = eval_raw(base); // raw value of the empty set is exactly 0 for cuts
  double cur = out[0];
  for (size_t k = 0; k < order.size(); ++k) {
    int e = order[k];
    // Adding e flips its incident edges: edges to members stop crossing,
    // edges to non-members start crossing.
    double delta = unary_[e];
    auto nb = graph_.neighbors(e);
    for (int t = 0; t < nb.count; ++t)
      delta += in[nb.idx_begin[t]] ? -nb.w_begin[t] : nb.w_begin[t];
    in[e] = 1;
    cur += delta;
    out[k + 1] = cur;
  }
}

// ------------------------------------------------------ mutual information --

namespace {

// Incrementally grown Cholesky factor of a principal kernel submatrix.
// Appending an element costs O(m^2); the log-determinant is read off the
// diagonal.  Squared pivots are clamped from below because the jittered
// kernel is positive definite in exact arithmetic but row sums of products
// can round below zero for nearly duplicated points.
class CholChain {
public:
  CholChain(const Eigen::MatrixXd& k, double d2_floor)
      : k_(k), floor_(d2_floor), l_(k.rows(), k.cols()) {}

  void append(int e) {
    const int m = static_cast<int>(idx_.size());
    double d2 = k_(e, e);
    if (m > 0) {
      for (int i = 0; i < m; ++i) {
        double sum = k_(idx_[i], e);
        for (int t = 0; t < i; ++t) sum -= l_(i, t) * l_(m, t);
        l_(m, i) = sum / l_(i, i);
        d2 -= l_(m, i) * l_(m, i);
      }
    }
    if (d2 < -0.1 * k_.diagonal().mean())
      throw FactorizationFailure("kernel block is numerically indefinite");
    d2 = std::max(d2, floor_);
    l_(m, m) = std::sqrt(d2);
    logdet_ += std::log(d2);
    idx_.push_back(e);
  }

  double logdet() const { return logdet_; }

private:
  const Eigen::MatrixXd& k_;
  double floor_;
  Eigen::MatrixXd l_;
  std::vector<int> idx_;
  double logdet_ = 0.0;
};

} // namespace

MutualInfoOracle::MutualInfoOracle(KernelMatrix kernel, LabelPrior prior)
    : SubmodularOracle(static_cast<int>(kernel.k.rows())), k_(std::move(kernel.k)) {
  const int p = ground_size();
  if (k_.rows() != k_.cols())
    throw PreconditionViolated("kernel matrix must be square");
  if (prior.eta.size() != p)
    throw PreconditionViolated("prior length differs from kernel size");
  if (p > 0 && !k_.isApprox(k_.transpose(), 1e-12))
    throw PreconditionViolated("kernel matrix must be symmetric");

  log_eta_.resize(p);
  log_one_minus_eta_.resize(p);
  const double c = prior.clamp;
  for (int j = 0; j < p; ++j) {
    double eta = std::clamp(prior.eta[j], c, 1.0 - c);
    log_eta_[j] = std::log(eta);
    log_one_minus_eta_[j] = std::log(1.0 - eta);
  }

  d2_floor_ = (p > 0) ? 1e-14 * k_.diagonal().mean() : 0.0;
  if (p > 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(k_);
    if (llt.info() != Eigen::Success)
      throw FactorizationFailure("kernel matrix is not positive definite");
    logdet_full_ = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  }
}

double MutualInfoOracle::logdet_block(const std::vector<int>& idx) const {
  const int m = static_cast<int>(idx.size());
  if (m == 0) return 0.0;
  Eigen::MatrixXd block(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) block(i, j) = k_(idx[i], idx[j]);
  Eigen::LLT<Eigen::MatrixXd> llt(block);
  if (llt.info() != Eigen::Success)
    throw FactorizationFailure("kernel block is not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double MutualInfoOracle::eval_raw(const ElementSet& a) const {
  std::vector<int> in = a.members();
  std::vector<int> out = a.complement().members();
  double val = 0.5 * (logdet_block(in) + logdet_block(out) - logdet_full_);
  for (int j : in) val -= log_eta_[j];
  for (int j : out) val -= log_one_minus_eta_[j];
  return val;
}

void MutualInfoOracle::chain_values(const ElementSet& base,
                                    const std::vector<int>& order,
                                    std::vector<double>& out) const {
  const int n = static_cast<int>(order.size());
  count_calls(n + 1);
  out.resize(n + 1);

  // Forward factor over the growing selected block, backward factor over the
  // shrinking complement (built smallest-first, so both only ever append).
  std::vector<double> ld_sel(n + 1), ld_comp(n + 1);
  {
    CholChain fwd(k_, d2_floor_);
    for (int j : base.members()) fwd.append(j);
    ld_sel[0] = fwd.logdet();
    for (int k = 0; k < n; ++k) {
      fwd.append(order[k]);
      ld_sel[k + 1] = fwd.logdet();
    }
  }
  {
    ElementSet final_sel = base;
    for (int j : order) final_sel.insert(j);
    CholChain bwd(k_, d2_floor_);
    for (int j : final_sel.complement().members()) bwd.append(j);
    ld_comp[n] = bwd.logdet();
    for (int k = n - 1; k >= 0; --k) {
      bwd.append(order[k]);
      ld_comp[k] = bwd.logdet();
    }
  }

  double prior_sel = 0.0;
  for (int j : base.members()) prior_sel += -log_eta_[j] + log_one_minus_eta_[j];
  const double prior_all = -log_one_minus_eta_.sum(); // value at the empty set
  const double offset = prior_all;                    // raw F(empty)

  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      int j = order[k - 1];
      prior_sel += -log_eta_[j] + log_one_minus_eta_[j];
    }
    double raw = 0.5 * (ld_sel[k] + ld_comp[k] - logdet_full_) + prior_sel + prior_all;
    out[k] = raw - offset;
  }
}

// ------------------------------------------------------------------ iwata --

IwataOracle::IwataOracle(int p) : SubmodularOracle(p) {}

double IwataOracle::eval_raw(const ElementSet& a) const {
  const double p = ground_size();
  const double card = a.cardinality();
  double mod = 0.0;
  for (int j : a.members()) mod += 5.0 * (j + 1) - 2.0 * p;
  return card * (p - card) - mod;
}

void IwataOracle::chain_values(const ElementSet& base, const std::vector<int>& order,
                               std::vector<double>& out) const {
  count_calls(static_cast<long long>(order.size()) + 1);
  out.resize(order.size() + 1);
  const double p = ground_size();
  double card = base.cardinality();
  double mod = 0.0;
  for (int j : base.members()) mod += 5.0 * (j + 1) - 2.0 * p;
  out[0] = card * (p - card) - mod;
  for (size_t k = 0; k < order.size(); ++k) {
    card += 1.0;
    mod += 5.0 * (order[k] + 1) - 2.0 * p;
    out[k + 1] = card * (p - card) - mod;
  }
}

// -------------------------------------------------------------- factories --

std::shared_ptr<SubmodularOracle> cut_oracle(WeightedGraph graph,
                                             Eigen::VectorXd unary) {
  return std::make_shared<CutOracle>(std::move(graph), std::move(unary));
}

std::shared_ptr<SubmodularOracle> mutual_info_oracle(KernelMatrix kernel,
                                                     LabelPrior prior) {
  return std::make_shared<MutualInfoOracle>(std::move(kernel), std::move(prior));
}

namespace {

std::shared_ptr<SubmodularOracle> make_modular(int p, uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd w(p);
  for (int j = 0; j < p; ++j) w[j] = rng.uniform(-2.0, 2.0);
  return std::make_shared<ModularOracle>(std::move(w));
}

std::shared_ptr<SubmodularOracle> make_concave_card(int p, uint64_t seed) {
  Rng rng(seed);
  double c = rng.uniform(0.5, 2.0);
  std::vector<double> g(p + 1);
  for (int k = 0; k <= p; ++k) g[k] = c * std::sqrt(static_cast<double>(k));
  Eigen::VectorXd w(p);
  for (int j = 0; j < p; ++j) w[j] = rng.uniform(-1.5, 1.0);
  return std::make_shared<ConcaveCardinalityOracle>(std::move(g), std::move(w));
}

// Largest divisor of p that is <= sqrt(p); gives an exact h-by-(p/h) grid.
int grid_height(int p) {
  int best = 1;
  for (int h = 1; h * h <= p; ++h)
    if (p % h == 0) best = h;
  return best;
}

std::shared_ptr<SubmodularOracle> make_grid_cut(int p, uint64_t seed) {
  Rng rng(seed);
  const int h = grid_height(p), w = p / h;
  auto id = [w](int r, int c) { return r * w + c; };
  std::vector<WeightedEdge> edges;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      if (c + 1 < w) edges.push_back({id(r, c), id(r, c + 1), rng.uniform()});
      if (r + 1 < h) edges.push_back({id(r, c), id(r + 1, c), rng.uniform()});
      if (r + 1 < h && c + 1 < w)
        edges.push_back({id(r, c), id(r + 1, c + 1), rng.uniform()});
      if (r + 1 < h && c > 0)
        edges.push_back({id(r, c), id(r + 1, c - 1), rng.uniform()});
    }
  Eigen::VectorXd unary(p);
  for (int j = 0; j < p; ++j) unary[j] = rng.uniform(-2.0, 2.0);
  return std::make_shared<CutOracle>(WeightedGraph(p, std::move(edges)),
                                     std::move(unary));
}

std::shared_ptr<SubmodularOracle> make_iwata(int p, uint64_t) {
  return std::make_shared<IwataOracle>(p);
}

} // namespace

const std::vector<OracleFactory>& test_oracles() {
  static const std::vector<OracleFactory> catalog = {
      {"modular", make_modular},
      {"concave_card", make_concave_card},
      {"grid_cut", make_grid_cut},
      {"iwata", make_iwata},
  };
  return catalog;
}

} // namespace sfm::functions
