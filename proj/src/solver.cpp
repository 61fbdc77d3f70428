#include "sfm/solver.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "sfm/errors.hpp"

namespace sfm::solver {

double primal_value(const SubmodularOracle& oracle, const Eigen::VectorXd& w) {
  return lovasz_extension(oracle, w) + 0.5 * w.squaredNorm();
}

double dual_value(const Eigen::VectorXd& s) { return -0.5 * s.squaredNorm(); }

double duality_gap_given_lovasz(double lovasz, const Eigen::VectorXd& w,
                                const Eigen::VectorXd& s) {
  double gap = lovasz + 0.5 * w.squaredNorm() + 0.5 * s.squaredNorm();
  if (gap < -1e-9)
    throw NegativeGap("duality gap " + std::to_string(gap) +
                      " is negative beyond round-off; dual iterate is not in "
                      "the base polytope or the oracle is inconsistent");
  return gap < 0.0 ? 0.0 : gap;
}

double duality_gap(const SubmodularOracle& oracle, const Eigen::VectorXd& w,
                   const Eigen::VectorXd& s) {
  if (w.size() != oracle.ground_size() || s.size() != oracle.ground_size())
    throw PreconditionViolated("vector lengths differ from ground size");
  return duality_gap_given_lovasz(lovasz_extension(oracle, w), w, s);
}

namespace {

Eigen::VectorXd identity_order_vertex(const SubmodularOracle& oracle) {
  std::vector<int> order(oracle.ground_size());
  std::iota(order.begin(), order.end(), 0);
  return vertex_from_order(oracle, order).coords;
}

// Certificate for the current dual iterate x: the primal candidate is
// w = -x, which is already nonincreasing along its own decreasing order, so
// the isotonic refinement step is the identity here and one oracle sweep
// yields the vertex, the extension value, and all prefix values at once.
StepCertificate certify(const SubmodularOracle& oracle, const Eigen::VectorXd& x,
                        Eigen::VectorXd* vertex_out) {
  StepCertificate cert;
  cert.w = -x;
  GreedyResult g = greedy_pass(oracle, cert.w);
  cert.s = x;
  cert.lovasz = g.lovasz;
  cert.f_ground = g.prefix_values.back();
  cert.order = std::move(g.order);
  cert.prefix_values = std::move(g.prefix_values);
  cert.gap = duality_gap_given_lovasz(cert.lovasz, cert.w, cert.s);
  if (vertex_out) *vertex_out = std::move(g.point.coords);
  return cert;
}

} // namespace

// ------------------------------------------------------------------ Wolfe --

WolfeSolver::WolfeSolver(std::shared_ptr<const SubmodularOracle> oracle)
    : WolfeSolver(oracle, identity_order_vertex(*oracle)) {}

WolfeSolver::WolfeSolver(std::shared_ptr<const SubmodularOracle> oracle,
                         Eigen::VectorXd start_vertex)
    : oracle_(std::move(oracle)), x_(std::move(start_vertex)) {
  if (!oracle_) throw PreconditionViolated("solver needs an oracle");
  if (x_.size() != oracle_->ground_size())
    throw PreconditionViolated("start vertex length differs from ground size");
  vertices_.push_back(x_);
  lambda_.assign(1, 1.0);
  gram_.resize(1, 1);
  gram_(0, 0) = x_.squaredNorm();
}

std::vector<BasePoint::Atom> WolfeSolver::atoms() const {
  std::vector<BasePoint::Atom> out;
  out.reserve(vertices_.size());
  for (size_t i = 0; i < vertices_.size(); ++i)
    out.push_back({vertices_[i], lambda_[i]});
  return out;
}

StepCertificate WolfeSolver::step() {
  // Apply the vertex found by the previous step first, so that after step()
  // returns, dual() still equals the s the returned certificate refers to.
  if (pending_.size() > 0) {
    const int m = static_cast<int>(vertices_.size());
    gram_.conservativeResize(m + 1, m + 1);
    for (int i = 0; i < m; ++i)
      gram_(i, m) = gram_(m, i) = vertices_[i].dot(pending_);
    gram_(m, m) = pending_.squaredNorm();
    vertices_.push_back(std::move(pending_));
    lambda_.push_back(0.0);
    pending_.resize(0);
    affine_minimize();
  }

  Eigen::VectorXd q;
  StepCertificate cert = certify(*oracle_, x_, &q);
  if (cert.gap > 0.0) {
    bool duplicate = false;
    for (const auto& v : vertices_)
      if ((v - q).lpNorm<Eigen::Infinity>() <= 1e-12) {
        duplicate = true;
        break;
      }
    if (duplicate) {
      // The linear oracle cannot supply a new vertex, so the affine
      // minimizer over the corral is already the best available iterate.
      stalled_ = true;
    } else {
      pending_ = std::move(q);
    }
  }
  return cert;
}

void WolfeSolver::affine_minimize() {
  while (true) {
    const int m = static_cast<int>(vertices_.size());
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);

    // Affine minimizer of ||sum beta_i v_i|| with sum beta = 1: solve the
    // Gram normal equations, normalizing the homogeneous solution.
    Eigen::VectorXd beta;
    bool solved = false;
    Eigen::MatrixXd g = gram_;
    for (int attempt = 0; attempt < 2 && !solved; ++attempt) {
      Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
      if (ldlt.info() == Eigen::Success) {
        Eigen::VectorXd raw = ldlt.solve(ones);
        double denom = raw.sum();
        if (raw.allFinite() && std::abs(denom) > 1e-300) {
          beta = raw / denom;
          solved = true;
          break;
        }
      }
      g.diagonal().array() += 1e-12 * gram_.trace();
    }
    if (!solved)
      throw NumericalBreakdown(
          "corral Gram system stayed singular after regularization");

    if (beta.minCoeff() >= 1e-12) {
      lambda_.assign(beta.data(), beta.data() + m);
      break;
    }

    // Walk from the current convex weights toward beta until a weight
    // crosses zero, then drop every vanished atom and re-minimize.
    double theta = 1.0;
    int pivot = -1;
    for (int i = 0; i < m; ++i) {
      if (beta[i] < 1e-12) {
        double denom = lambda_[i] - beta[i];
        double t = denom > 0.0 ? lambda_[i] / denom : 0.0;
        if (t < theta) {
          theta = t;
          pivot = i;
        }
      }
    }
    for (int i = 0; i < m; ++i)
      lambda_[i] = (1.0 - theta) * lambda_[i] + theta * beta[i];

    std::vector<int> keep;
    keep.reserve(m);
    for (int i = 0; i < m; ++i)
      if (lambda_[i] > 1e-12 && i != pivot) keep.push_back(i);

    std::vector<Eigen::VectorXd> kept_vertices;
    std::vector<double> kept_lambda;
    kept_vertices.reserve(keep.size());
    kept_lambda.reserve(keep.size());
    Eigen::MatrixXd kept_gram(keep.size(), keep.size());
    for (size_t a = 0; a < keep.size(); ++a) {
      kept_vertices.push_back(std::move(vertices_[keep[a]]));
      kept_lambda.push_back(lambda_[keep[a]]);
      for (size_t b = 0; b < keep.size(); ++b)
        kept_gram(a, b) = gram_(keep[a], keep[b]);
    }
    vertices_ = std::move(kept_vertices);
    lambda_ = std::move(kept_lambda);
    gram_ = std::move(kept_gram);
    if (vertices_.empty())
      throw NumericalBreakdown("corral emptied during affine minimization");

    double total = std::accumulate(lambda_.begin(), lambda_.end(), 0.0);
    if (total <= 0.0)
      throw NumericalBreakdown("corral weights degenerated to zero mass");
    for (double& l : lambda_) l /= total;
  }

  x_.setZero(oracle_->ground_size());
  for (size_t i = 0; i < vertices_.size(); ++i) x_ += lambda_[i] * vertices_[i];
}

// ------------------------------------------------------------ Frank-Wolfe --

FrankWolfeSolver::FrankWolfeSolver(std::shared_ptr<const SubmodularOracle> oracle)
    : FrankWolfeSolver(oracle, identity_order_vertex(*oracle)) {}

FrankWolfeSolver::FrankWolfeSolver(std::shared_ptr<const SubmodularOracle> oracle,
                                   Eigen::VectorXd start_vertex)
    : oracle_(std::move(oracle)), x_(std::move(start_vertex)) {
  if (!oracle_) throw PreconditionViolated("solver needs an oracle");
  if (x_.size() != oracle_->ground_size())
    throw PreconditionViolated("start vertex length differs from ground size");
}

StepCertificate FrankWolfeSolver::step() {
  Eigen::VectorXd q;
  StepCertificate cert = certify(*oracle_, x_, &q);
  if (cert.gap > 0.0) {
    Eigen::VectorXd d = q - x_;
    double dn = d.squaredNorm();
    double gamma = dn > 0.0 ? std::clamp(-x_.dot(d) / dn, 0.0, 1.0) : 0.0;
    if (gamma > 0.0)
      x_ += gamma * d;
    else
      stalled_ = true;
  }
  return cert;
}

std::unique_ptr<DualSolver> make_solver(SolverKind kind,
                                        std::shared_ptr<const SubmodularOracle> oracle) {
  if (kind == SolverKind::wolfe) return std::make_unique<WolfeSolver>(std::move(oracle));
  return std::make_unique<FrankWolfeSolver>(std::move(oracle));
}

std::unique_ptr<DualSolver> make_solver(SolverKind kind,
                                        std::shared_ptr<const SubmodularOracle> oracle,
                                        Eigen::VectorXd start_vertex) {
  if (kind == SolverKind::wolfe)
    return std::make_unique<WolfeSolver>(std::move(oracle), std::move(start_vertex));
  return std::make_unique<FrankWolfeSolver>(std::move(oracle), std::move(start_vertex));
}

double conditional_gradient_step(const SubmodularOracle& oracle, Eigen::VectorXd& s) {
  if (s.size() != oracle.ground_size())
    throw PreconditionViolated("iterate length differs from ground size");
  BasePoint v = greedy_linear_maximize(oracle, -s);
  Eigen::VectorXd d = v.coords - s;
  double dn = d.squaredNorm();
  if (dn <= 0.0) return 0.0;
  double gamma = std::clamp(s.dot(s - v.coords) / dn, 0.0, 1.0);
  s += gamma * d;
  return gamma;
}

// ------------------------------------------------------------- main loops --

namespace {

SolveReport run_solver_loop(DualSolver& solver,
                            const std::shared_ptr<const SubmodularOracle>& oracle,
                            double eps, long long max_iter,
                            const IterationCallback& callback) {
  if (eps <= 0.0) throw PreconditionViolated("eps must be positive");
  if (max_iter <= 0) max_iter = 50LL * std::max(1, oracle->ground_size());

  SolveReport rep;
  const long long calls0 = oracle->calls();
  const auto t0 = std::chrono::steady_clock::now();
  StepCertificate last;
  while (rep.iterations < max_iter) {
    StepCertificate cert = solver.step();
    ++rep.iterations;
    const auto now = std::chrono::steady_clock::now();
    rep.trace.push_back(
        {rep.iterations, cert.gap, cert.s.norm(), oracle->calls() - calls0,
         std::chrono::duration_cast<std::chrono::nanoseconds>(now - t0).count()});
    if (callback) callback(cert);
    last = std::move(cert);
    if (last.gap <= eps) {
      rep.converged = true;
      break;
    }
    if (solver.stalled()) break;
  }
  rep.w_star = std::move(last.w);
  rep.s_star = std::move(last.s);
  rep.final_gap = last.gap;
  rep.oracle_calls = oracle->calls() - calls0;
  return rep;
}

} // namespace

SolveReport min_norm_point(std::shared_ptr<const SubmodularOracle> oracle,
                           double eps, long long max_iter,
                           const IterationCallback& callback) {
  WolfeSolver solver(oracle);
  SolveReport rep = run_solver_loop(solver, oracle, eps, max_iter, callback);
  rep.atoms = solver.atoms();
  return rep;
}

SolveReport min_norm_point_fw(std::shared_ptr<const SubmodularOracle> oracle,
                              double eps, long long max_iter,
                              const IterationCallback& callback) {
  FrankWolfeSolver solver(oracle);
  return run_solver_loop(solver, oracle, eps, max_iter, callback);
}

} // namespace sfm::solver
