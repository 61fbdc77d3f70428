#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sfm/oracle.hpp"

namespace sfm::functions {

// ----------------------------------------------------------------- graphs --

struct WeightedEdge {
  int u = 0, v = 0;
  double weight = 0.0;
};

// Undirected graph with nonnegative edge weights and an adjacency index for
// O(degree) marginal queries.  Edges are stored once with u < v.
class WeightedGraph {
public:
  WeightedGraph() = default;
  WeightedGraph(int vertex_count, std::vector<WeightedEdge> edges);

  int vertex_count() const { return n_; }
  const std::vector<WeightedEdge>& edges() const { return edges_; }

  // Neighbors of v as (neighbor, weight) pairs via the CSR index.
  struct NeighborRange {
    const int* idx_begin;
    const double* w_begin;
    int count;
  };
  NeighborRange neighbors(int v) const {
    return {nbr_.data() + offset_[v], nbr_weight_.data() + offset_[v],
            offset_[v + 1] - offset_[v]};
  }

private:
  int n_ = 0;
  std::vector<WeightedEdge> edges_;
  std::vector<int> offset_, nbr_;
  std::vector<double> nbr_weight_;
};

// ---------------------------------------------------------------- kernels --

struct KernelMatrix {
  Eigen::MatrixXd k;    // symmetric positive definite after jitter
  double jitter = 0.0;  // the absolute value added to the diagonal
};

// Gaussian kernel exp(-alpha * squared distance) between rows of points,
// with jitter_scale * mean(diagonal) added to the diagonal so dense kernels
// stay factorizable at large p.
KernelMatrix kernel_from_points(const Eigen::MatrixXd& points, double alpha = 1.5,
                                double jitter_scale = 1e-8);

struct LabelPrior {
  Eigen::VectorXd eta;  // in [0,1]; 1/0 for labeled points, 0.5 otherwise
  double clamp = 1e-9;  // replaces exact 0/1 inside logarithms
};

// labels: (index, +1/-1) pairs; +1 maps to eta=1, -1 to eta=0, rest to 0.5.
LabelPrior prior_from_labels(int p, const std::vector<std::pair<int, int>>& labels,
                             double clamp = 1e-9);

// ---------------------------------------------------------------- oracles --

// Modular function
//   F(A) = sum of weights over A
// The base polytope of a modular function is the single point `weights`.
class ModularOracle final : public SubmodularOracle {
public:
  explicit ModularOracle(Eigen::VectorXd weights);
  const Eigen::VectorXd& weights() const { return w_; }
  void chain_values(const ElementSet& base, const std::vector<int>& order,
                    std::vector<double>& out) const override;

protected:
  double eval_raw(const ElementSet& a) const override;

private:
  Eigen::VectorXd w_;
};

// Concave transform of the cardinality plus a modular part:
//   F(A) = g(|A|) + sum of weights over A
// g is given by its samples g[0..p] and must be concave with g[0] = 0, which
// makes F submodular.
class ConcaveCardinalityOracle final : public SubmodularOracle {
public:
  ConcaveCardinalityOracle(std::vector<double> g_samples, Eigen::VectorXd weights);
  void chain_values(const ElementSet& base, const std::vector<int>& order,
                    std::vector<double>& out) const override;

protected:
  double eval_raw(const ElementSet& a) const override;

private:
  std::vector<double> g_;
  Eigen::VectorXd w_;
};

// Graph cut with unary potentials:
//   F(A) = sum of unary over A + total weight of edges crossing (A, V minus A)
class CutOracle final : public SubmodularOracle {
public:
  CutOracle(WeightedGraph graph, Eigen::VectorXd unary);
  const WeightedGraph& graph() const { return graph_; }
  const Eigen::VectorXd& unary() const { return unary_; }
  void chain_values(const ElementSet& base, const std::vector<int>& order,
                    std::vector<double>& out) const override;

protected:
  double eval_raw(const ElementSet& a) const override;

private:
  WeightedGraph graph_;
  Eigen::VectorXd unary_;
};

// Gaussian mutual information between the selected variables and the rest,
// plus a modular label-prior penalty:
//   F(A) = 1/2 (logdet K_AA + logdet K_BB - logdet K)
//          - sum_{j in A} log eta_j - sum_{j not in A} log(1 - eta_j)
// with B the complement of A and eta clamped away from {0,1}.  The empty
// block contributes logdet 0; construction fails if K cannot be factorized.
class MutualInfoOracle final : public SubmodularOracle {
public:
  MutualInfoOracle(KernelMatrix kernel, LabelPrior prior);
  void chain_values(const ElementSet& base, const std::vector<int>& order,
                    std::vector<double>& out) const override;

protected:
  double eval_raw(const ElementSet& a) const override;

private:
  double logdet_block(const std::vector<int>& idx) const;

  Eigen::MatrixXd k_;
  Eigen::VectorXd log_eta_, log_one_minus_eta_;
  double logdet_full_ = 0.0;
  double d2_floor_ = 0.0; // lower clamp for squared Cholesky pivots
};

// A classic hard family for minimum-norm solvers:
//   F(A) = |A| * (p - |A|) - sum_{j in A} (5 (j+1) - 2 p)
// (elements counted 1-based inside the modular part).
class IwataOracle final : public SubmodularOracle {
public:
  explicit IwataOracle(int p);
  void chain_values(const ElementSet& base, const std::vector<int>& order,
                    std::vector<double>& out) const override;

protected:
  double eval_raw(const ElementSet& a) const override;
};

// ------------------------------------------------------------- factories --

std::shared_ptr<SubmodularOracle> cut_oracle(WeightedGraph graph,
                                             Eigen::VectorXd unary);
std::shared_ptr<SubmodularOracle> mutual_info_oracle(KernelMatrix kernel,
                                                     LabelPrior prior);

// Seeded randomized instance families used by tests, audits and benchmarks:
// "modular", "concave_card", "grid_cut" (signed unary), "iwata".
struct OracleFactory {
  std::string name;
  std::function<std::shared_ptr<SubmodularOracle>(int p, uint64_t seed)> make;
};
const std::vector<OracleFactory>& test_oracles();

} // namespace sfm::functions
