#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <vector>

#include "sfm/element_set.hpp"
#include "sfm/greedy.hpp"
#include "sfm/oracle.hpp"
#include "sfm/pav.hpp"

namespace sfm::solver {

enum class SolverKind { wolfe, frank_wolfe };

// Objective values of the proximal pair solved here: the primal minimizes
// f(w) + ||w||^2/2 over all of R^p, the dual maximizes -||s||^2/2 over the
// base polytope; the two optima coincide with w* = -s*.
double primal_value(const SubmodularOracle& oracle, const Eigen::VectorXd& w);
double dual_value(const Eigen::VectorXd& s);

// P(w) - D(s) = f(w) + ||w||^2/2 + ||s||^2/2.  Nonnegative whenever s lies in
// the base polytope; values in [-1e-9, 0) are rounded to 0 as floating noise,
// anything lower throws NegativeGap (an iterate left the polytope or the
// oracle is inconsistent).
double duality_gap(const SubmodularOracle& oracle, const Eigen::VectorXd& w,
                   const Eigen::VectorXd& s);
// Same, with the extension value f(w) already known (saves the oracle sweep).
double duality_gap_given_lovasz(double lovasz, const Eigen::VectorXd& w,
                                const Eigen::VectorXd& s);

// Snapshot of the certificate produced by one solver iteration, before the
// iterate is improved.  Everything screening needs is read off the single
// greedy sweep performed here.
struct StepCertificate {
  Eigen::VectorXd w;                  // primal candidate (isotonic refinement of -s)
  Eigen::VectorXd s;                  // dual iterate, a convex combination of vertices
  double gap = 0.0;                   // duality gap of (w, s)
  double lovasz = 0.0;                // f(w)
  double f_ground = 0.0;              // F of the full (current) ground set
  std::vector<int> order;             // decreasing order of w
  std::vector<double> prefix_values;  // F of the k-prefixes of that order
};

// Minimal stepping interface shared by both solvers so the screening driver
// can interleave rule passes with either one.
class DualSolver {
public:
  virtual ~DualSolver() = default;
  // Performs one iteration: computes the certificate for the current
  // iterate, then improves the iterate (unless already optimal or stalled).
  virtual StepCertificate step() = 0;
  virtual const Eigen::VectorXd& dual() const = 0;
  // True when the last step could not move the iterate despite a positive
  // gap (numerical stagnation); the caller should stop iterating.
  virtual bool stalled() const = 0;
};

// Minimum-norm-point solver over the base polytope: major cycles add the
// greedy vertex at -s to a corral, minor cycles take the affine minimizer
// over the corral and drop atoms whose affine weight vanishes.
class WolfeSolver final : public DualSolver {
public:
  // Starts from the greedy vertex of the identity ordering.
  explicit WolfeSolver(std::shared_ptr<const SubmodularOracle> oracle);
  // Starts from a supplied vertex (used when restarting on a reduced problem).
  WolfeSolver(std::shared_ptr<const SubmodularOracle> oracle,
              Eigen::VectorXd start_vertex);

  StepCertificate step() override;
  const Eigen::VectorXd& dual() const override { return x_; }
  bool stalled() const override { return stalled_; }

  // Current corral as (vertex, weight) atoms reconstructing dual().
  std::vector<BasePoint::Atom> atoms() const;

private:
  void affine_minimize();

  std::shared_ptr<const SubmodularOracle> oracle_;
  std::vector<Eigen::VectorXd> vertices_;
  std::vector<double> lambda_;
  Eigen::MatrixXd gram_;   // Gram matrix of vertices_, maintained incrementally
  Eigen::VectorXd x_;      // current dual iterate = sum lambda_i * vertices_i
  Eigen::VectorXd pending_; // vertex found by the last step, applied on the next
  bool stalled_ = false;
};

// Conditional-gradient (Frank-Wolfe) solver on the same dual: moves toward
// the greedy vertex with the exact line-search step.  Slower than the corral
// method but with trivially robust iterations; used as a fallback and as an
// independent cross-check.
class FrankWolfeSolver final : public DualSolver {
public:
  explicit FrankWolfeSolver(std::shared_ptr<const SubmodularOracle> oracle);
  FrankWolfeSolver(std::shared_ptr<const SubmodularOracle> oracle,
                   Eigen::VectorXd start_vertex);

  StepCertificate step() override;
  const Eigen::VectorXd& dual() const override { return x_; }
  bool stalled() const override { return stalled_; }

private:
  std::shared_ptr<const SubmodularOracle> oracle_;
  Eigen::VectorXd x_;
  bool stalled_ = false;
};

std::unique_ptr<DualSolver> make_solver(SolverKind kind,
                                        std::shared_ptr<const SubmodularOracle> oracle);
std::unique_ptr<DualSolver> make_solver(SolverKind kind,
                                        std::shared_ptr<const SubmodularOracle> oracle,
                                        Eigen::VectorXd start_vertex);

// One conditional-gradient update of s in place; returns the line-search
// step length, clamped to [0, 1] (0 when s is already the vertex itself).
double conditional_gradient_step(const SubmodularOracle& oracle, Eigen::VectorXd& s);

struct IterationRecord {
  long long iteration = 0;
  double gap = 0.0;
  double dual_norm = 0.0;
  long long oracle_calls = 0;
  long long elapsed_ns = 0;
};

struct SolveReport {
  Eigen::VectorXd w_star, s_star;
  double final_gap = 0.0;
  long long iterations = 0;
  long long oracle_calls = 0;
  bool converged = false;
  std::vector<BasePoint::Atom> atoms;  // corral decomposition when available
  std::vector<IterationRecord> trace;
};

using IterationCallback = std::function<void(const StepCertificate&)>;

// Runs the minimum-norm-point method until the duality gap drops to eps or
// max_iter major cycles elapse (max_iter = 0 means 50 * p).  Non-convergence
// is reported through the flag, never by discarding the best iterate.
SolveReport min_norm_point(std::shared_ptr<const SubmodularOracle> oracle,
                           double eps, long long max_iter = 0,
                           const IterationCallback& callback = {});

// Same loop with the conditional-gradient solver.
SolveReport min_norm_point_fw(std::shared_ptr<const SubmodularOracle> oracle,
                              double eps, long long max_iter = 0,
                              const IterationCallback& callback = {});

} // namespace sfm::solver
