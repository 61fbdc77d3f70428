#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "sfm/element_set.hpp"
#include "sfm/oracle.hpp"
#include "sfm/solver.hpp"

namespace sfm::screening {

// Everything needed to bound where the primal optimum w* can still be once a
// solver pair (w, s) with duality gap G is known:
//   - a ball of radius sqrt(2 G) around w (strong convexity),
//   - an interval for ||w*||_1 (lower bound from the best known set value,
//     upper bound from ||s||_1),
//   - the hyperplane sum(w*) = -F(ground set).
// Coordinate-wise consequences of this region are the screening rules.
struct GapCertificate {
  Eigen::VectorXd w_hat, s_hat;
  double gap = 0.0;                  // duality gap of (w_hat, s_hat), >= 0
  double f_ground = 0.0;             // F of the full reduced ground set
  double best_superlevel_value = 0.0; // F(C) for the chosen superlevel set C
  double s_l1 = 0.0;                 // l1 norm of s_hat

  // Validates shape, clamps gap values in [-1e-9, 0) to 0 (NegativeGap below
  // that), and checks that the norm interval is nonempty.
  GapCertificate(Eigen::VectorXd w, Eigen::VectorXd s, double gap_in,
                 double f_ground_in, double best_superlevel_in);

  double radius() const;                     // sqrt(2 * gap)
  double l1_lower_bound() const { return f_ground - 2.0 * best_superlevel_value; }
};

// Classification progress over the original ground set.
struct ScreeningState {
  ElementSet active;           // proven members of every relevant minimizer
  ElementSet inactive;         // proven non-members
  std::vector<int> remaining;  // reduced index -> original element, ascending

  explicit ScreeningState(int p);
  int original_size() const { return active.ground_size(); }
  int reduced_size() const { return static_cast<int>(remaining.size()); }
  double rejection_ratio() const;
  // Moves newly classified elements (original indices) out of remaining.
  void apply(const ElementSet& new_active, const ElementSet& new_inactive);
};

struct CoordinateBounds {
  int j = 0;  // reduced index
  double w_min = 0.0, w_max = 0.0;
};

// Extrema of coordinate j over ball-and-hyperplane part of the certificate
// region, from the closed-form quadratic (discriminant clamped to zero from
// below).  Requires at least two free coordinates; with one, the hyperplane
// pins the answer and callers use that directly.
CoordinateBounds coordinate_bounds_bp(const GapCertificate& cert, int j);

enum class SignConstraint { nonpositive, nonnegative };

// Closed-form maximum of ||w||_1 over the certificate ball intersected with
// {w_j <= 0} (or >= 0).  Only defined when the coordinate could still cross
// zero inside the ball: 0 < w_hat_j <= radius for the nonpositive constraint
// and the mirror condition for nonnegative.
double l1_max_under_sign(const GapCertificate& cert, int j, SignConstraint sign);

// Which rule families a pass may apply (ablation switch).
struct RuleSet {
  bool allow_active = true;
  bool allow_inactive = true;
};

struct Verdicts {
  ElementSet new_active;    // original indices
  ElementSet new_inactive;  // original indices
};

// One full rule pass over every remaining coordinate.  Each coordinate gets
// the interval test (bounds strictly positive => active, strictly negative
// => inactive) and, when its sign could still flip inside the ball, the
// l1-shell test; verdicts are OR-ed since each rule is safe on its own.
// Strictness margin 1e-10 on every comparison.
Verdicts screen_pass(const GapCertificate& cert, const ScreeningState& state,
                     const RuleSet& rules = {});

// The reduced problem for the current classification (fixing `active` in,
// dropping `inactive`), always built from the root oracle.
std::shared_ptr<ContractedOracle> contract(
    std::shared_ptr<const SubmodularOracle> root, const ScreeningState& state);

// Among the p+1 prefix sets of the decreasing order of w (empty set first),
// the one with the smallest oracle value; ties go to smaller cardinality.
std::pair<ElementSet, double> best_superlevel_set(const SubmodularOracle& oracle,
                                                  const Eigen::VectorXd& w);
// Same, read off an existing sorted sweep instead of a fresh oracle pass.
std::pair<ElementSet, double> best_superlevel_set(
    const std::vector<int>& order, const std::vector<double>& prefix_values);

// Carries the primal iterate onto a newly contracted problem: keep the
// surviving coordinates of w, rebuild s as the greedy vertex at that w, and
// recompute the gap from scratch (restriction can increase it slightly).
struct RestrictResult {
  Eigen::VectorXd w, s;
  double gap = 0.0;
  double lovasz = 0.0;
  double f_ground = 0.0;
};
RestrictResult restrict_iterates(const Eigen::VectorXd& w_old,
                                 const std::vector<int>& old_remaining,
                                 const std::vector<int>& new_remaining,
                                 const SubmodularOracle& oracle_new);

// ------------------------------------------------------------ IAES driver --

struct TriggerRecord {
  int trigger_index = 0;
  long long solver_iteration = 0;
  double gap = 0.0;        // gap that fired the trigger
  int n_active = 0;        // total classified so far (original indices)
  int n_inactive = 0;
  double rejection_ratio = 0.0;
  int p_hat = 0;           // reduced problem size after the pass
  long long elapsed_ns = 0;
};

// Audit hook: fired after every rule pass with the certificate it used and
// the verdicts it produced, before the driver contracts the problem.
struct TriggerInfo {
  const GapCertificate& cert;
  const std::vector<int>& remaining_before;  // reduced -> original at cert time
  const ElementSet& new_active;
  const ElementSet& new_inactive;
  const ElementSet& active_after;
  const ElementSet& inactive_after;
};

struct IaesReport {
  double value = 0.0;  // F(A*) on the original oracle
  long long iterations = 0;
  long long oracle_calls = 0;
  double final_gap = 0.0;
  bool converged = false;
  double screen_seconds = 0.0;  // rule passes + contraction + restriction
  double solve_seconds = 0.0;   // solver stepping
  double total_seconds = 0.0;
  std::vector<solver::IterationRecord> trace;
  std::vector<TriggerRecord> triggers;
};

struct IaesOptions {
  double eps = 1e-6;
  double rho = 0.5;  // trigger when gap < rho * gap at last trigger
  solver::SolverKind solver = solver::SolverKind::wolfe;
  RuleSet rules{};
  long long max_iter = 0;  // total solver iterations; 0 means 50 * p
  std::function<void(const TriggerInfo&)> on_trigger;
};

struct IaesResult {
  ElementSet a_star;
  IaesReport report;
};

// The screening-interleaved solve: run the dual solver, and every time the
// gap halves (factor rho), classify coordinates, fix them, contract the
// problem, and continue on the remainder.  Returns the identified minimizer
// (elements proven in, plus strict positives of the final primal iterate).
IaesResult iaes_solve(std::shared_ptr<const SubmodularOracle> oracle,
                      const IaesOptions& opts = {});
IaesResult iaes_solve(std::shared_ptr<const SubmodularOracle> oracle, double eps,
                      double rho, solver::SolverKind kind);

} // namespace sfm::screening
