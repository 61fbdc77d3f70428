#include "sfm/screening.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "sfm/errors.hpp"
#include "sfm/greedy.hpp"

namespace sfm::screening {

namespace {
// Strictness margin on every rule comparison: the exact inequalities of the
// rule derivations are unsafe at machine precision, and a margin can only
// delay a classification, never produce a wrong one.
constexpr double kMargin = 1e-10;
} // namespace

// ------------------------------------------------------------ certificate --

GapCertificate::GapCertificate(Eigen::VectorXd w, Eigen::VectorXd s, double gap_in,
                               double f_ground_in, double best_superlevel_in)
    : w_hat(std::move(w)),
      s_hat(std::move(s)),
      gap(gap_in),
      f_ground(f_ground_in),
      best_superlevel_value(best_superlevel_in) {
  if (w_hat.size() != s_hat.size())
    throw PreconditionViolated("certificate vectors differ in length");
  if (!w_hat.allFinite() || !s_hat.allFinite() || !std::isfinite(gap))
    throw PreconditionViolated("certificate contains non-finite values");
  if (gap < -1e-9)
    throw NegativeGap("certificate gap " + std::to_string(gap) +
                      " is negative beyond round-off");
  if (gap < 0.0) gap = 0.0;
  s_l1 = s_hat.lpNorm<1>();
  if (l1_lower_bound() > s_l1 + 1e-9)
    throw SfmError("certificate norm interval is empty: lower bound " +
                   std::to_string(l1_lower_bound()) + " exceeds ||s||_1 " +
                   std::to_string(s_l1) + "; the oracle or the iterates are inconsistent");
}

double GapCertificate::radius() const { return std::sqrt(2.0 * gap); }

// ------------------------------------------------------------------ state --

ScreeningState::ScreeningState(int p) : active(p), inactive(p) {
  remaining.resize(p);
  for (int j = 0; j < p; ++j) remaining[j] = j;
}

double ScreeningState::rejection_ratio() const {
  const int p = original_size();
  if (p == 0) return 1.0;
  return static_cast<double>(active.cardinality() + inactive.cardinality()) / p;
}

void ScreeningState::apply(const ElementSet& new_active,
                           const ElementSet& new_inactive) {
  if (new_active.intersects(new_inactive))
    throw ConflictingVerdict("an element was classified both active and inactive");
  ElementSet classified = active | inactive;
  if (classified.intersects(new_active) || classified.intersects(new_inactive))
    throw PreconditionViolated("re-classification of an already fixed element");
  active = active | new_active;
  inactive = inactive | new_inactive;
  remaining = (active | inactive).complement().members();
}

// ------------------------------------------------------------ rule pieces --

CoordinateBounds coordinate_bounds_bp(const GapCertificate& cert, int j) {
  const int p = static_cast<int>(cert.w_hat.size());
  if (p < 2)
    throw DegenerateGroundSet(
        "coordinate bounds need at least two free coordinates; with one, the "
        "sum constraint pins the answer to -F(ground set)");
  if (j < 0 || j >= p) throw PreconditionViolated("coordinate index out of range");

  const double wj = cert.w_hat[j];
  const double others = cert.w_hat.sum() - wj;
  const double b = 2.0 * (others + cert.f_ground - (p - 1) * wj);
  const double c = (others + cert.f_ground) * (others + cert.f_ground) -
                   (p - 1) * (2.0 * cert.gap - wj * wj);
  double disc = b * b - 4.0 * p * c;
  if (disc < 0.0) disc = 0.0; // round-off only; shrinks, never widens
  const double root = std::sqrt(disc);

  CoordinateBounds out;
  out.j = j;
  out.w_min = (-b - root) / (2.0 * p);
  out.w_max = (-b + root) / (2.0 * p);
  // The hyperplane can only cut the ball down, so the interval always sits
  // inside the ball's own coordinate range; enforce that under round-off.
  const double r = cert.radius();
  out.w_min = std::max(out.w_min, wj - r);
  out.w_max = std::min(out.w_max, wj + r);
  if (out.w_min > out.w_max) out.w_min = out.w_max = std::clamp(wj, out.w_min, out.w_max);
  return out;
}

double l1_max_under_sign(const GapCertificate& cert, int j, SignConstraint sign) {
  const int p = static_cast<int>(cert.w_hat.size());
  if (j < 0 || j >= p) throw PreconditionViolated("coordinate index out of range");
  const double wj = cert.w_hat[j];
  const double r = cert.radius();
  const double l1 = cert.w_hat.lpNorm<1>();
  const double cross = std::sqrt(std::max(2.0 * cert.gap - wj * wj, 0.0));

  if (sign == SignConstraint::nonpositive) {
    if (!(wj > 0.0 && wj <= r))
      throw PreconditionViolated(
          "nonpositive-sign maximum is defined for 0 < w_j <= radius");
    if (wj < std::sqrt(2.0 * cert.gap / p))
      return l1 - 2.0 * wj + std::sqrt(2.0 * p * cert.gap);
    return l1 - wj + std::sqrt(static_cast<double>(p - 1)) * cross;
  }
  if (!(wj < 0.0 && -wj <= r))
    throw PreconditionViolated(
        "nonnegative-sign maximum is defined for -radius <= w_j < 0");
  if (wj > -std::sqrt(2.0 * cert.gap / p))
    return l1 + 2.0 * wj + std::sqrt(2.0 * p * cert.gap);
  return l1 + wj + std::sqrt(static_cast<double>(p - 1)) * cross;
}

// ------------------------------------------------------------- rule pass --

Verdicts screen_pass(const GapCertificate& cert, const ScreeningState& state,
                     const RuleSet& rules) {
  const int p_hat = static_cast<int>(cert.w_hat.size());
  if (p_hat != state.reduced_size())
    throw PreconditionViolated("certificate size differs from reduced problem size");

  const int p = state.original_size();
  Verdicts out{ElementSet(p), ElementSet(p)};
  const double r = cert.radius();
  const double l1_lower = cert.l1_lower_bound();

  for (int j = 0; j < p_hat; ++j) {
    const double wj = cert.w_hat[j];
    if (wj == 0.0) continue; // genuinely ambiguous; no rule applies

    bool says_active = false, says_inactive = false;

    if (p_hat == 1) {
      // The sum constraint pins the single coordinate exactly.
      const double pinned = -cert.f_ground;
      says_active = pinned > kMargin;
      says_inactive = pinned < -kMargin;
    } else {
      const CoordinateBounds bounds = coordinate_bounds_bp(cert, j);
      if (bounds.w_min > kMargin) says_active = true;
      if (bounds.w_max < -kMargin) says_inactive = true;

      // The l1-shell test applies while the coordinate could still change
      // sign inside the ball: if even the largest possible ||w||_1 under the
      // flipped sign falls short of the certified lower bound, the sign of
      // the optimum is settled.
      if (wj > 0.0 && wj <= r) {
        if (l1_max_under_sign(cert, j, SignConstraint::nonpositive) <
            l1_lower - kMargin)
          says_active = true;
      } else if (wj < 0.0 && -wj <= r) {
        if (l1_max_under_sign(cert, j, SignConstraint::nonnegative) <
            l1_lower - kMargin)
          says_inactive = true;
      }
    }

    if (says_active && says_inactive)
      throw ConflictingVerdict("coordinate " + std::to_string(j) +
                               " classified both ways; the certificate is invalid");
    if (says_active && rules.allow_active) out.new_active.insert(state.remaining[j]);
    if (says_inactive && rules.allow_inactive)
      out.new_inactive.insert(state.remaining[j]);
  }
  return out;
}

// ----------------------------------------------------- contraction pieces --

std::shared_ptr<ContractedOracle> contract(
    std::shared_ptr<const SubmodularOracle> root, const ScreeningState& state) {
  if (!root) throw PreconditionViolated("contract needs an oracle");
  if (root->ground_size() != state.original_size())
    throw PreconditionViolated("state does not match the oracle's ground set");
  return std::make_shared<ContractedOracle>(std::move(root), state.active,
                                            state.inactive);
}

std::pair<ElementSet, double> best_superlevel_set(
    const std::vector<int>& order, const std::vector<double>& prefix_values) {
  const int p = static_cast<int>(order.size());
  if (static_cast<int>(prefix_values.size()) != p + 1)
    throw PreconditionViolated("prefix values must cover 0..p elements");
  int best_k = 0;
  for (int k = 1; k <= p; ++k)
    if (prefix_values[k] < prefix_values[best_k]) best_k = k;
  ElementSet c(p);
  for (int k = 0; k < best_k; ++k) c.insert(order[k]);
  return {c, prefix_values[best_k]};
}

std::pair<ElementSet, double> best_superlevel_set(const SubmodularOracle& oracle,
                                                  const Eigen::VectorXd& w) {
  GreedyResult g = greedy_pass(oracle, w);
  return best_superlevel_set(g.order, g.prefix_values);
}

RestrictResult restrict_iterates(const Eigen::VectorXd& w_old,
                                 const std::vector<int>& old_remaining,
                                 const std::vector<int>& new_remaining,
                                 const SubmodularOracle& oracle_new) {
  if (static_cast<int>(old_remaining.size()) != w_old.size())
    throw PreconditionViolated("old index map does not match the old iterate");
  if (static_cast<int>(new_remaining.size()) != oracle_new.ground_size())
    throw PreconditionViolated("new index map does not match the new oracle");

  RestrictResult out;
  out.w.resize(new_remaining.size());
  {
    size_t pos_old = 0;
    for (size_t k = 0; k < new_remaining.size(); ++k) {
      while (pos_old < old_remaining.size() &&
             old_remaining[pos_old] != new_remaining[k])
        ++pos_old;
      if (pos_old == old_remaining.size())
        throw PreconditionViolated("surviving element missing from the old map");
      out.w[k] = w_old[pos_old];
    }
  }
  GreedyResult g = greedy_pass(oracle_new, out.w);
  out.s = std::move(g.point.coords);
  out.lovasz = g.lovasz;
  out.f_ground = g.prefix_values.empty() ? 0.0 : g.prefix_values.back();
  out.gap = solver::duality_gap_given_lovasz(out.lovasz, out.w, out.s);
  return out;
}

// ----------------------------------------------------------------- driver --

IaesResult iaes_solve(std::shared_ptr<const SubmodularOracle> oracle, double eps,
                      double rho, solver::SolverKind kind) {
  IaesOptions opts;
  opts.eps = eps;
  opts.rho = rho;
  opts.solver = kind;
  return iaes_solve(std::move(oracle), opts);
}

IaesResult iaes_solve(std::shared_ptr<const SubmodularOracle> root,
                      const IaesOptions& opts) {
  if (!root) throw PreconditionViolated("iaes_solve needs an oracle");
  if (opts.eps <= 0.0) throw PreconditionViolated("eps must be positive");
  if (!(opts.rho > 0.0 && opts.rho < 1.0))
    throw PreconditionViolated("rho must lie strictly between 0 and 1");

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto ns_since = [&](clock::time_point from) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - from)
        .count();
  };

  const int p = root->ground_size();
  const long long max_iter =
      opts.max_iter > 0 ? opts.max_iter : 50LL * std::max(1, p);
  const long long calls0 = root->calls();

  IaesResult result{ElementSet(p), {}};
  IaesReport& rep = result.report;

  ScreeningState state(p);
  std::shared_ptr<const SubmodularOracle> current = root;
  std::unique_ptr<solver::DualSolver> active_solver =
      solver::make_solver(opts.solver, current);

  double gap_at_last_trigger = std::numeric_limits<double>::infinity();
  long long screen_ns = 0;
  bool done = false;

  // Extracts the final answer from the current reduced primal iterate:
  // everything proven active plus the strict positives of w (lifted back to
  // original indices).
  auto finish_with = [&](const Eigen::VectorXd& w, double gap, bool converged) {
    result.a_star = state.active;
    for (int k = 0; k < w.size(); ++k)
      if (w[k] > 0.0) result.a_star.insert(state.remaining[k]);
    rep.final_gap = gap;
    rep.converged = converged;
    done = true;
  };

  if (p == 0) {
    rep.converged = true;
    done = true;
  }

  while (!done && rep.iterations < max_iter) {
    solver::StepCertificate cert_raw = active_solver->step();
    ++rep.iterations;
    rep.trace.push_back({rep.iterations, cert_raw.gap, cert_raw.s.norm(),
                         root->calls() - calls0, ns_since(t0)});

    double current_gap = cert_raw.gap;
    const Eigen::VectorXd* current_w = &cert_raw.w;
    RestrictResult restricted; // keeps the post-contraction iterate alive

    if (cert_raw.gap < opts.rho * gap_at_last_trigger) {
      const auto t_screen = clock::now();
      auto [c_set, c_value] =
          best_superlevel_set(cert_raw.order, cert_raw.prefix_values);
      (void)c_set;
      GapCertificate cert(cert_raw.w, cert_raw.s, cert_raw.gap, cert_raw.f_ground,
                          c_value);
      Verdicts verdicts = screen_pass(cert, state, opts.rules);

      const std::vector<int> remaining_before = state.remaining;
      state.apply(verdicts.new_active, verdicts.new_inactive);
      screen_ns += ns_since(t_screen);

      if (opts.on_trigger)
        opts.on_trigger({cert, remaining_before, verdicts.new_active,
                         verdicts.new_inactive, state.active, state.inactive});

      const bool shrunk =
          !(verdicts.new_active.empty() && verdicts.new_inactive.empty());

      if (shrunk && state.remaining.empty()) {
        // Everything is classified; the minimizer is fully identified.
        rep.triggers.push_back({static_cast<int>(rep.triggers.size()),
                                rep.iterations, cert.gap,
                                state.active.cardinality(),
                                state.inactive.cardinality(), 1.0, 0,
                                ns_since(t0)});
        result.a_star = state.active;
        rep.final_gap = cert.gap;
        rep.converged = true;
        done = true;
        break;
      }

      if (shrunk) {
        const auto t_contract = clock::now();
        auto reduced = contract(root, state);
        restricted = restrict_iterates(cert.w_hat, remaining_before,
                                       state.remaining, *reduced);
        current = reduced;
        active_solver = solver::make_solver(opts.solver, current, restricted.s);
        gap_at_last_trigger = restricted.gap;
        current_gap = restricted.gap;
        current_w = &restricted.w;
        screen_ns += ns_since(t_contract);
      } else {
        // Nothing new was identified: keep the solver state (a restart from
        // a single vertex would lose the corral and could loop forever on a
        // ruleless plateau); just tighten the trigger threshold.
        gap_at_last_trigger = cert.gap;
      }

      rep.triggers.push_back({static_cast<int>(rep.triggers.size()) ,
                              rep.iterations, cert.gap, state.active.cardinality(),
                              state.inactive.cardinality(),
                              state.rejection_ratio(), state.reduced_size(),
                              ns_since(t0)});
    }

    if (!done) {
      if (current_gap <= opts.eps) {
        finish_with(*current_w, current_gap, true);
      } else if (active_solver->stalled()) {
        finish_with(*current_w, current_gap, false);
      }
    }
  }

  if (!done) {
    // Iteration budget exhausted: report the best effort from a fresh
    // certificate of the current iterate.
    Eigen::VectorXd w = -active_solver->dual();
    double gap = solver::duality_gap(*current, w, active_solver->dual());
    finish_with(w, gap, false);
  }

  rep.value = root->evaluate(result.a_star);
  rep.oracle_calls = root->calls() - calls0;
  rep.screen_seconds = static_cast<double>(screen_ns) * 1e-9;
  rep.total_seconds = static_cast<double>(ns_since(t0)) * 1e-9;
  rep.solve_seconds = rep.total_seconds - rep.screen_seconds;
  return result;
}

} // namespace sfm::screening
