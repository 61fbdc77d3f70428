#include "sfm/exhaustive.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sfm {

namespace {

void guard_p(int p, int limit, const char* who) {
  if (p > limit)
    throw GroundSetTooLarge(std::string(who) + " supports p <= " +
                            std::to_string(limit) + ", got " + std::to_string(p));
}

// All 2^p normalized values, indexed by bitmask.
std::vector<double> all_values(const SubmodularOracle& oracle) {
  const int p = oracle.ground_size();
  const uint64_t n = uint64_t{1} << p;
  std::vector<double> v(n);
  for (uint64_t mask = 0; mask < n; ++mask)
    v[mask] = oracle.evaluate(ElementSet::from_mask(p, mask));
  return v;
}

} // namespace

BruteForceResult brute_force_sfm(const SubmodularOracle& oracle,
                                 double tie_tol_rel) {
  const int p = oracle.ground_size();
  guard_p(p, 22, "brute_force_sfm");
  const uint64_t n = uint64_t{1} << p;

  double best = 0.0, lo = 0.0, hi = 0.0;
  for (uint64_t mask = 0; mask < n; ++mask) {
    double v = oracle.evaluate(ElementSet::from_mask(p, mask));
    if (v < best) best = v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double tol = tie_tol_rel * std::max(1.0, hi - lo);

  uint64_t inter = n - 1, uni = 0;
  for (uint64_t mask = 0; mask < n; ++mask) {
    double v = oracle.evaluate(ElementSet::from_mask(p, mask));
    if (v <= best + tol) {
      inter &= mask;
      uni |= mask;
    }
  }
  BruteForceResult r;
  r.min_value = best;
  r.minimal_minimizer = ElementSet::from_mask(p, inter);
  r.maximal_minimizer = ElementSet::from_mask(p, uni);
  return r;
}

bool check_base_membership(const SubmodularOracle& oracle,
                           const Eigen::VectorXd& s, double tol) {
  const int p = oracle.ground_size();
  guard_p(p, 22, "check_base_membership");
  if (s.size() != p)
    throw PreconditionViolated("vector length differs from ground size");

  // Subset sums of s by one-bit extension, then compare against F.
  const uint64_t n = uint64_t{1} << p;
  std::vector<double> ssum(n, 0.0);
  for (uint64_t mask = 1; mask < n; ++mask) {
    int low = std::countr_zero(mask);
    ssum[mask] = ssum[mask & (mask - 1)] + s[low];
  }
  for (uint64_t mask = 0; mask < n; ++mask) {
    if (ssum[mask] > oracle.evaluate(ElementSet::from_mask(p, mask)) + tol)
      return false;
  }
  double fv = oracle.evaluate(ElementSet::full_set(p));
  return std::abs(ssum[n - 1] - fv) <= tol;
}

long long submodularity_violations(const SubmodularOracle& oracle, double tol_rel) {
  const int p = oracle.ground_size();
  guard_p(p, 12, "submodularity_violations");
  std::vector<double> v = all_values(oracle);
  const double spread =
      *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
  const double tol = tol_rel * std::max(1.0, spread);

  const uint64_t n = uint64_t{1} << p;
  long long bad = 0;
  for (uint64_t a = 0; a < n; ++a)
    for (uint64_t b = a + 1; b < n; ++b)
      if (v[a] + v[b] < v[a | b] + v[a & b] - tol) ++bad;
  return bad;
}

long long submodularity_violations_sampled(const SubmodularOracle& oracle,
                                           int n_pairs, uint64_t seed,
                                           double tol_rel) {
  const int p = oracle.ground_size();
  if (p > 62) throw GroundSetTooLarge("sampled submodularity check supports p <= 62");
  std::mt19937_64 eng(seed);
  const uint64_t full = (p == 62) ? ~uint64_t{0} >> 2 : (uint64_t{1} << p) - 1;

  long long bad = 0;
  for (int t = 0; t < n_pairs; ++t) {
    uint64_t a = eng() & full, b = eng() & full;
    double fa = oracle.evaluate(ElementSet::from_mask(p, a));
    double fb = oracle.evaluate(ElementSet::from_mask(p, b));
    double fu = oracle.evaluate(ElementSet::from_mask(p, a | b));
    double fi = oracle.evaluate(ElementSet::from_mask(p, a & b));
    double scale = std::max({1.0, std::abs(fa), std::abs(fb), std::abs(fu), std::abs(fi)});
    if (fa + fb < fu + fi - tol_rel * scale) ++bad;
  }
  return bad;
}

} // namespace sfm
