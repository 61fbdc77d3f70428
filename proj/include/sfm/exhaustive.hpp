#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "sfm/element_set.hpp"
#include "sfm/oracle.hpp"

namespace sfm {

// Exhaustive small-p routines.  They are the ground truth everything else is
// audited against, so they stay deliberately naive: enumerate, compare.

struct BruteForceResult {
  double min_value = 0.0;
  // Intersection of all minimizing sets.  Minimizers of a submodular
  // function form a lattice, so this intersection is itself a minimizer.
  ElementSet minimal_minimizer;
  // Union of all minimizing sets; also a minimizer by the same argument.
  ElementSet maximal_minimizer;
};

// Scans all 2^p subsets.  Sets whose value is within
// tie_tol_rel * (max F - min F) of the minimum count as minimizers, which
// keeps floating-point oracles (log-determinants) from splitting exact ties.
// Throws GroundSetTooLarge for p > 22.
BruteForceResult brute_force_sfm(const SubmodularOracle& oracle,
                                 double tie_tol_rel = 1e-9);

// True iff s(A) <= F(A) + tol for every subset A and |s(V) - F(V)| <= tol.
// Throws GroundSetTooLarge for p > 22.
bool check_base_membership(const SubmodularOracle& oracle,
                           const Eigen::VectorXd& s, double tol);

// Number of subset pairs (A, B) violating
//   F(A) + F(B) >= F(A|B) + F(A&B) - tol_scaled,
// where tol_scaled = tol_rel * max(1, spread of F).  Exhaustive over all
// pairs; throws GroundSetTooLarge for p > 12 (4^p pairs).
long long submodularity_violations(const SubmodularOracle& oracle,
                                   double tol_rel = 1e-9);

// Same inequality on n random subset pairs drawn from the given seed; usable
// at any p where single evaluations are affordable.
long long submodularity_violations_sampled(const SubmodularOracle& oracle,
                                           int n_pairs, uint64_t seed,
                                           double tol_rel = 1e-9);

} // namespace sfm
