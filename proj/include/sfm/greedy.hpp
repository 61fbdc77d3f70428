#pragma once

#include <Eigen/Core>
#include <vector>

#include "sfm/base_point.hpp"
#include "sfm/oracle.hpp"

namespace sfm {

// Indices 0..p-1 sorted so that w[order[0]] >= w[order[1]] >= ...; equal
// weights keep ascending index order (stable), which makes every consumer of
// an ordering deterministic.
std::vector<int> decreasing_order(const Eigen::VectorXd& w);

// The base-polytope vertex of a given permutation: element order[k] gets the
// marginal gain F(first k+1 of order) - F(first k of order).
BasePoint vertex_from_order(const SubmodularOracle& oracle,
                            const std::vector<int>& order);

// Everything one sorted oracle sweep yields at once.  The solvers lean on
// this: a single pass provides the maximizing vertex, the extension value,
// and all nested prefix values (whose minimum screening wants as its
// best-superlevel-set candidate).
struct GreedyResult {
  BasePoint point;                   // maximizer of <w, s> over the base polytope
  std::vector<int> order;            // the decreasing order of w that was used
  std::vector<double> prefix_values; // F of the k-element prefixes, k = 0..p
  double lovasz = 0.0;               // <w, point.coords> = extension value f(w)
};

GreedyResult greedy_pass(const SubmodularOracle& oracle, const Eigen::VectorXd& w);

// argmax of <w, s> over the base polytope (ties in w broken by ascending index).
BasePoint greedy_linear_maximize(const SubmodularOracle& oracle,
                                 const Eigen::VectorXd& w);

// The convex extension f(w) = <w, greedy vertex at w>.
double lovasz_extension(const SubmodularOracle& oracle, const Eigen::VectorXd& w);

} // namespace sfm
