#pragma once

#include <Eigen/Core>
#include <vector>

namespace sfm {

// A point of the base polytope of a submodular function: s(A) <= F(A) for
// every A, with s(V) = F(V).  When produced by a corral-based solver the
// optional atoms record the convex combination of greedy vertices that
// reconstructs coords.
struct BasePoint {
  Eigen::VectorXd coords;

  struct Atom {
    Eigen::VectorXd vertex;
    double weight;
  };
  std::vector<Atom> atoms; // optional; empty when the point is a single vertex
};

} // namespace sfm
