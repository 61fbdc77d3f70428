#pragma once

#include <Eigen/Core>
#include <vector>

namespace sfm::solver {

// Isotonic refinement of a dual iterate: returns the w closest to -s in
// Euclidean distance subject to being nonincreasing along the given ordering
// (w[ordering[0]] >= w[ordering[1]] >= ...).  Classic pool-adjacent-violators:
// the result is a block-constant monotone rearrangement of -s.
Eigen::VectorXd pav_refine(const Eigen::VectorXd& s, const std::vector<int>& ordering);

} // namespace sfm::solver
