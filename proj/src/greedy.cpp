#include "sfm/greedy.hpp"

#include <algorithm>
#include <numeric>

namespace sfm {

std::vector<int> decreasing_order(const Eigen::VectorXd& w) {
  std::vector<int> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return w[a] > w[b]; });
  return order;
}

static void check_permutation(int p, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != p)
    throw PreconditionViolated("ordering length differs from ground size");
  std::vector<char> seen(p, 0);
  for (int j : order) {
    if (j < 0 || j >= p || seen[j])
      throw PreconditionViolated("ordering is not a permutation of 0..p-1");
    seen[j] = 1;
  }
}

BasePoint vertex_from_order(const SubmodularOracle& oracle,
                            const std::vector<int>& order) {
  const int p = oracle.ground_size();
  check_permutation(p, order);
  std::vector<double> prefix;
  oracle.chain_values(ElementSet(p), order, prefix);
  BasePoint s;
  s.coords.resize(p);
  for (int k = 0; k < p; ++k) s.coords[order[k]] = prefix[k + 1] - prefix[k];
  return s;
}

GreedyResult greedy_pass(const SubmodularOracle& oracle, const Eigen::VectorXd& w) {
  const int p = oracle.ground_size();
  if (w.size() != p)
    throw PreconditionViolated("direction length differs from ground size");
  GreedyResult r;
  r.order = decreasing_order(w);
  oracle.chain_values(ElementSet(p), r.order, r.prefix_values);
  r.point.coords.resize(p);
  for (int k = 0; k < p; ++k)
    r.point.coords[r.order[k]] = r.prefix_values[k + 1] - r.prefix_values[k];
  r.lovasz = w.dot(r.point.coords);
  return r;
}

BasePoint greedy_linear_maximize(const SubmodularOracle& oracle,
                                 const Eigen::VectorXd& w) {
  return greedy_pass(oracle, w).point;
}

double lovasz_extension(const SubmodularOracle& oracle, const Eigen::VectorXd& w) {
  return greedy_pass(oracle, w).lovasz;
}

} // namespace sfm
