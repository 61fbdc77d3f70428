#include "sfm/pav.hpp"

#include <vector>

#include "sfm/errors.hpp"

namespace sfm::solver {

Eigen::VectorXd pav_refine(const Eigen::VectorXd& s, const std::vector<int>& ordering) {
  const int p = static_cast<int>(s.size());
  if (static_cast<int>(ordering.size()) != p)
    throw PreconditionViolated("ordering length differs from vector length");
  {
    std::vector<char> seen(p, 0);
    for (int j : ordering) {
      if (j < 0 || j >= p || seen[j])
        throw PreconditionViolated("ordering is not a permutation of 0..p-1");
      seen[j] = 1;
    }
  }

  // Pool adjacent violators for a nonincreasing fit: maintain a stack of
  // blocks (sum, count); merge while a block's mean exceeds its predecessor's.
  std::vector<double> sum;
  std::vector<int> count;
  sum.reserve(p);
  count.reserve(p);
  for (int k = 0; k < p; ++k) {
    sum.push_back(-s[ordering[k]]);
    count.push_back(1);
    while (sum.size() >= 2) {
      size_t t = sum.size() - 1;
      if (sum[t - 1] * count[t] < sum[t] * count[t - 1]) {
        sum[t - 1] += sum[t];
        count[t - 1] += count[t];
        sum.pop_back();
        count.pop_back();
      } else {
        break;
      }
    }
  }

  Eigen::VectorXd w(p);
  int pos = 0;
  for (size_t b = 0; b < sum.size(); ++b) {
    double mean = sum[b] / count[b];
    for (int t = 0; t < count[b]; ++t) w[ordering[pos++]] = mean;
  }
  return w;
}

} // namespace sfm::solver
