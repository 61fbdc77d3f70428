#include "sfm/oracle.hpp"

namespace sfm {

ContractedOracle::ContractedOracle(std::shared_ptr<const SubmodularOracle> base,
                                   const ElementSet& fixed_in,
                                   const ElementSet& fixed_out)
    : SubmodularOracle(fixed_in.ground_size() -
                       (fixed_in | fixed_out).cardinality()),
      base_(std::move(base)),
      fixed_in_(fixed_in) {
  if (!base_) throw PreconditionViolated("contraction needs a base oracle");
  if (fixed_in.ground_size() != base_->ground_size() ||
      fixed_out.ground_size() != base_->ground_size())
    throw PreconditionViolated("contraction sets must live on the oracle's ground set");
  if (fixed_in.intersects(fixed_out))
    throw PreconditionViolated("fixed-in and fixed-out sets overlap");
  lift_ = (fixed_in | fixed_out).complement().members();
  f_fixed_ = base_->evaluate(fixed_in_);
}

ElementSet ContractedOracle::lift(const ElementSet& reduced) const {
  if (reduced.ground_size() != ground_size())
    throw PreconditionViolated("reduced set has wrong ground size");
  ElementSet out = fixed_in_;
  for (int j : reduced.members()) out.insert(lift_[j]);
  return out;
}

double ContractedOracle::eval_raw(const ElementSet& a) const {
  return base_->evaluate(lift(a)) - f_fixed_;
}

void ContractedOracle::chain_values(const ElementSet& base,
                                    const std::vector<int>& order,
                                    std::vector<double>& out) const {
  count_calls(static_cast<long long>(order.size()) + 1);
  std::vector<int> lifted(order.size());
  for (size_t k = 0; k < order.size(); ++k) lifted[k] = lift_[order[k]];
  base_->chain_values(lift(base), lifted, out);
  for (double& v : out) v -= f_fixed_;
}

} // namespace sfm
