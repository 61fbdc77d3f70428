#pragma once

#include <memory>
#include <vector>

#include "sfm/element_set.hpp"
#include "sfm/errors.hpp"

namespace sfm {

// Evaluation interface for a submodular set function F over {0..p-1}.
//
// Every oracle is normalized: evaluate() returns F(A) - F(empty), so the
// empty set always maps to exactly 0.  Subclasses implement eval_raw() and
// may override chain_values() when they can walk a chain of nested sets
// incrementally (that path dominates the total running time of the solvers).
class SubmodularOracle {
public:
  explicit SubmodularOracle(int ground_size) : p_(ground_size) {
    if (ground_size < 0)
      throw PreconditionViolated("oracle ground size must be nonnegative");
  }
  virtual ~SubmodularOracle() = default;

  int ground_size() const { return p_; }

  // Normalized value F(A) - F(empty).
  double evaluate(const ElementSet& a) const {
    if (a.ground_size() != p_)
      throw PreconditionViolated("set and oracle have different ground sizes");
    ++calls_;
    if (a.empty()) return 0.0;
    return eval_raw(a) - empty_offset();
  }

  // Normalized values along the chain
  //   base, base+{order[0]}, base+{order[0],order[1]}, ...
  // out[k] = evaluate(base united with the first k entries of order), so out
  // gets order.size()+1 entries.  Entries of order must be distinct and
  // disjoint from base.  The generic implementation re-evaluates each set
  // from scratch; concrete oracles override it with incremental updates.
  virtual void chain_values(const ElementSet& base, const std::vector<int>& order,
                            std::vector<double>& out) const {
    out.resize(order.size() + 1);
    ElementSet cur = base;
    out[0] = evaluate(cur);
    for (size_t k = 0; k < order.size(); ++k) {
      cur.insert(order[k]);
      out[k + 1] = evaluate(cur);
    }
  }

  // Observability: how many set-function values this oracle has produced
  // (one per evaluate(), one per chain entry).  Used for the oracle_calls
  // column in solver traces.
  long long calls() const { return calls_; }
  void reset_calls() const { calls_ = 0; }

protected:
  virtual double eval_raw(const ElementSet& a) const = 0;

  double empty_offset() const {
    if (!offset_known_) {
      offset_ = eval_raw(ElementSet(p_));
      offset_known_ = true;
    }
    return offset_;
  }

  // For chain_values overrides: account for n values produced in one pass.
  void count_calls(long long n) const { calls_ += n; }

private:
  int p_;
  mutable long long calls_ = 0;
  mutable bool offset_known_ = false;
  mutable double offset_ = 0.0;
};

// The reduced problem after fixing a set of elements in and discarding
// another set: on the surviving ground set (ascending original order),
//
//   reduced(C) = F(fixed_in  united with  lift(C)) - F(fixed_in).
//
// This is again submodular and evaluates to 0 on the empty set, so the whole
// solver/screening stack runs on it unchanged.  Minimizers of the reduced
// problem, united with fixed_in, minimize F over all sets that contain
// fixed_in and avoid fixed_out.
class ContractedOracle final : public SubmodularOracle {
public:
  ContractedOracle(std::shared_ptr<const SubmodularOracle> base,
                   const ElementSet& fixed_in, const ElementSet& fixed_out);

  // Reduced index -> original element, ascending in the original index.
  const std::vector<int>& lift_map() const { return lift_; }

  // fixed_in united with the original-index image of a reduced set.
  ElementSet lift(const ElementSet& reduced) const;

  const std::shared_ptr<const SubmodularOracle>& base_oracle() const { return base_; }
  double fixed_in_value() const { return f_fixed_; }

  void chain_values(const ElementSet& base, const std::vector<int>& order,
                    std::vector<double>& out) const override;

protected:
  double eval_raw(const ElementSet& a) const override;

private:
  std::shared_ptr<const SubmodularOracle> base_;
  ElementSet fixed_in_;
  std::vector<int> lift_;
  double f_fixed_;
};

} // namespace sfm
