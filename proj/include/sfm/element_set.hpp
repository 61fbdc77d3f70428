#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "sfm/errors.hpp"

namespace sfm {

// A subset of the ground set {0, ..., p-1}, stored as a bitset.  All set
// algebra is done against a fixed ground size; combining sets with different
// ground sizes is a precondition violation.
class ElementSet {
public:
  ElementSet() : p_(0) {}

  explicit ElementSet(int ground_size) : p_(check_p(ground_size)) {
    words_.assign(word_count(p_), 0);
  }

  ElementSet(int ground_size, std::initializer_list<int> elements)
      : ElementSet(ground_size) {
    for (int e : elements) insert(e);
  }

  static ElementSet empty_set(int ground_size) { return ElementSet(ground_size); }

  static ElementSet full_set(int ground_size) {
    ElementSet s(ground_size);
    for (auto& w : s.words_) w = ~uint64_t{0};
    s.mask_tail();
    return s;
  }

  static ElementSet from_indices(int ground_size, const std::vector<int>& elements) {
    ElementSet s(ground_size);
    for (int e : elements) s.insert(e);
    return s;
  }

  // Interprets bit j of `mask` as membership of element j.  Only valid for
  // ground sizes up to 64; used by exhaustive enumeration.
  static ElementSet from_mask(int ground_size, uint64_t mask) {
    if (ground_size > 64)
      throw PreconditionViolated("from_mask requires ground size <= 64");
    ElementSet s(ground_size);
    if (!s.words_.empty()) s.words_[0] = mask;
    s.mask_tail();
    return s;
  }

  int ground_size() const { return p_; }

  int cardinality() const {
    int n = 0;
    for (uint64_t w : words_) n += std::popcount(w);
    return n;
  }

  bool empty() const {
    for (uint64_t w : words_)
      if (w) return false;
    return true;
  }

  bool contains(int e) const {
    check_element(e);
    return (words_[e >> 6] >> (e & 63)) & 1;
  }

  void insert(int e) {
    check_element(e);
    words_[e >> 6] |= uint64_t{1} << (e & 63);
  }

  void erase(int e) {
    check_element(e);
    words_[e >> 6] &= ~(uint64_t{1} << (e & 63));
  }

  ElementSet operator|(const ElementSet& o) const {
    ElementSet r = aligned_copy(o);
    for (size_t i = 0; i < r.words_.size(); ++i) r.words_[i] |= o.words_[i];
    return r;
  }

  ElementSet operator&(const ElementSet& o) const {
    ElementSet r = aligned_copy(o);
    for (size_t i = 0; i < r.words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }

  // Set difference: elements of *this not in o.
  ElementSet operator-(const ElementSet& o) const {
    ElementSet r = aligned_copy(o);
    for (size_t i = 0; i < r.words_.size(); ++i) r.words_[i] &= ~o.words_[i];
    return r;
  }

  ElementSet complement() const {
    ElementSet r = *this;
    for (auto& w : r.words_) w = ~w;
    r.mask_tail();
    return r;
  }

  bool operator==(const ElementSet& o) const {
    return p_ == o.p_ && words_ == o.words_;
  }
  bool operator!=(const ElementSet& o) const { return !(*this == o); }

  bool is_subset_of(const ElementSet& o) const {
    check_same_ground(o);
    for (size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  bool intersects(const ElementSet& o) const {
    check_same_ground(o);
    for (size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  // Members in ascending order.
  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(cardinality());
    for (size_t i = 0; i < words_.size(); ++i) {
      uint64_t w = words_[i];
      while (w) {
        int b = std::countr_zero(w);
        out.push_back(static_cast<int>(i * 64 + b));
        w &= w - 1;
      }
    }
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int e : members()) {
      if (!first) s += ", ";
      s += std::to_string(e);
      first = false;
    }
    return s + "}";
  }

private:
  static int check_p(int p) {
    if (p < 0) throw PreconditionViolated("ground size must be nonnegative");
    return p;
  }
  static size_t word_count(int p) { return (static_cast<size_t>(p) + 63) / 64; }

  void check_element(int e) const {
    if (e < 0 || e >= p_)
      throw PreconditionViolated("element " + std::to_string(e) +
                                 " outside ground set of size " + std::to_string(p_));
  }
  void check_same_ground(const ElementSet& o) const {
    if (p_ != o.p_)
      throw PreconditionViolated("set operation across different ground sizes");
  }
  ElementSet aligned_copy(const ElementSet& o) const {
    check_same_ground(o);
    return *this;
  }
  void mask_tail() {
    if (words_.empty()) return;
    int rem = p_ & 63;
    if (rem) words_.back() &= (uint64_t{1} << rem) - 1;
  }

  int p_;
  std::vector<uint64_t> words_;
};

} // namespace sfm
