#ifndef BOSS_PERMUTATION_HPP
#define BOSS_PERMUTATION_HPP

#include <algorithm>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "boss/common.hpp"

namespace boss {

/// An ordering of all p variables with O(1) position lookup.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<Var> order) : order_(std::move(order)), position_(order_.size()) {
    std::vector<bool> seen(order_.size(), false);
    for (std::size_t i = 0; i < order_.size(); ++i) {
      const Var v = order_[i];
      if (v >= order_.size() || seen[v]) {
        throw InvalidArgument("permutation is not a bijection on 0..p-1");
      }
      seen[v] = true;
      position_[v] = i;
    }
  }

  static Permutation identity(std::size_t p) {
    std::vector<Var> order(p);
    std::iota(order.begin(), order.end(), Var{0});
    return Permutation(std::move(order));
  }

  template <class Rng>
  static Permutation random(std::size_t p, Rng& rng) {
    std::vector<Var> order(p);
    std::iota(order.begin(), order.end(), Var{0});
    // Fisher-Yates with an explicit draw so the result is identical across standard libraries.
    for (std::size_t i = p; i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(order[i - 1], order[j]);
    }
    return Permutation(std::move(order));
  }

  std::size_t size() const { return order_.size(); }
  const std::vector<Var>& order() const { return order_; }
  Var operator[](std::size_t i) const { return order_[i]; }

  std::size_t index(Var v) const {
    if (v >= position_.size()) throw InvalidArgument("variable not in permutation");
    return position_[v];
  }

  /// Variables strictly before v.
  std::span<const Var> prefix(Var v) const { return {order_.data(), index(v)}; }

  /// Remove v and reinsert it so that it ends up at position i.
  void move(Var v, std::size_t i) {
    if (i >= order_.size()) throw InvalidArgument("move position out of range");
    const std::size_t j = index(v);
    if (i == j) return;
    if (i < j) {
      std::rotate(order_.begin() + static_cast<std::ptrdiff_t>(i), order_.begin() + static_cast<std::ptrdiff_t>(j),
                  order_.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    } else {
      std::rotate(order_.begin() + static_cast<std::ptrdiff_t>(j), order_.begin() + static_cast<std::ptrdiff_t>(j) + 1,
                  order_.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    }
    const std::size_t lo = std::min(i, j);
    const std::size_t hi = std::max(i, j);
    for (std::size_t k = lo; k <= hi; ++k) position_[order_[k]] = k;
  }

  Permutation moved(Var v, std::size_t i) const {
    Permutation out = *this;
    out.move(v, i);
    return out;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.order_ == b.order_; }

 private:
  std::vector<Var> order_;
  std::vector<std::size_t> position_;
};

}  // namespace boss

#endif  // BOSS_PERMUTATION_HPP
