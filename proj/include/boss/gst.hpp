#ifndef BOSS_GST_HPP
#define BOSS_GST_HPP

#include <algorithm>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "boss/common.hpp"
#include "boss/score.hpp"

namespace boss {

/// Parent set chosen for a variable together with its local score.
struct LocalChoice {
  VarSet parents;
  double score = 0.0;

  friend bool operator==(const LocalChoice&, const LocalChoice&) = default;
};

/// Membership mask over variables; prefix[w] is true iff w may be a parent.
using PrefixMask = std::vector<bool>;

inline PrefixMask make_prefix_mask(std::size_t p, std::span<const Var> members) {
  PrefixMask mask(p, false);
  for (Var w : members) mask.at(w) = true;
  return mask;
}

namespace detail {

inline VarSet with(const VarSet& set, Var w) {
  VarSet out;
  out.reserve(set.size() + 1);
  auto it = std::lower_bound(set.begin(), set.end(), w);
  out.insert(out.end(), set.begin(), it);
  out.push_back(w);
  out.insert(out.end(), it, set.end());
  return out;
}

inline VarSet without(const VarSet& set, Var w) {
  VarSet out;
  out.reserve(set.size());
  for (Var x : set) {
    if (x != w) out.push_back(x);
  }
  return out;
}

/// Backward phase: drop the member whose removal scores best while that
/// strictly improves. Ties go to the lowest index.
template <LocalScore S>
LocalChoice shrink(const S& score, Var v, VarSet parents, double current) {
  while (!parents.empty()) {
    double best = -std::numeric_limits<double>::infinity();
    std::optional<Var> drop;
    for (Var w : parents) {
      const double s = score.local(v, without(parents, w));
      if (s > best) {
        best = s;
        drop = w;
      }
    }
    if (!(best > current)) break;
    parents = without(parents, *drop);
    current = best;
  }
  return {std::move(parents), current};
}

}  // namespace detail

/// Uncached grow-shrink: greedy forward selection from `prefix` followed by
/// greedy backward elimination. Reference implementation for the tree.
template <LocalScore S>
LocalChoice grow_shrink(const S& score, Var v, const PrefixMask& prefix) {
  if (prefix.at(v)) throw InvalidArgument("prefix contains the target variable");
  VarSet parents;
  double current = score.local(v, parents);
  for (;;) {
    double best = -std::numeric_limits<double>::infinity();
    std::optional<Var> add;
    for (Var z = 0; z < prefix.size(); ++z) {
      if (!prefix[z] || std::binary_search(parents.begin(), parents.end(), z)) continue;
      const double s = score.local(v, detail::with(parents, z));
      if (s > best) {
        best = s;
        add = z;
      }
    }
    if (!add || !(best > current)) break;
    parents = detail::with(parents, *add);
    current = best;
  }
  return detail::shrink(score, v, std::move(parents), current);
}

/// Grow-shrink tree for one target variable. Each node is a grown parent
/// set; its children are the single-variable extensions, scored once and
/// sorted by score (descending, ties by ascending index). Shrink results
/// are cached per node. Not thread safe: query() mutates the tree.
template <LocalScore S>
class GrowShrinkTree {
 public:
  GrowShrinkTree(Var target, const S& score) : target_(target), score_(&score) {
    if (target >= score.num_vars()) throw InvalidArgument("target variable out of range");
    root_ = std::make_unique<Node>();
    root_->grow_score = evaluate({});
    node_count_ = 1;
  }

  Var target() const { return target_; }
  std::size_t score_calls() const { return score_calls_; }
  std::size_t node_count() const { return node_count_; }

  LocalChoice query(const PrefixMask& prefix) {
    if (prefix.size() != score_->num_vars()) throw InvalidArgument("prefix mask has the wrong size");
    if (prefix[target_]) throw InvalidArgument("prefix contains the target variable");
    Node* node = root_.get();
    for (;;) {
      if (!node->expanded) expand(*node);
      Child* next = nullptr;
      for (Child& child : node->children) {
        if (!(child.score > node->grow_score)) break;
        if (prefix[child.var]) {
          next = &child;
          break;
        }
      }
      if (next == nullptr) break;
      if (!next->node) {
        next->node = std::make_unique<Node>();
        next->node->added = next->var;
        next->node->grown = detail::with(node->grown, next->var);
        next->node->grow_score = next->score;
        ++node_count_;
      }
      node = next->node.get();
    }
    if (!node->shrunk) {
      node->shrunk = detail::shrink(counting(), target_, node->grown, node->grow_score);
    }
    return *node->shrunk;
  }

  /// Drops every cached node except the root score.
  void clear() {
    const double root_score = root_->grow_score;
    root_ = std::make_unique<Node>();
    root_->grow_score = root_score;
    node_count_ = 1;
  }

 private:
  struct Node;
  struct Child {
    Var var;
    double score;
    std::unique_ptr<Node> node;
  };
  struct Node {
    std::optional<Var> added;  // empty at the root
    VarSet grown;
    double grow_score = 0.0;
    bool expanded = false;
    std::vector<Child> children;
    std::optional<LocalChoice> shrunk;
  };

  // Adapter so the shared shrink routine counts calls against this tree.
  struct Counter {
    GrowShrinkTree* tree;
    std::size_t num_vars() const { return tree->score_->num_vars(); }
    double local(Var v, std::span<const Var> parents) const {
      ++tree->score_calls_;
      return tree->score_->local(v, parents);
    }
  };
  Counter counting() { return Counter{this}; }

  double evaluate(std::span<const Var> parents) {
    ++score_calls_;
    return score_->local(target_, parents);
  }

  void expand(Node& node) {
    const std::size_t p = score_->num_vars();
    node.children.reserve(p - 1 - node.grown.size());
    for (Var c = 0; c < p; ++c) {
      if (c == target_ || std::binary_search(node.grown.begin(), node.grown.end(), c)) continue;
      node.children.push_back(Child{c, evaluate(detail::with(node.grown, c)), nullptr});
    }
    std::stable_sort(node.children.begin(), node.children.end(),
                     [](const Child& a, const Child& b) { return a.score > b.score; });
    node.expanded = true;
  }

  Var target_;
  const S* score_;
  std::unique_ptr<Node> root_;
  std::size_t score_calls_ = 0;
  std::size_t node_count_ = 0;
};

}  // namespace boss

#endif  // BOSS_GST_HPP
