#ifndef BOSS_GRAPH_HPP
#define BOSS_GRAPH_HPP

#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "boss/common.hpp"
#include "boss/permutation.hpp"

namespace boss {

using Edge = std::pair<Var, Var>;

/// Directed graph over variables 0..p-1. Acyclicity is checked by the
/// algorithms that require it (see is_acyclic / topological_order), so the
/// same type can carry a candidate graph before it is validated.
class Dag {
 public:
  Dag() = default;
  explicit Dag(std::size_t num_vars) : parents_(num_vars), children_(num_vars) {}

  Dag(std::size_t num_vars, const std::vector<Edge>& edges) : Dag(num_vars) {
    for (const auto& [u, v] : edges) add_edge(u, v);
  }

  std::size_t num_vars() const { return parents_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  void add_edge(Var from, Var to) {
    check(from);
    check(to);
    if (from == to) throw InvalidArgument("self-loop");
    if (!parents_[to].insert(from).second) throw InvalidArgument("duplicate edge");
    children_[from].insert(to);
    ++num_edges_;
  }

  void remove_edge(Var from, Var to) {
    check(from);
    check(to);
    if (parents_[to].erase(from) == 0) throw InvalidArgument("edge not present");
    children_[from].erase(to);
    --num_edges_;
  }

  bool has_edge(Var from, Var to) const {
    check(from);
    check(to);
    return parents_[to].count(from) != 0;
  }

  bool adjacent(Var a, Var b) const { return has_edge(a, b) || has_edge(b, a); }

  const std::set<Var>& parents(Var v) const {
    check(v);
    return parents_[v];
  }

  const std::set<Var>& children(Var v) const {
    check(v);
    return children_[v];
  }

  VarSet parent_set(Var v) const { return {parents(v).begin(), parents(v).end()}; }

  /// All edges sorted by (from, to).
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges_);
    for (Var u = 0; u < num_vars(); ++u) {
      for (Var c : children_[u]) out.emplace_back(u, c);
    }
    return out;
  }

  friend bool operator==(const Dag& a, const Dag& b) { return a.parents_ == b.parents_; }

 private:
  void check(Var v) const {
    if (v >= parents_.size()) throw InvalidArgument("variable index out of range");
  }

  std::vector<std::set<Var>> parents_;
  std::vector<std::set<Var>> children_;
  std::size_t num_edges_ = 0;
};

/// Partially directed graph; the representation used for CPDAGs.
class Pdag {
 public:
  Pdag() = default;
  explicit Pdag(std::size_t num_vars) : parents_(num_vars), children_(num_vars), neighbors_(num_vars) {}

  std::size_t num_vars() const { return parents_.size(); }

  void add_directed(Var from, Var to) {
    check_new(from, to);
    parents_[to].insert(from);
    children_[from].insert(to);
  }

  void add_undirected(Var a, Var b) {
    check_new(a, b);
    neighbors_[a].insert(b);
    neighbors_[b].insert(a);
  }

  /// Removes whatever edge joins a and b.
  void remove_adjacency(Var a, Var b) {
    check(a);
    check(b);
    children_[a].erase(b);
    parents_[b].erase(a);
    children_[b].erase(a);
    parents_[a].erase(b);
    neighbors_[a].erase(b);
    neighbors_[b].erase(a);
  }

  bool has_directed(Var from, Var to) const {
    check(from);
    check(to);
    return children_[from].count(to) != 0;
  }

  bool has_undirected(Var a, Var b) const {
    check(a);
    check(b);
    return neighbors_[a].count(b) != 0;
  }

  bool adjacent(Var a, Var b) const { return has_directed(a, b) || has_directed(b, a) || has_undirected(a, b); }

  const std::set<Var>& parents(Var v) const { return parents_.at(v); }
  const std::set<Var>& children(Var v) const { return children_.at(v); }
  const std::set<Var>& neighbors(Var v) const { return neighbors_.at(v); }

  std::set<Var> adjacents(Var v) const {
    std::set<Var> out = parents(v);
    out.insert(children(v).begin(), children(v).end());
    out.insert(neighbors(v).begin(), neighbors(v).end());
    return out;
  }

  /// Sorted by (from, to).
  std::vector<Edge> directed_edges() const {
    std::vector<Edge> out;
    for (Var u = 0; u < num_vars(); ++u) {
      for (Var c : children_[u]) out.emplace_back(u, c);
    }
    return out;
  }

  /// Sorted pairs with first < second.
  std::vector<Edge> undirected_edges() const {
    std::vector<Edge> out;
    for (Var u = 0; u < num_vars(); ++u) {
      for (Var w : neighbors_[u]) {
        if (u < w) out.emplace_back(u, w);
      }
    }
    return out;
  }

  std::size_t num_edges() const { return directed_edges().size() + undirected_edges().size(); }

  static Pdag from_dag(const Dag& g) {
    Pdag out(g.num_vars());
    for (const auto& [u, v] : g.edges()) out.add_directed(u, v);
    return out;
  }

  friend bool operator==(const Pdag& a, const Pdag& b) {
    return a.parents_ == b.parents_ && a.neighbors_ == b.neighbors_;
  }

 private:
  void check(Var v) const {
    if (v >= parents_.size()) throw InvalidArgument("variable index out of range");
  }

  void check_new(Var a, Var b) const {
    check(a);
    check(b);
    if (a == b) throw InvalidArgument("self-loop");
    if (adjacent(a, b)) throw InvalidArgument("pair already adjacent");
  }

  std::vector<std::set<Var>> parents_;
  std::vector<std::set<Var>> children_;
  std::vector<std::set<Var>> neighbors_;
};

inline VarSet parents(const Dag& g, Var v) { return g.parent_set(v); }

/// Kahn's algorithm, smallest ready index first. Empty optional on a cycle.
inline std::optional<std::vector<Var>> try_topological_order(const Dag& g) {
  const std::size_t p = g.num_vars();
  std::vector<std::size_t> indegree(p);
  std::priority_queue<Var, std::vector<Var>, std::greater<>> ready;
  for (Var v = 0; v < p; ++v) {
    indegree[v] = g.parents(v).size();
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<Var> order;
  order.reserve(p);
  while (!ready.empty()) {
    const Var v = ready.top();
    ready.pop();
    order.push_back(v);
    for (Var c : g.children(v)) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (order.size() != p) return std::nullopt;
  return order;
}

inline bool is_acyclic(const Dag& g) { return try_topological_order(g).has_value(); }

inline Permutation topological_order(const Dag& g) {
  auto order = try_topological_order(g);
  if (!order) throw InvalidArgument("graph has a directed cycle");
  return Permutation(std::move(*order));
}

inline bool is_topological(const Dag& g, const Permutation& order) {
  if (order.size() != g.num_vars()) return false;
  for (const auto& [u, v] : g.edges()) {
    if (order.index(u) >= order.index(v)) return false;
  }
  return true;
}

/// CPDAG of g's Markov equivalence class by compelled-edge labelling
/// (Chickering 1995). `order` must be a topological order of g; it fixes
/// the edge ordering and so makes the labelling deterministic.
inline Pdag find_compelled(const Dag& g, const Permutation& order) {
  if (!is_topological(g, order)) throw InvalidArgument("order is not topological for the graph");
  const std::size_t p = g.num_vars();

  // Edges sorted by: child ascending in `order`, then parent descending.
  std::vector<Edge> ordered = g.edges();
  std::sort(ordered.begin(), ordered.end(), [&](const Edge& a, const Edge& b) {
    const auto ya = order.index(a.second), yb = order.index(b.second);
    if (ya != yb) return ya < yb;
    return order.index(a.first) > order.index(b.first);
  });

  enum class Label { unknown, compelled, reversible };
  std::vector<std::vector<Label>> label(p, std::vector<Label>(p, Label::unknown));

  for (const auto& [x, y] : ordered) {
    if (label[x][y] != Label::unknown) continue;
    bool done = false;
    for (Var w : g.parents(x)) {
      if (label[w][x] != Label::compelled) continue;
      if (!g.has_edge(w, y)) {
        for (Var z : g.parents(y)) label[z][y] = Label::compelled;
        done = true;
        break;
      }
      label[w][y] = Label::compelled;
    }
    if (done) continue;
    bool external_parent = false;
    for (Var z : g.parents(y)) {
      if (z != x && !g.adjacent(z, x)) {
        external_parent = true;
        break;
      }
    }
    const Label fill = external_parent ? Label::compelled : Label::reversible;
    for (Var z : g.parents(y)) {
      if (label[z][y] == Label::unknown) label[z][y] = fill;
    }
  }

  Pdag out(p);
  for (const auto& [u, v] : g.edges()) {
    if (label[u][v] == Label::compelled) {
      out.add_directed(u, v);
    } else {
      out.add_undirected(u, v);
    }
  }
  return out;
}

inline Pdag find_compelled(const Dag& g) { return find_compelled(g, topological_order(g)); }

inline bool cpdag_equal(const Pdag& x, const Pdag& y) {
  if (x.num_vars() != y.num_vars()) throw InvalidArgument("variable count mismatch");
  return x == y;
}

/// DAG extension of a PDAG (Dor & Tarsi 1992): repeatedly pick the lowest
/// index vertex with no outgoing directed edge whose undirected neighbours
/// are adjacent to all of its other adjacents, orient its undirected edges
/// toward it and remove it. Throws if no extension exists.
inline Dag consistent_extension(const Pdag& g) {
  const std::size_t p = g.num_vars();
  Pdag work = g;
  Dag out(p);
  for (const auto& [u, v] : g.directed_edges()) out.add_edge(u, v);

  std::vector<bool> removed(p, false);
  for (std::size_t step = 0; step < p; ++step) {
    std::optional<Var> pick;
    for (Var x = 0; x < p && !pick; ++x) {
      if (removed[x] || !work.children(x).empty()) continue;
      const std::set<Var> adj = work.adjacents(x);
      bool ok = true;
      for (Var y : work.neighbors(x)) {
        for (Var z : adj) {
          if (z != y && !work.adjacent(y, z)) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      if (ok) pick = x;
    }
    if (!pick) throw InvalidArgument("PDAG admits no consistent DAG extension");
    const Var x = *pick;
    for (Var y : std::vector<Var>(work.neighbors(x).begin(), work.neighbors(x).end())) {
      out.add_edge(y, x);
      work.remove_adjacency(x, y);
    }
    for (Var y : std::vector<Var>(work.parents(x).begin(), work.parents(x).end())) work.remove_adjacency(y, x);
    removed[x] = true;
  }
  if (!is_acyclic(out)) throw InvalidArgument("PDAG admits no consistent DAG extension");
  return out;
}

/// Re-CPDAG a PDAG through one of its extensions.
inline Pdag complete_pdag(const Pdag& g) { return find_compelled(consistent_extension(g)); }

/// Relabels vertex v as map[v].
inline Dag relabel(const Dag& g, std::span<const Var> map) {
  Dag out(g.num_vars());
  for (const auto& [u, v] : g.edges()) out.add_edge(map[u], map[v]);
  return out;
}

inline Pdag relabel(const Pdag& g, std::span<const Var> map) {
  Pdag out(g.num_vars());
  for (const auto& [u, v] : g.directed_edges()) out.add_directed(map[u], map[v]);
  for (const auto& [u, v] : g.undirected_edges()) out.add_undirected(map[u], map[v]);
  return out;
}

}  // namespace boss

#endif  // BOSS_GRAPH_HPP
