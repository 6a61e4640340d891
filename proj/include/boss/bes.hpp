#ifndef BOSS_BES_HPP
#define BOSS_BES_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "boss/graph.hpp"
#include "boss/gst.hpp"
#include "boss/score.hpp"

namespace boss {

/// Hooks for checking that search steps never lower the score.
struct SearchObserver {
  std::function<void(double before, double after)> on_move;      // accepted best_move
  std::function<void(double before, double after)> on_bes_step;  // applied BES delete
  std::function<void(double before, double after)> on_sweep;     // forest score around a sweep
};

namespace detail {

/// Memoised local scores for the duration of one BES run.
template <LocalScore S>
class ScoreMemo {
 public:
  explicit ScoreMemo(const S& score) : score_(&score) {}
  double operator()(Var v, const VarSet& parents) {
    auto key = std::make_pair(v, parents);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const double s = score_->local(v, parents);
    memo_.emplace(std::move(key), s);
    return s;
  }

 private:
  const S* score_;
  std::map<std::pair<Var, VarSet>, double> memo_;
};

inline bool is_clique(const Pdag& g, const VarSet& nodes) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (!g.adjacent(nodes[i], nodes[j])) return false;
    }
  }
  return true;
}

struct DeleteOp {
  Var x;
  Var y;
  VarSet h;
  double delta;
};

}  // namespace detail

/// Backward equivalence search: the delete-only phase of GES. Greedily
/// applies the best valid Delete(x, y, H) while it strictly improves the
/// score; the graph is re-completed to a CPDAG after every step.
///
/// Delete(x, y, H) is valid when H is a subset of NA(y, x) (undirected
/// neighbours of y adjacent to x) and NA(y, x) \ H is a clique. Its score
/// change is local(y, (NA \ H) + Pa(y) - x) - local(y, (NA \ H) + Pa(y) + x).
template <LocalScore S>
Pdag bes(Pdag g, const S& score, const SearchObserver* observer = nullptr) {
  if (g.num_vars() != score.num_vars()) throw InvalidArgument("graph and score disagree on variable count");
  const std::size_t p = g.num_vars();
  detail::ScoreMemo<S> memo(score);

  for (;;) {
    std::optional<detail::DeleteOp> best;
    for (Var y = 0; y < p; ++y) {
      const std::set<Var> adj_y = g.adjacents(y);
      for (Var x : adj_y) {
        if (g.has_directed(y, x)) continue;  // y -> x is handled with roles swapped
        VarSet na;
        for (Var h : g.neighbors(y)) {
          if (g.adjacent(h, x)) na.push_back(h);
        }
        VarSet pa_y(g.parents(y).begin(), g.parents(y).end());
        const std::size_t subsets = std::size_t{1} << na.size();
        for (std::size_t mask = 0; mask < subsets; ++mask) {
          VarSet h, rest;
          for (std::size_t i = 0; i < na.size(); ++i) {
            ((mask >> i) & 1U ? h : rest).push_back(na[i]);
          }
          if (!detail::is_clique(g, rest)) continue;
          VarSet cond = rest;
          cond.insert(cond.end(), pa_y.begin(), pa_y.end());
          std::sort(cond.begin(), cond.end());
          cond.erase(std::unique(cond.begin(), cond.end()), cond.end());
          VarSet cond_without = detail::without(cond, x);
          VarSet cond_with = detail::with(cond_without, x);
          const double delta = memo(y, cond_without) - memo(y, cond_with);
          if (delta > 0.0 && (!best || delta > best->delta)) best = detail::DeleteOp{x, y, std::move(h), delta};
        }
      }
    }
    if (!best) break;

    const double before = observer ? score_dag(score, consistent_extension(g)) : 0.0;
    g.remove_adjacency(best->x, best->y);
    for (Var h : best->h) {
      if (g.has_undirected(best->y, h)) {
        g.remove_adjacency(best->y, h);
        g.add_directed(best->y, h);
      }
      if (g.has_undirected(best->x, h)) {
        g.remove_adjacency(best->x, h);
        g.add_directed(best->x, h);
      }
    }
    g = complete_pdag(g);
    if (observer && observer->on_bes_step) observer->on_bes_step(before, score_dag(score, consistent_extension(g)));
  }
  return g;
}

}  // namespace boss

#endif  // BOSS_BES_HPP
