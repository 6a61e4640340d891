#ifndef BOSS_METRICS_HPP
#define BOSS_METRICS_HPP

#include <cstddef>
#include <optional>

#include "boss/graph.hpp"
#include "boss/score.hpp"

namespace boss {

struct Counts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  friend bool operator==(const Counts&, const Counts&) = default;
};

struct ConfusionCounts {
  Counts adjacency;
  Counts orientation;
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

namespace detail {

enum class PairState { absent, undirected, forward, backward };  // forward: a -> b for a < b

inline PairState pair_state(const Pdag& g, Var a, Var b) {
  if (g.has_directed(a, b)) return PairState::forward;
  if (g.has_directed(b, a)) return PairState::backward;
  if (g.has_undirected(a, b)) return PairState::undirected;
  return PairState::absent;
}

inline bool is_directed(PairState s) { return s == PairState::forward || s == PairState::backward; }

}  // namespace detail

/// Adjacency and orientation confusion counts, one decision per unordered
/// pair. Orientation follows the metrics table:
///   true x->y: same direction tp+tn; reversed fp+fn; undirected fn; absent fn
///   true absent: directed either way fp; undirected or absent nothing
/// A truth-side undirected edge carries no orientation, so it is scored
/// like an absent one: an estimated arrow there is an fp.
inline ConfusionCounts confusion(const Pdag& truth, const Pdag& estimate) {
  if (truth.num_vars() != estimate.num_vars()) throw InvalidArgument("graphs have different variable counts");
  using detail::PairState;
  ConfusionCounts c;
  const std::size_t p = truth.num_vars();
  for (Var a = 0; a < p; ++a) {
    for (Var b = a + 1; b < p; ++b) {
      const PairState t = detail::pair_state(truth, a, b);
      const PairState e = detail::pair_state(estimate, a, b);
      const bool t_adj = t != PairState::absent;
      const bool e_adj = e != PairState::absent;
      if (t_adj && e_adj) {
        ++c.adjacency.tp;
      } else if (e_adj) {
        ++c.adjacency.fp;
      } else if (t_adj) {
        ++c.adjacency.fn;
      } else {
        ++c.adjacency.tn;
      }

      if (detail::is_directed(t)) {
        if (e == t) {
          ++c.orientation.tp;
          ++c.orientation.tn;
        } else if (detail::is_directed(e)) {
          ++c.orientation.fp;
          ++c.orientation.fn;
        } else {
          ++c.orientation.fn;
        }
      } else if (detail::is_directed(e)) {
        ++c.orientation.fp;
      }
    }
  }
  return c;
}

struct PrecisionRecall {
  std::optional<double> precision;  // empty when tp + fp == 0
  std::optional<double> recall;     // empty when tp + fn == 0
};

inline PrecisionRecall precision_recall(const Counts& c) {
  PrecisionRecall out;
  if (c.tp + c.fp > 0) out.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) out.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  return out;
}

/// score(true DAG) - score(extension of the estimate). Negative means the
/// estimate scores higher than the truth.
template <LocalScore S>
double delta_bic(const S& score, const Dag& true_dag, const Pdag& estimate) {
  return score_dag(score, true_dag) - score_dag(score, consistent_extension(estimate));
}

struct EvalReport {
  std::optional<double> adj_precision, adj_recall, ori_precision, ori_recall;
  std::optional<double> delta_bic;
  std::size_t edge_count = 0;
  std::optional<double> elapsed_seconds;
};

/// Metrics of `estimate` against the CPDAG of `true_dag`.
inline EvalReport evaluate(const Dag& true_dag, const Pdag& estimate) {
  const ConfusionCounts c = confusion(find_compelled(true_dag), estimate);
  const auto adj = precision_recall(c.adjacency);
  const auto ori = precision_recall(c.orientation);
  EvalReport r;
  r.adj_precision = adj.precision;
  r.adj_recall = adj.recall;
  r.ori_precision = ori.precision;
  r.ori_recall = ori.recall;
  r.edge_count = estimate.num_edges();
  return r;
}

template <LocalScore S>
EvalReport evaluate(const Dag& true_dag, const Pdag& estimate, const S& score) {
  EvalReport r = evaluate(true_dag, estimate);
  r.delta_bic = delta_bic(score, true_dag, estimate);
  return r;
}

}  // namespace boss

#endif  // BOSS_METRICS_HPP
