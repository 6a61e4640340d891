#ifndef BOSS_SEARCH_HPP
#define BOSS_SEARCH_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "boss/bes.hpp"
#include "boss/graph.hpp"
#include "boss/gst.hpp"
#include "boss/permutation.hpp"
#include "boss/score.hpp"

namespace boss {

struct SearchConfig {
  double penalty_discount = 2.0;
  bool use_bes = false;
  std::size_t num_starts = 1;
  std::uint64_t seed = 0;
  bool randomize_initial_order = true;
  std::size_t max_sweeps = 100;
  /// Clear all trees once their combined node count exceeds this; 0 = never.
  std::size_t max_tree_nodes = 0;
  /// Worker threads for multi-start runs. Each start then has its own forest
  /// and observer callbacks may arrive concurrently.
  std::size_t threads = 1;
};

/// One grow-shrink tree per variable over a shared score.
template <LocalScore S>
class GstForest {
 public:
  explicit GstForest(const S& score, std::size_t max_tree_nodes = 0) : score_(&score), max_nodes_(max_tree_nodes) {
    const std::size_t p = score.num_vars();
    trees_.reserve(p);
    for (Var v = 0; v < p; ++v) trees_.emplace_back(v, score);
    total_nodes_ = p;
  }

  std::size_t num_vars() const { return trees_.size(); }
  const S& score_function() const { return *score_; }

  LocalChoice query(Var v, const PrefixMask& prefix) {
    auto& tree = trees_.at(v);
    const std::size_t before = tree.node_count();
    LocalChoice out = tree.query(prefix);
    total_nodes_ += tree.node_count() - before;
    if (max_nodes_ != 0 && total_nodes_ > max_nodes_) {
      for (auto& t : trees_) t.clear();
      total_nodes_ = trees_.size();
    }
    return out;
  }

  /// Grow-shrink parent choice for every variable under pi, indexed by variable.
  std::vector<LocalChoice> choices(const Permutation& pi) {
    check(pi);
    std::vector<LocalChoice> out(num_vars());
    PrefixMask mask(num_vars(), false);
    for (Var v : pi.order()) {
      out[v] = query(v, mask);
      mask[v] = true;
    }
    return out;
  }

  double score(const Permutation& pi) {
    double total = 0.0;
    for (const auto& c : choices(pi)) total += c.score;
    return total;
  }

  Dag project(const Permutation& pi) {
    const auto picked = choices(pi);
    Dag g(num_vars());
    for (Var v = 0; v < num_vars(); ++v) {
      for (Var w : picked[v].parents) g.add_edge(w, v);
    }
    return g;
  }

  std::size_t score_calls() const {
    std::size_t calls = 0;
    for (const auto& t : trees_) calls += t.score_calls();
    return calls;
  }

 private:
  void check(const Permutation& pi) const {
    if (pi.size() != num_vars()) throw InvalidArgument("permutation size does not match the score");
  }

  const S* score_;
  std::vector<GrowShrinkTree<S>> trees_;
  std::size_t max_nodes_;
  std::size_t total_nodes_ = 0;
};

template <LocalScore S>
double forest_score(GstForest<S>& forest, const Permutation& pi) {
  return forest.score(pi);
}

template <LocalScore S>
Dag project(GstForest<S>& forest, const Permutation& pi) {
  return forest.project(pi);
}

/// Tries v at every insertion position in order and keeps a position only
/// if it strictly beats the best score seen so far.
///
/// Only v's own prefix and whether v precedes each other variable change
/// across positions, so every candidate is scored from 2(p-1) + p tree
/// queries. Each candidate total is summed by variable index, exactly as
/// GstForest::score does, so totals compare bit-for-bit.
template <LocalScore S>
Permutation best_move(GstForest<S>& forest, const Permutation& pi, Var v, const SearchObserver* observer = nullptr) {
  const std::size_t p = pi.size();
  if (p != forest.num_vars()) throw InvalidArgument("permutation size does not match the score");
  const std::size_t start = pi.index(v);
  if (p == 1) return pi;

  std::vector<Var> rest;
  rest.reserve(p - 1);
  for (Var w : pi.order()) {
    if (w != v) rest.push_back(w);
  }

  // rank[w] = position of w within rest.
  std::vector<std::size_t> rank(p, 0);
  std::vector<double> without_v(p, 0.0), with_v(p, 0.0);
  PrefixMask mask(p, false);
  for (std::size_t k = 0; k < rest.size(); ++k) {
    const Var w = rest[k];
    rank[w] = k;
    without_v[w] = forest.query(w, mask).score;
    mask[v] = true;
    with_v[w] = forest.query(w, mask).score;
    mask[v] = false;
    mask[w] = true;
  }

  std::vector<double> own(p, 0.0);
  std::fill(mask.begin(), mask.end(), false);
  for (std::size_t i = 0; i < p; ++i) {
    own[i] = forest.query(v, mask).score;
    if (i < rest.size()) mask[rest[i]] = true;
  }

  // v inserted at position i: rest[0..i) precede it, rest[i..) follow.
  auto total_at = [&](std::size_t i) {
    double total = 0.0;
    for (Var u = 0; u < p; ++u) {
      if (u == v) {
        total += own[i];
      } else {
        total += rank[u] < i ? without_v[u] : with_v[u];
      }
    }
    return total;
  };

  double best = total_at(start);
  std::size_t position = start;
  for (std::size_t i = 0; i < p; ++i) {
    const double candidate = total_at(i);
    if (best < candidate) {
      best = candidate;
      position = i;
    }
  }
  if (position == start) return pi;
  Permutation moved = pi.moved(v, position);
  // Rescored through the forest so the check does not reuse the totals above.
  if (observer && observer->on_move) observer->on_move(forest.score(pi), forest.score(moved));
  return moved;
}

struct SearchResult {
  Pdag cpdag;
  Dag dag;  // projection of the final permutation (before BES)
  Permutation order;
  double score = 0.0;  // forest score, or the BES result's DAG score when BES ran
  std::size_t sweeps = 0;
};

inline Permutation initial_permutation(std::size_t p, const SearchConfig& cfg) {
  if (!cfg.randomize_initial_order) return Permutation::identity(p);
  std::mt19937_64 rng(cfg.seed);
  return Permutation::random(p, rng);
}

namespace detail {

template <LocalScore S>
SearchResult boss_single(GstForest<S>& forest, Permutation pi, const SearchConfig& cfg,
                         const SearchObserver* observer) {
  SearchResult out;
  double best = 0.0;
  double current = forest.score(pi);
  do {
    if (++out.sweeps > cfg.max_sweeps) throw Error("BOSS did not converge within the sweep cap");
    best = current;
    const std::vector<Var> snapshot = pi.order();
    for (Var v : snapshot) pi = best_move(forest, pi, v, observer);
    current = forest.score(pi);
    if (observer && observer->on_sweep) observer->on_sweep(best, current);
    if (current < best) throw Error("BOSS sweep lowered the score");
  } while (best < current);

  out.dag = forest.project(pi);
  out.cpdag = find_compelled(out.dag, pi);
  out.score = current;
  if (cfg.use_bes) {
    out.cpdag = bes(out.cpdag, forest.score_function(), observer);
    out.score = score_dag(forest.score_function(), consistent_extension(out.cpdag));
  }
  out.order = std::move(pi);
  return out;
}

}  // namespace detail

/// Start permutations: `first`, then num_starts - 1 random ones from cfg.seed.
inline std::vector<Permutation> start_permutations(const Permutation& first, const SearchConfig& cfg) {
  if (cfg.num_starts < 1) throw InvalidArgument("num_starts must be at least 1");
  std::vector<Permutation> starts{first};
  std::mt19937_64 rng(derive_seed(cfg.seed, 0x5354415254ULL));
  for (std::size_t s = 1; s < cfg.num_starts; ++s) starts.push_back(Permutation::random(first.size(), rng));
  return starts;
}

/// Best order score search from `pi`. With num_starts > 1 further starts
/// use random permutations drawn from cfg.seed; the best-scoring result
/// wins, earlier starts winning ties.
template <LocalScore S>
SearchResult search(GstForest<S>& forest, const Permutation& pi, const SearchConfig& cfg,
                    const SearchObserver* observer = nullptr) {
  if (pi.size() != forest.num_vars()) throw InvalidArgument("permutation size does not match the score");
  const auto starts = start_permutations(pi, cfg);
  SearchResult best = detail::boss_single(forest, starts[0], cfg, observer);
  for (std::size_t s = 1; s < starts.size(); ++s) {
    SearchResult next = detail::boss_single(forest, starts[s], cfg, observer);
    if (best.score < next.score) best = std::move(next);
  }
  return best;
}

template <LocalScore S>
SearchResult search(const S& score, const SearchConfig& cfg, const SearchObserver* observer = nullptr) {
  const Permutation first = initial_permutation(score.num_vars(), cfg);
  const std::size_t workers = std::min(cfg.threads, cfg.num_starts);
  if (workers <= 1) {
    GstForest<S> forest(score, cfg.max_tree_nodes);
    return search(forest, first, cfg, observer);
  }

  const auto starts = start_permutations(first, cfg);
  std::vector<std::optional<SearchResult>> results(starts.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    GstForest<S> forest(score, cfg.max_tree_nodes);
    for (std::size_t s = next++; s < starts.size(); s = next++) {
      try {
        results[s] = detail::boss_single(forest, starts[s], cfg, observer);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::size_t winner = 0;
  for (std::size_t s = 1; s < results.size(); ++s) {
    if (results[winner]->score < results[s]->score) winner = s;
  }
  return std::move(*results[winner]);
}

}  // namespace boss

#endif  // BOSS_SEARCH_HPP
