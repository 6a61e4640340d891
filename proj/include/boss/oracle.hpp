#ifndef BOSS_ORACLE_HPP
#define BOSS_ORACLE_HPP

#include <span>
#include <utility>
#include <vector>

#include "boss/graph.hpp"
#include "boss/score.hpp"
#include "boss/simgen.hpp"

namespace boss {

/// Variables d-connected to `source` given `given`, by the reachability
/// ("Bayes ball") traversal. The result excludes `source` and members of
/// `given`; entry i is true iff i is d-connected.
inline std::vector<bool> d_connected_from(const Dag& g, Var source, std::span<const Var> given) {
  const std::size_t p = g.num_vars();
  std::vector<bool> observed(p, false);
  for (Var z : given) observed.at(z) = true;

  // Observed variables and their ancestors.
  std::vector<bool> anc(p, false);
  std::vector<Var> stack(given.begin(), given.end());
  while (!stack.empty()) {
    const Var y = stack.back();
    stack.pop_back();
    if (anc[y]) continue;
    anc[y] = true;
    for (Var w : g.parents(y)) stack.push_back(w);
  }

  // State (node, arrived_from_child): true = travelling up, false = down.
  std::vector<bool> visited_up(p, false), visited_down(p, false);
  std::vector<bool> reachable(p, false);
  std::vector<std::pair<Var, bool>> frontier{{source, true}};
  while (!frontier.empty()) {
    const auto [y, up] = frontier.back();
    frontier.pop_back();
    if (up ? visited_up[y] : visited_down[y]) continue;
    (up ? visited_up : visited_down)[y] = true;
    if (!observed[y]) reachable[y] = true;
    if (up && !observed[y]) {
      for (Var w : g.parents(y)) frontier.emplace_back(w, true);
      for (Var c : g.children(y)) frontier.emplace_back(c, false);
    } else if (!up) {
      if (!observed[y]) {
        for (Var c : g.children(y)) frontier.emplace_back(c, false);
      }
      if (anc[y]) {
        for (Var w : g.parents(y)) frontier.emplace_back(w, true);
      }
    }
  }
  reachable[source] = false;
  return reachable;
}

inline bool d_separated(const Dag& g, Var a, Var b, std::span<const Var> given) {
  return !d_connected_from(g, a, given)[b];
}

/// Graphical stand-in for a large-sample score on a faithful distribution:
///   local(v, W) = -BIG * #{u not in W + v : u d-connected to v given W} - |W|
/// with BIG = p + 1, so a dependence always outweighs any parent count.
class GraphOracleScore {
 public:
  explicit GraphOracleScore(Dag truth) : truth_(std::move(truth)), big_(static_cast<double>(truth_.num_vars() + 1)) {
    if (!is_acyclic(truth_)) throw InvalidArgument("oracle graph has a directed cycle");
  }

  std::size_t num_vars() const { return truth_.num_vars(); }
  const Dag& truth() const { return truth_; }

  double local(Var v, std::span<const Var> parents) const {
    const std::vector<bool> conn = d_connected_from(truth_, v, parents);
    double count = 0.0;
    for (bool c : conn) count += c ? 1.0 : 0.0;
    return -big_ * count - static_cast<double>(parents.size());
  }

 private:
  Dag truth_;
  double big_;
};

static_assert(LocalScore<GraphOracleScore>);

inline GraphOracleScore oracle_score(const Dag& true_dag) { return GraphOracleScore(true_dag); }

/// Large-sample BIC on a faithful Gaussian distribution for `truth`: the
/// exact implied covariance of a linear SEM with weights of magnitude
/// U(0.5, 1.5) and random sign, noise variances U(1, 2), scored at a huge
/// nominal sample size. Generic weights make the model faithful with
/// probability one, so conditional (in)dependence decides every nested
/// comparison.
template <class Rng>
BicScore population_oracle_score(const Dag& truth, Rng& rng, double nominal_n = 1e10) {
  const Permutation topo = topological_order(truth);
  SemModel model;
  model.dag = truth;
  model.sigma.assign(truth.num_vars(), 1.0);
  for (Var v : topo.order()) {
    model.sigma[v] = std::sqrt(uniform(rng, 1.0, 2.0));
    for (Var w : truth.parents(v)) {
      const double magnitude = uniform(rng, 0.5, 1.5);
      model.beta[{w, v}] = uniform01(rng) < 0.5 ? -magnitude : magnitude;
    }
  }
  return BicScore(CovarianceModel(static_cast<std::size_t>(nominal_n), implied_covariance(model)), 2.0);
}

}  // namespace boss

#endif  // BOSS_ORACLE_HPP
