#ifndef BOSS_SIMGEN_HPP
#define BOSS_SIMGEN_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "boss/common.hpp"
#include "boss/graph.hpp"
#include "boss/permutation.hpp"

namespace boss {

enum class NoiseFamily { gaussian, gumbel, exponential };
enum class GraphKind { er, sf };

inline std::string to_string(NoiseFamily f) {
  switch (f) {
    case NoiseFamily::gaussian: return "gaussian";
    case NoiseFamily::gumbel: return "gumbel";
    case NoiseFamily::exponential: return "exponential";
  }
  return "?";
}

inline std::string to_string(GraphKind k) { return k == GraphKind::er ? "er" : "sf"; }

inline NoiseFamily parse_noise_family(const std::string& s) {
  if (s == "gaussian") return NoiseFamily::gaussian;
  if (s == "gumbel") return NoiseFamily::gumbel;
  if (s == "exponential") return NoiseFamily::exponential;
  throw InvalidArgument("unknown noise family: " + s);
}

inline GraphKind parse_graph_kind(const std::string& s) {
  if (s == "er") return GraphKind::er;
  if (s == "sf") return GraphKind::sf;
  throw InvalidArgument("unknown graph kind: " + s);
}

struct SimConfig {
  std::size_t num_vars = 10;
  double avg_degree = 2.0;
  NoiseFamily noise = NoiseFamily::gaussian;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  GraphKind graph = GraphKind::er;
  bool standardize = true;
  bool shuffle_columns = true;
};

struct SemModel {
  Dag dag;
  std::map<Edge, double> beta;
  std::vector<double> sigma;
};

/// Uniform draw on the open interval (0, 1) from 53 random bits.
template <class Rng>
double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

template <class Rng>
double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// One noise draw with standard deviation sigma. Gumbel and exponential
/// draws are centred to mean zero before scaling.
template <class Rng>
double noise_draw(NoiseFamily family, double sigma, Rng& rng) {
  if (!(sigma > 0.0)) throw InvalidArgument("noise scale must be positive");
  switch (family) {
    case NoiseFamily::gaussian: {
      const double u1 = uniform01(rng);
      const double u2 = uniform01(rng);
      return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    case NoiseFamily::gumbel: {
      const double g = -std::log(-std::log(uniform01(rng)));
      return sigma * (g - std::numbers::egamma) * std::sqrt(6.0) / std::numbers::pi;
    }
    case NoiseFamily::exponential:
      return sigma * (-std::log(uniform01(rng)) - 1.0);
  }
  throw InvalidArgument("unknown noise family");
}

/// round(alpha * p / 2), validated against the complete-DAG edge count.
inline std::size_t target_edge_count(std::size_t p, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("average degree must be non-negative");
  const double m = std::round(alpha * static_cast<double>(p) / 2.0);
  const double max_edges = static_cast<double>(p) * static_cast<double>(p == 0 ? 0 : p - 1) / 2.0;
  if (m > max_edges) throw InvalidArgument("average degree is infeasible for this many variables");
  return static_cast<std::size_t>(m);
}

/// Erdos-Renyi DAG: m distinct edges, each uniform among pairs ordered by pi.
template <class Rng>
Dag er_dag(std::size_t p, const Permutation& pi, double alpha, Rng& rng) {
  if (pi.size() != p) throw InvalidArgument("permutation size mismatch");
  const std::size_t m = target_edge_count(p, alpha);
  Dag g(p);
  while (g.num_edges() < m) {
    const std::size_t i = static_cast<std::size_t>(rng() % p);
    const std::size_t j = static_cast<std::size_t>(rng() % p);
    if (i == j) continue;
    const Var from = pi[std::min(i, j)];
    const Var to = pi[std::max(i, j)];
    if (!g.has_edge(from, to)) g.add_edge(from, to);
  }
  return g;
}

/// Scale-free DAG: keeps the in-degrees of a hidden ER draw but redraws each
/// vertex's parents from its prefix with weight 1 + current out-degree.
template <class Rng>
Dag sf_dag(std::size_t p, const Permutation& pi, double alpha, Rng& rng) {
  const Dag hidden = er_dag(p, pi, alpha, rng);
  Dag g(p);
  for (std::size_t k = 0; k < p; ++k) {
    const Var v = pi[k];
    const std::size_t want = hidden.parents(v).size();
    while (g.parents(v).size() < want) {
      double total = 0.0;
      for (std::size_t i = 0; i < k; ++i) total += 1.0 + static_cast<double>(g.children(pi[i]).size());
      double u = uniform01(rng) * total;
      Var pick = pi[k - 1];
      for (std::size_t i = 0; i < k; ++i) {
        u -= 1.0 + static_cast<double>(g.children(pi[i]).size());
        if (u < 0.0) {
          pick = pi[i];
          break;
        }
      }
      if (!g.has_edge(pick, v)) g.add_edge(pick, v);
    }
  }
  return g;
}

/// Centre to mean 0 and scale to standard deviation 1 (1/n moments).
inline void standardize(Eigen::Ref<Eigen::VectorXd> column) {
  const double n = static_cast<double>(column.size());
  const double mean = column.sum() / n;
  column.array() -= mean;
  const double sd = std::sqrt(column.squaredNorm() / n);
  if (!(sd > 0.0)) throw DataError("cannot standardize a constant column");
  column /= sd;
}

struct SemSample {
  Eigen::MatrixXd data;          // n x p, columns in shuffled order
  SemModel model;                // in original variable order
  std::vector<Var> shuffle;      // shuffle[original] = column in data
};

/// Linear SEM data: in topological order X_v = e_v + sum_w beta_wv X_w with
/// sigma_v ~ U(1, 2), beta ~ U(-1, 1), each column standardized right after
/// it is generated; finally the columns are shuffled.
template <class Rng>
SemSample sample_sem(const SimConfig& cfg, const Dag& dag, Rng& rng) {
  const std::size_t p = dag.num_vars();
  const auto n = static_cast<Eigen::Index>(cfg.n);
  if (cfg.n < 2) throw InvalidArgument("need at least 2 samples");
  const Permutation topo = topological_order(dag);

  SemSample out;
  out.model.dag = dag;
  out.model.sigma.assign(p, 0.0);
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(p));
  for (Var v : topo.order()) {
    const double sigma = uniform(rng, 1.0, 2.0);
    out.model.sigma[v] = sigma;
    std::vector<std::pair<Var, double>> weights;
    for (Var w : dag.parents(v)) {
      const double b = uniform(rng, -1.0, 1.0);
      out.model.beta[{w, v}] = b;
      weights.emplace_back(w, b);
    }
    const auto col = static_cast<Eigen::Index>(v);
    for (Eigen::Index i = 0; i < n; ++i) {
      double value = noise_draw(cfg.noise, sigma, rng);
      for (const auto& [w, b] : weights) value += b * x(i, static_cast<Eigen::Index>(w));
      x(i, col) = value;
    }
    if (cfg.standardize) standardize(x.col(col));
  }

  const Permutation shuffle = cfg.shuffle_columns ? Permutation::random(p, rng) : Permutation::identity(p);
  out.shuffle = shuffle.order();
  out.data.resize(n, static_cast<Eigen::Index>(p));
  for (Var v = 0; v < p; ++v) {
    out.data.col(static_cast<Eigen::Index>(out.shuffle[v])) = x.col(static_cast<Eigen::Index>(v));
  }
  return out;
}

/// Population covariance of the (unstandardized) linear SEM:
/// (I - B)^-T D (I - B)^-1 with B(w, v) = beta_wv and D = diag(sigma^2).
inline Eigen::MatrixXd implied_covariance(const SemModel& model) {
  const auto p = static_cast<Eigen::Index>(model.dag.num_vars());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
  for (const auto& [edge, weight] : model.beta) {
    b(static_cast<Eigen::Index>(edge.first), static_cast<Eigen::Index>(edge.second)) = weight;
  }
  Eigen::VectorXd noise_var(p);
  for (Eigen::Index i = 0; i < p; ++i) noise_var(i) = model.sigma[static_cast<std::size_t>(i)] * model.sigma[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(p, p) - b).inverse();
  Eigen::MatrixXd cov = inv.transpose() * noise_var.asDiagonal() * inv;
  return (cov + cov.transpose()) * 0.5;
}

struct Simulation {
  Dag truth;
  SemSample sample;
};

/// Graph and data for one configuration, all randomness from cfg.seed.
inline Simulation simulate(const SimConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const Permutation causal_order = Permutation::random(cfg.num_vars, rng);
  Dag truth = cfg.graph == GraphKind::er ? er_dag(cfg.num_vars, causal_order, cfg.avg_degree, rng)
                                         : sf_dag(cfg.num_vars, causal_order, cfg.avg_degree, rng);
  SemSample sample = sample_sem(cfg, truth, rng);
  return {std::move(truth), std::move(sample)};
}

}  // namespace boss

#endif  // BOSS_SIMGEN_HPP
