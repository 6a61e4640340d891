// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "boss/boss.hpp"
#include "cli.hpp"
#include "test_support.hpp"

namespace {

using namespace boss;
using Clock = std::chrono::steady_clock;

// Counts score decreases reported by searches. Shared by criteria 1, 4 and 6.
struct Monotonicity {
  std::atomic<std::size_t> moves{0}, sweeps{0}, bes_steps{0};
  std::atomic<std::size_t> move_violations{0}, sweep_violations{0}, bes_violations{0};
  SearchObserver observer;

  Monotonicity() {
    observer.on_move = [this](double before, double after) {
      ++moves;
      if (after < before) ++move_violations;
    };
    observer.on_sweep = [this](double before, double after) {
      ++sweeps;
      if (after < before) ++sweep_violations;
    };
    // BES totals come from rescoring whole extensions, so equal-score steps
    // can differ in the last bits.
    observer.on_bes_step = [this](double before, double after) {
      ++bes_steps;
      if (after < before - 1e-9 * std::max(1.0, std::abs(before))) ++bes_violations;
    };
  }
};

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail, double seconds) {
  std::printf("[%s] %d %s: %s (%.1f s)\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

void info(const std::string& text) {
  std::printf("[INFO] %s\n", text.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// Runs `body`, turning an escaped exception into a FAIL line.
void criterion(int id, const std::string& name, const std::function<void(Clock::time_point)>& body) {
  const auto t0 = Clock::now();
  try {
    body(t0);
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what(), since(t0));
  }
}

void oracle_recovery(Monotonicity& mono) {
  criterion(1, "oracle MEC recovery", [&](Clock::time_point t0) {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<std::size_t> size(2, 6);
    std::uniform_real_distribution<double> prob(0.3, 0.6);
    std::size_t ok = 0, total = 0, formula_ok = 0;
    for (int i = 0; i < 200; ++i) {
      const std::size_t p = size(rng);
      const Dag truth = testkit::random_dag(p, prob(rng), rng);
      const Pdag expected = testkit::brute_force_cpdag(truth);
      const BicScore score = population_oracle_score(truth, rng);
      const GraphOracleScore formula = oracle_score(truth);
      for (std::uint64_t start = 0; start < 10; ++start) {
        SearchConfig cfg;
        cfg.use_bes = true;
        cfg.seed = derive_seed(static_cast<std::uint64_t>(i), start);
        ++total;
        if (search(score, cfg, &mono.observer).cpdag == expected) ++ok;
        if (search(formula, cfg).cpdag == expected) ++formula_ok;
      }
    }
    info(fmt("criterion 1 with the d-connection count score: %zu/%zu recovered (not gating, see notes)", formula_ok,
             total));
    report(1, "oracle MEC recovery", ok == total, fmt("%zu/%zu searches recovered the brute-force CPDAG", ok, total),
           since(t0));
  });
}

void gst_equivalence() {
  criterion(2, "GST equivalence", [](Clock::time_point t0) {
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<std::size_t> size(4, 12);
    std::size_t mismatches = 0, fewer = 0, queries = 0;
    const std::size_t instances = 50;
    for (std::size_t i = 0; i < instances; ++i) {
      const std::size_t p = size(rng);
      SimConfig cfg;
      cfg.num_vars = p;
      cfg.n = 200;
      cfg.shuffle_columns = false;
      const Dag truth = testkit::random_dag(p, 0.3, rng);
      const BicScore score(covariance_from_data(sample_sem(cfg, truth, rng).data), 2.0);
      const CountingScore counted(score);
      std::size_t cached_calls = 0;
      for (Var v = 0; v < p; ++v) {
        GrowShrinkTree tree(v, score);
        for (int q = 0; q < 1000; ++q) {
          const Permutation pi = Permutation::random(p, rng);
          const std::vector<Var> before(pi.order().begin(), pi.order().begin() + static_cast<long>(pi.index(v)));
          const PrefixMask mask = make_prefix_mask(p, before);
          ++queries;
          if (!(tree.query(mask) == grow_shrink(counted, v, mask))) ++mismatches;
        }
        cached_calls += tree.score_calls();
      }
      if (cached_calls < counted.calls()) ++fewer;
    }
    const bool pass = mismatches == 0 && fewer * 10 >= instances * 9;
    report(2, "GST equivalence", pass,
           fmt("%zu/%zu queries differ; cached calls lower on %zu/%zu instances", mismatches, queries, fewer,
               instances),
           since(t0));
  });
}

void find_compelled_oracle() {
  criterion(3, "find_compelled vs brute force", [](Clock::time_point t0) {
    std::size_t ok = 0, total = 0;
    for (std::size_t p = 1; p <= 4; ++p) {
      const testkit::MecOracle mec(p);
      mec.for_each_dag([&](const Dag& g) {
        ++total;
        if (find_compelled(g) == mec.cpdag(g)) ++ok;
      });
    }
    const testkit::MecOracle mec5(5);
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> prob(0.1, 0.9);
    for (int i = 0; i < 500; ++i) {
      const Dag g = testkit::random_dag(5, prob(rng), rng);
      ++total;
      if (find_compelled(g) == mec5.cpdag(g)) ++ok;
    }
    report(3, "find_compelled vs brute force", ok == total, fmt("%zu/%zu CPDAGs equal", ok, total), since(t0));
  });
}

struct Reference {
  double degree, adj_rec, ori_rec;
};

void desk_replication(Monotonicity& mono) {
  criterion(4, "desk-scale ER replication", [&](Clock::time_point t0) {
    cli::BenchOptions o;
    o.reps = 10;
    o.ps = {100};
    o.degrees = {2.0, 10.0};
    o.n = 1000;
    o.penalty_discount = 2.0;
    o.seed = 404;
    o.threads = std::max(1u, std::thread::hardware_concurrency());
    const cli::BenchResult b = cli::cmd_bench(o, &mono.observer);
    const std::vector<Reference> reference{{2.0, 0.82, 0.68}, {10.0, 0.81, 0.78}};
    bool pass = true;
    std::string detail;
    for (const auto& row : b.rows) {
      const auto target = std::find_if(reference.begin(), reference.end(), [&](const Reference& r) { return r.degree == row.cell.avg_degree; });
      const bool ok = row.adj_pre.count == o.reps && row.adj_pre.mean >= 0.93 &&
                      std::abs(row.adj_rec.mean - target->adj_rec) <= 0.06 &&
                      std::abs(row.ori_rec.mean - target->ori_rec) <= 0.07 && row.delta_bic.count == o.reps &&
                      row.delta_bic.mean < 0.0;
      pass = pass && ok;
      detail += fmt("deg %g: adj_pre %.3f adj_rec %.3f (reference %.2f) ori_pre %.3f ori_rec %.3f (reference %.2f) "
                    "delta_bic %.2f edges %.1f secs %.2f; ",
                    row.cell.avg_degree, row.adj_pre.mean, row.adj_rec.mean, target->adj_rec, row.ori_pre.mean,
                    row.ori_rec.mean, target->ori_rec, row.delta_bic.mean, row.edges.mean, row.seconds.mean);
    }
    report(4, "desk-scale ER replication", pass, detail, since(t0));
  });
}

std::size_t percentile95(std::vector<std::size_t> xs) {
  std::sort(xs.begin(), xs.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(xs.size())));
  return xs[rank - 1];
}

void scale_free_degrees() {
  criterion(5, "scale-free out-degree", [](Clock::time_point t0) {
    const std::size_t p = 100, reps = 100;
    const double alpha = 10.0;
    std::vector<std::size_t> sf_out, er_out;
    double low = 0.0, low3 = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      std::mt19937_64 rng(derive_seed(505, r));
      const Dag sf = sf_dag(p, Permutation::random(p, rng), alpha, rng);
      const Dag er = er_dag(p, Permutation::random(p, rng), alpha, rng);
      std::size_t at_most_2 = 0, at_most_3 = 0;
      for (Var v = 0; v < p; ++v) {
        const std::size_t k = sf.children(v).size();
        sf_out.push_back(k);
        er_out.push_back(er.children(v).size());
        at_most_2 += k <= 2;
        at_most_3 += k <= 3;
      }
      low += static_cast<double>(at_most_2) / static_cast<double>(p);
      low3 += static_cast<double>(at_most_3) / static_cast<double>(p);
    }
    low /= static_cast<double>(reps);
    low3 /= static_cast<double>(reps);
    const std::size_t sf95 = percentile95(sf_out), er95 = percentile95(er_out);
    info(fmt("criterion 5 density with out-degree <= 3: %.4f (not gating)", low3));
    report(5, "scale-free out-degree", low >= 0.58 && low <= 0.74 && sf95 > er95,
           fmt("density out-degree <= 2 %.4f in [0.58, 0.74]; p95 SF %zu vs ER %zu", low, sf95, er95), since(t0));
  });
}

void monotonicity(const Monotonicity& mono) {
  const std::size_t violations = mono.move_violations + mono.sweep_violations + mono.bes_violations;
  report(6, "monotonicity", violations == 0 && mono.moves > 0 && mono.bes_steps > 0,
         fmt("%zu violations over %zu moves, %zu sweeps, %zu BES steps", violations, mono.moves.load(),
             mono.sweeps.load(), mono.bes_steps.load()),
         0.0);
}

void score_cross_validation() {
  criterion(7, "score cross-validation", [](Clock::time_point t0) {
    std::mt19937_64 rng(707);
    std::uniform_int_distribution<std::size_t> size(2, 10), rows(30, 500);
    double worst = 0.0;
    std::size_t bad = 0;
    const int queries = 1000;
    for (int q = 0; q < queries; ++q) {
      SimConfig cfg;
      cfg.num_vars = size(rng);
      cfg.n = rows(rng);
      cfg.avg_degree = std::min(3.0, static_cast<double>(cfg.num_vars - 1));
      cfg.seed = rng();
      const Eigen::MatrixXd data = simulate(cfg).sample.data;
      const BicScore score(covariance_from_data(data), 2.0);
      const Var v = rng() % cfg.num_vars;
      std::vector<Var> parents;
      for (Var w = 0; w < cfg.num_vars; ++w) {
        if (w != v && rng() % 2 == 0) parents.push_back(w);
      }
      const double expected = testkit::ols_local_bic(data, v, parents, 2.0);
      const double rel = std::abs(score.local(v, parents) - expected) / std::max(1.0, std::abs(expected));
      worst = std::max(worst, rel);
      if (!(rel <= 1e-8)) ++bad;
    }
    report(7, "score cross-validation", bad == 0, fmt("%zu/%d queries off; worst relative error %.3g", bad, queries, worst),
           since(t0));
  });
}

void simulation_invariants() {
  criterion(8, "simulation invariants", [](Clock::time_point t0) {
    std::size_t problems = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      std::mt19937_64 rng(seed), replay(seed);
      const std::size_t p = 20 + seed;
      const double alpha = static_cast<double>(seed % 9);
      const Permutation pi = Permutation::random(p, rng);
      Permutation::random(p, replay);
      if (er_dag(p, pi, alpha, rng).num_edges() != target_edge_count(p, alpha)) ++problems;

      std::mt19937_64 sf_rng(seed + 1000), sf_replay(seed + 1000);
      const Dag sf = sf_dag(p, pi, alpha, sf_rng);
      const Dag hidden = er_dag(p, pi, alpha, sf_replay);
      for (Var v = 0; v < p; ++v) problems += sf.parents(v).size() != hidden.parents(v).size();
    }
    double worst_mean = 0.0, worst_sd = 0.0;
    for (auto graph : {GraphKind::er, GraphKind::sf}) {
      for (auto noise : {NoiseFamily::gaussian, NoiseFamily::gumbel, NoiseFamily::exponential}) {
        SimConfig cfg;
        cfg.num_vars = 30;
        cfg.n = 400;
        cfg.avg_degree = 4.0;
        cfg.graph = graph;
        cfg.noise = noise;
        cfg.seed = 808;
        const Simulation a = simulate(cfg), b = simulate(cfg);
        const auto& x = a.sample.data;
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
          const double mean = x.col(j).mean();
          const double sd = std::sqrt((x.col(j).array() - mean).square().mean());
          worst_mean = std::max(worst_mean, std::abs(mean));
          worst_sd = std::max(worst_sd, std::abs(sd - 1.0));
        }
        const io::Dataset da{io::default_names(cfg.num_vars), a.sample.data};
        const io::Dataset db{io::default_names(cfg.num_vars), b.sample.data};
        if (io::format_csv(da) != io::format_csv(db)) ++problems;
        if (io::format_edge_list(Pdag::from_dag(a.truth)) != io::format_edge_list(Pdag::from_dag(b.truth))) ++problems;
      }
    }
    const bool pass = problems == 0 && worst_mean < 1e-9 && worst_sd < 1e-9;
    report(8, "simulation invariants", pass,
           fmt("%zu problems; worst |mean| %.3g, worst |sd-1| %.3g", problems, worst_mean, worst_sd), since(t0));
  });
}

}  // namespace

int main() {
  Monotonicity mono;
  oracle_recovery(mono);
  gst_equivalence();
  find_compelled_oracle();
  desk_replication(mono);
  scale_free_degrees();
  monotonicity(mono);
  score_cross_validation();
  simulation_invariants();
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
