// Command implementations behind the `boss` executable. Kept in a header so
// the test suite can drive them in-process.
#ifndef BOSS_TOOLS_CLI_HPP
#define BOSS_TOOLS_CLI_HPP

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "boss/boss.hpp"

namespace boss::cli {

inline constexpr const char* kVersion = "0.1.0";

namespace fs = std::filesystem;

/// Thrown for bad flag values or combinations; maps to exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

inline std::string bool_text(bool b) { return b ? "true" : "false"; }

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw DataError("expected true/false, got '" + s + "'");
}

template <class T>
T parse_number(const std::string& s, const std::string& key) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw DataError("manifest value for '" + key + "' is not a number: '" + s + "'");
  }
  return value;
}

inline std::string na_or(const std::optional<double>& x) { return x ? io::format_double(*x) : "NA"; }

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  SimConfig sim;
  fs::path out_dir = ".";
};

inline io::Manifest simulate_manifest(const SimulateOptions& o) {
  io::Manifest m;
  m.set("command", "simulate");
  m.set("version", kVersion);
  m.set("timestamp", timestamp_utc());
  m.set("p", std::to_string(o.sim.num_vars));
  m.set("avg_degree", io::format_double(o.sim.avg_degree));
  m.set("graph", to_string(o.sim.graph));
  m.set("noise", to_string(o.sim.noise));
  m.set("n", std::to_string(o.sim.n));
  m.set("seed", std::to_string(o.sim.seed));
  m.set("standardize", bool_text(o.sim.standardize));
  m.set("shuffle_columns", bool_text(o.sim.shuffle_columns));
  m.set("rng", "mt19937_64");
  m.set("out_dir", o.out_dir.string());
  m.set("graph_file", "graph.txt");
  m.set("data_file", "data.csv");
  m.set("shuffle_file", "shuffle.csv");
  return m;
}

inline SimulateOptions simulate_options_from(const io::Manifest& m) {
  SimulateOptions o;
  o.sim.num_vars = parse_number<std::size_t>(m.require("p"), "p");
  o.sim.avg_degree = parse_number<double>(m.require("avg_degree"), "avg_degree");
  o.sim.graph = parse_graph_kind(m.require("graph"));
  o.sim.noise = parse_noise_family(m.require("noise"));
  o.sim.n = parse_number<std::size_t>(m.require("n"), "n");
  o.sim.seed = parse_number<std::uint64_t>(m.require("seed"), "seed");
  if (auto s = m.get("standardize")) o.sim.standardize = parse_bool(*s);
  if (auto s = m.get("shuffle_columns")) o.sim.shuffle_columns = parse_bool(*s);
  if (auto s = m.get("out_dir")) o.out_dir = *s;
  return o;
}

/// Writes graph.txt (original variable order), data.csv (shuffled columns),
/// shuffle.csv and manifest.txt into o.out_dir.
inline Simulation cmd_simulate(const SimulateOptions& o) {
  Simulation sim = simulate(o.sim);
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw io::IoError("cannot create " + o.out_dir.string() + ": " + ec.message());
  io::write_file(o.out_dir / "graph.txt", io::format_edge_list(sim.truth));
  io::write_file(o.out_dir / "data.csv",
                 io::format_csv({io::default_names(o.sim.num_vars), sim.sample.data}));
  io::write_file(o.out_dir / "shuffle.csv", io::format_shuffle_map(sim.sample.shuffle));
  io::write_file(o.out_dir / "manifest.txt", simulate_manifest(o).format());
  return sim;
}

// ---------------------------------------------------------------------------
// search

struct SearchOptions {
  fs::path data;
  fs::path out = "cpdag.txt";
  SearchConfig search;
};

struct SearchOutcome {
  SearchResult result;
  double seconds = 0.0;
};

inline fs::path manifest_path_for(const fs::path& out) { return fs::path(out.string() + ".manifest"); }

inline io::Manifest search_manifest(const SearchOptions& o, double seconds) {
  io::Manifest m;
  m.set("command", "search");
  m.set("version", kVersion);
  m.set("timestamp", timestamp_utc());
  m.set("data", o.data.string());
  m.set("out", o.out.string());
  m.set("penalty_discount", io::format_double(o.search.penalty_discount));
  m.set("bes", bool_text(o.search.use_bes));
  m.set("num_starts", std::to_string(o.search.num_starts));
  m.set("seed", std::to_string(o.search.seed));
  m.set("threads", std::to_string(o.search.threads));
  m.set("max_tree_nodes", std::to_string(o.search.max_tree_nodes));
  m.set("elapsed_seconds", io::format_double(seconds));
  return m;
}

inline SearchOptions search_options_from(const io::Manifest& m) {
  SearchOptions o;
  o.data = m.require("data");
  o.out = m.require("out");
  o.search.penalty_discount = parse_number<double>(m.require("penalty_discount"), "penalty_discount");
  o.search.use_bes = parse_bool(m.require("bes"));
  o.search.num_starts = parse_number<std::size_t>(m.require("num_starts"), "num_starts");
  o.search.seed = parse_number<std::uint64_t>(m.require("seed"), "seed");
  if (auto s = m.get("threads")) o.search.threads = parse_number<std::size_t>(*s, "threads");
  if (auto s = m.get("max_tree_nodes")) o.search.max_tree_nodes = parse_number<std::size_t>(*s, "max_tree_nodes");
  return o;
}

/// Runs the search on a data matrix (rows are samples).
inline SearchOutcome search_data(const Eigen::MatrixXd& data, const SearchConfig& cfg,
                                 const SearchObserver* observer = nullptr) {
  if (data.cols() == 0) throw DataError("dataset has no columns");
  const auto t0 = std::chrono::steady_clock::now();
  const BicScore score(covariance_from_data(data), cfg.penalty_discount);
  SearchOutcome out{search(score, cfg, observer), 0.0};
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Reads the CSV, searches, writes the CPDAG to o.out and its manifest to
/// o.out + ".manifest".
inline SearchOutcome cmd_search(const SearchOptions& o) {
  if (!(o.search.penalty_discount > 0.0)) throw UsageError("--penalty-discount must be positive");
  if (o.search.num_starts < 1) throw UsageError("--num-starts must be at least 1");
  if (o.search.threads < 1) throw UsageError("--threads must be at least 1");
  const io::Dataset d = io::parse_csv(io::read_file(o.data));
  SearchOutcome out = search_data(d.values, o.search);
  io::write_file(o.out, io::format_edge_list(out.result.cpdag));
  io::write_file(manifest_path_for(o.out), search_manifest(o, out.seconds).format());
  return out;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  fs::path true_graph;
  fs::path est_graph;
  std::optional<fs::path> data;
  std::optional<fs::path> shuffle;
  std::optional<fs::path> out;
  double penalty_discount = 2.0;
};

inline const char* kEvalHeader = "adj_pre,adj_rec,ori_pre,ori_rec,delta_bic,edges,seconds";

inline std::string format_eval_row(const EvalReport& r) {
  return na_or(r.adj_precision) + "," + na_or(r.adj_recall) + "," + na_or(r.ori_precision) + "," +
         na_or(r.ori_recall) + "," + na_or(r.delta_bic) + "," + std::to_string(r.edge_count) + "," +
         na_or(r.elapsed_seconds);
}

/// Columns of `data` reordered from shuffled to original variable order.
inline Eigen::MatrixXd unshuffle_columns(const Eigen::MatrixXd& data, const std::vector<Var>& shuffle) {
  Eigen::MatrixXd out(data.rows(), data.cols());
  for (Var v = 0; v < shuffle.size(); ++v) {
    out.col(static_cast<Eigen::Index>(v)) = data.col(static_cast<Eigen::Index>(shuffle[v]));
  }
  return out;
}

/// Compares an estimate produced on shuffled data against the true DAG in
/// original variable order. The shuffle map comes from --shuffle, else
/// shuffle.csv next to the true graph, else the identity.
inline EvalReport cmd_eval(const EvalOptions& o) {
  const Dag truth = io::parse_dag_edge_list(io::read_file(o.true_graph));
  const Pdag est_shuffled = io::parse_edge_list(io::read_file(o.est_graph));
  const std::size_t p = truth.num_vars();
  if (est_shuffled.num_vars() != p) {
    throw DataError("true graph has " + std::to_string(p) + " variables but the estimate has " +
                    std::to_string(est_shuffled.num_vars()));
  }

  std::vector<Var> shuffle(p);
  for (Var v = 0; v < p; ++v) shuffle[v] = v;
  std::optional<fs::path> shuffle_path = o.shuffle;
  if (!shuffle_path) {
    const fs::path beside = o.true_graph.parent_path() / "shuffle.csv";
    if (fs::exists(beside)) shuffle_path = beside;
  }
  if (shuffle_path) shuffle = io::parse_shuffle_map(io::read_file(*shuffle_path), p);
  const Pdag estimate = relabel(est_shuffled, io::invert(shuffle));

  EvalReport r;
  if (o.data) {
    const io::Dataset d = io::parse_csv(io::read_file(*o.data));
    if (static_cast<std::size_t>(d.values.cols()) != p) throw DataError("data column count does not match the graphs");
    const BicScore score(covariance_from_data(unshuffle_columns(d.values, shuffle)), o.penalty_discount);
    r = evaluate(truth, estimate, score);
  } else {
    r = evaluate(truth, estimate);
  }

  const fs::path manifest = manifest_path_for(o.est_graph);
  if (fs::exists(manifest)) {
    const auto m = io::Manifest::parse(io::read_file(manifest));
    if (auto s = m.get("elapsed_seconds")) r.elapsed_seconds = parse_number<double>(*s, "elapsed_seconds");
  }

  if (o.out) io::write_file(*o.out, std::string(kEvalHeader) + "\n" + format_eval_row(r) + "\n");
  return r;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
  std::size_t reps = 10;
  std::vector<std::size_t> ps{100};
  std::vector<double> degrees{2.0};
  std::vector<NoiseFamily> noises{NoiseFamily::gaussian};
  std::vector<GraphKind> graphs{GraphKind::er};
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  double penalty_discount = 2.0;
  bool use_bes = false;
  std::size_t num_starts = 1;
  std::size_t threads = 1;
  std::optional<fs::path> out_dir;
};

struct BenchCell {
  GraphKind graph;
  NoiseFamily noise;
  std::size_t p;
  double avg_degree;
};

struct BenchRun {
  std::size_t cell = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  EvalReport report;
};

struct Summary {
  std::size_t count = 0;  // runs where the value is defined
  double mean = 0.0;
  double sd = 0.0;
};

/// Mean and sample standard deviation of the defined values; sd is 0 for a
/// single value and the count is 0 when none are defined.
inline Summary summarize(const std::vector<std::optional<double>>& xs) {
  Summary s;
  for (const auto& x : xs) {
    if (x) {
      ++s.count;
      s.mean += *x;
    }
  }
  if (s.count == 0) return s;
  s.mean /= static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (const auto& x : xs) {
      if (x) ss += (*x - s.mean) * (*x - s.mean);
    }
    s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

struct BenchRow {
  BenchCell cell;
  std::size_t reps = 0;
  Summary adj_pre, adj_rec, ori_pre, ori_rec, delta_bic, edges, seconds;
};

struct BenchResult {
  std::vector<BenchCell> cells;
  std::vector<BenchRun> runs;  // sorted by (cell, rep)
  std::vector<BenchRow> rows;  // one per cell
};

inline std::vector<BenchCell> bench_cells(const BenchOptions& o) {
  std::vector<BenchCell> cells;
  for (GraphKind g : o.graphs) {
    for (NoiseFamily f : o.noises) {
      for (std::size_t p : o.ps) {
        for (double d : o.degrees) cells.push_back({g, f, p, d});
      }
    }
  }
  return cells;
}

/// The seed of repetition `rep`, shared by every cell so cells see common
/// random numbers.
inline std::uint64_t rep_seed(std::uint64_t base, std::size_t rep) { return derive_seed(base, rep); }

inline BenchRun bench_one(const BenchOptions& o, const BenchCell& cell, std::size_t cell_index, std::size_t rep,
                          const SearchObserver* observer) {
  SimConfig sim;
  sim.num_vars = cell.p;
  sim.avg_degree = cell.avg_degree;
  sim.noise = cell.noise;
  sim.graph = cell.graph;
  sim.n = o.n;
  sim.seed = rep_seed(o.seed, rep);
  const Simulation s = simulate(sim);

  SearchConfig cfg;
  cfg.penalty_discount = o.penalty_discount;
  cfg.use_bes = o.use_bes;
  cfg.num_starts = o.num_starts;
  cfg.seed = derive_seed(sim.seed, 1);
  const SearchOutcome found = search_data(s.sample.data, cfg, observer);

  const Pdag estimate = relabel(found.result.cpdag, io::invert(s.sample.shuffle));
  const BicScore score(covariance_from_data(unshuffle_columns(s.sample.data, s.sample.shuffle)), o.penalty_discount);
  BenchRun run{cell_index, rep, sim.seed, evaluate(s.truth, estimate, score)};
  run.report.elapsed_seconds = found.seconds;
  return run;
}

inline std::string format_runs_csv(const BenchResult& b) {
  std::string out = "graph,noise,p,avg_degree,rep,seed," + std::string(kEvalHeader) + "\n";
  for (const auto& r : b.runs) {
    const auto& c = b.cells[r.cell];
    out += to_string(c.graph) + "," + to_string(c.noise) + "," + std::to_string(c.p) + "," +
           io::format_double(c.avg_degree) + "," + std::to_string(r.rep) + "," + std::to_string(r.seed) + "," +
           format_eval_row(r.report) + "\n";
  }
  return out;
}

inline std::string format_summary_csv(const BenchResult& b) {
  std::string out = "graph,noise,p,avg_degree,reps";
  for (const char* name : {"adj_pre", "adj_rec", "ori_pre", "ori_rec", "delta_bic", "edges", "seconds"}) {
    out += std::string(",") + name + "_mean," + name + "_sd," + name + "_count";
  }
  out += "\n";
  for (const auto& row : b.rows) {
    out += to_string(row.cell.graph) + "," + to_string(row.cell.noise) + "," + std::to_string(row.cell.p) + "," +
           io::format_double(row.cell.avg_degree) + "," + std::to_string(row.reps);
    for (const Summary* s : {&row.adj_pre, &row.adj_rec, &row.ori_pre, &row.ori_rec, &row.delta_bic, &row.edges,
                             &row.seconds}) {
      if (s->count == 0) {
        out += ",NA,NA,0";
      } else {
        out += "," + io::format_double(s->mean) + "," + io::format_double(s->sd) + "," + std::to_string(s->count);
      }
    }
    out += "\n";
  }
  return out;
}

/// Text table of "mean (sd)" cells, one row per configuration.
inline std::string format_summary_table(const BenchResult& b) {
  auto cell = [](const Summary& s, int precision) {
    if (s.count == 0) return std::string("NA");
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(precision) << s.mean << " (" << std::setprecision(3) << s.sd << ")";
    return ss.str();
  };
  std::ostringstream ss;
  ss << std::left << std::setw(6) << "graph" << std::setw(12) << "noise" << std::setw(6) << "p" << std::setw(6)
     << "deg" << std::setw(6) << "reps";
  for (const char* h : {"Adj Pre", "Adj Rec", "Ori Pre", "Ori Rec", "dBIC", "Edges", "Seconds"}) {
    ss << std::setw(20) << h;
  }
  ss << "\n";
  for (const auto& row : b.rows) {
    ss << std::left << std::setw(6) << to_string(row.cell.graph) << std::setw(12) << to_string(row.cell.noise)
       << std::setw(6) << row.cell.p << std::setw(6) << io::format_double(row.cell.avg_degree) << std::setw(6)
       << row.reps;
    ss << std::setw(20) << cell(row.adj_pre, 2) << std::setw(20) << cell(row.adj_rec, 2) << std::setw(20)
       << cell(row.ori_pre, 2) << std::setw(20) << cell(row.ori_rec, 2) << std::setw(20) << cell(row.delta_bic, 2)
       << std::setw(20) << cell(row.edges, 1) << std::setw(20) << cell(row.seconds, 2) << "\n";
  }
  return ss.str();
}

inline io::Manifest bench_manifest(const BenchOptions& o) {
  auto join = [](const auto& xs, auto fmt) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : ",") + fmt(x);
    return s;
  };
  io::Manifest m;
  m.set("command", "bench");
  m.set("version", kVersion);
  m.set("timestamp", timestamp_utc());
  m.set("reps", std::to_string(o.reps));
  m.set("p", join(o.ps, [](std::size_t x) { return std::to_string(x); }));
  m.set("avg_degree", join(o.degrees, [](double x) { return io::format_double(x); }));
  m.set("noise", join(o.noises, [](NoiseFamily x) { return to_string(x); }));
  m.set("graph", join(o.graphs, [](GraphKind x) { return to_string(x); }));
  m.set("n", std::to_string(o.n));
  m.set("seed", std::to_string(o.seed));
  m.set("rep_seed", "mix64(seed ^ mix64(rep + 1)), SplitMix64 finalizer");
  m.set("search_seed", "mix64(rep_seed ^ mix64(2))");
  m.set("penalty_discount", io::format_double(o.penalty_discount));
  m.set("bes", bool_text(o.use_bes));
  m.set("num_starts", std::to_string(o.num_starts));
  m.set("threads", std::to_string(o.threads));
  return m;
}

/// simulate -> search -> eval for every cell and repetition. Repetitions run
/// on o.threads workers; `observer` must then be thread-safe.
inline BenchResult cmd_bench(const BenchOptions& o, const SearchObserver* observer = nullptr) {
  if (o.reps < 1) throw UsageError("--reps must be at least 1");
  if (o.threads < 1) throw UsageError("--threads must be at least 1");
  if (o.ps.empty() || o.degrees.empty() || o.noises.empty() || o.graphs.empty()) throw UsageError("empty grid");
  BenchResult b;
  b.cells = bench_cells(o);
  for (const auto& c : b.cells) target_edge_count(c.p, c.avg_degree);

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t c = 0; c < b.cells.size(); ++c) {
    for (std::size_t r = 0; r < o.reps; ++r) jobs.emplace_back(c, r);
  }
  b.runs.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const auto [c, r] = jobs[j];
        b.runs[j] = bench_one(o, b.cells[c], c, r, observer);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (o.threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(o.threads, jobs.size()); ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t c = 0; c < b.cells.size(); ++c) {
    std::vector<std::optional<double>> ap, ar, op, orc, db, ed, sec;
    for (const auto& run : b.runs) {
      if (run.cell != c) continue;
      ap.push_back(run.report.adj_precision);
      ar.push_back(run.report.adj_recall);
      op.push_back(run.report.ori_precision);
      orc.push_back(run.report.ori_recall);
      db.push_back(run.report.delta_bic);
      ed.push_back(static_cast<double>(run.report.edge_count));
      sec.push_back(run.report.elapsed_seconds);
    }
    b.rows.push_back({b.cells[c], o.reps, summarize(ap), summarize(ar), summarize(op), summarize(orc), summarize(db),
                      summarize(ed), summarize(sec)});
  }

  if (o.out_dir) {
    std::error_code ec;
    fs::create_directories(*o.out_dir, ec);
    if (ec) throw io::IoError("cannot create " + o.out_dir->string() + ": " + ec.message());
    io::write_file(*o.out_dir / "runs.csv", format_runs_csv(b));
    io::write_file(*o.out_dir / "summary.csv", format_summary_csv(b));
    io::write_file(*o.out_dir / "summary.txt", format_summary_table(b));
    io::write_file(*o.out_dir / "manifest.txt", bench_manifest(o).format());
  }
  return b;
}

// ---------------------------------------------------------------------------
// Entry point

/// Parses `args` (without the program name) and runs the subcommand.
/// Returns 0 on success, 1 on usage errors, 2 on data errors.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Best order score search for causal structure learning"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // simulate
  SimulateOptions sim;
  std::string sim_graph = "er", sim_noise = "gaussian";
  std::string sim_manifest;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a random DAG and linear SEM data");
  simulate_cmd->add_option("--p", sim.sim.num_vars, "Number of variables")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--avg-degree", sim.sim.avg_degree, "Average degree")->check(CLI::NonNegativeNumber);
  simulate_cmd->add_option("--graph", sim_graph, "Graph model")->check(CLI::IsMember({"er", "sf"}));
  simulate_cmd->add_option("--noise", sim_noise, "Noise family")
      ->check(CLI::IsMember({"gaussian", "gumbel", "exponential"}));
  simulate_cmd->add_option("--n", sim.sim.n, "Sample size")->check(CLI::Range(std::size_t{2}, std::size_t(-1)));
  simulate_cmd->add_option("--seed", sim.sim.seed, "Random seed");
  auto* sim_out_opt = simulate_cmd->add_option("--out-dir", sim.out_dir, "Output directory");
  auto* sim_from = simulate_cmd->add_option("--from-manifest", sim_manifest, "Rerun from a manifest.txt");

  // search
  SearchOptions srch;
  std::string search_manifest_path;
  auto* search_cmd = app.add_subcommand("search", "Learn a CPDAG from a CSV dataset");
  auto* data_opt = search_cmd->add_option("--data", srch.data, "Input CSV");
  search_cmd->add_option("--penalty-discount", srch.search.penalty_discount, "BIC penalty discount");
  search_cmd->add_flag("--bes", srch.search.use_bes, "Run backward equivalence search afterwards");
  search_cmd->add_option("--num-starts", srch.search.num_starts, "Number of starting permutations");
  search_cmd->add_option("--seed", srch.search.seed, "Random seed");
  search_cmd->add_option("--threads", srch.search.threads, "Worker threads for multiple starts");
  search_cmd->add_option("--max-tree-nodes", srch.search.max_tree_nodes,
                         "Clear the grow-shrink trees beyond this many nodes (0 = unlimited)");
  auto* search_out_opt = search_cmd->add_option("--out", srch.out, "Output edge list");
  auto* search_from = search_cmd->add_option("--from-manifest", search_manifest_path, "Rerun from a search manifest");

  // eval
  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Score an estimated CPDAG against the true DAG");
  eval_cmd->add_option("--true-graph", ev.true_graph, "True DAG edge list")->required();
  eval_cmd->add_option("--est-graph", ev.est_graph, "Estimated CPDAG edge list")->required();
  eval_cmd->add_option("--data", ev.data, "Data CSV, enables delta BIC");
  eval_cmd->add_option("--shuffle", ev.shuffle, "Shuffle map (default: shuffle.csv beside the true graph)");
  eval_cmd->add_option("--penalty-discount", ev.penalty_discount, "BIC penalty discount");
  eval_cmd->add_option("--out", ev.out, "Write the CSV report here as well");

  // bench
  BenchOptions bench;
  std::vector<std::string> bench_noises{"gaussian"}, bench_graphs{"er"};
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "Repeated simulate, search, eval over a grid");
  bench_cmd->add_option("--reps", bench.reps, "Repetitions per cell");
  bench_cmd->add_option("--p", bench.ps, "Variable counts")->delimiter(',');
  bench_cmd->add_option("--avg-degree", bench.degrees, "Average degrees")->delimiter(',');
  bench_cmd->add_option("--noise", bench_noises, "Noise families")
      ->delimiter(',')
      ->check(CLI::IsMember({"gaussian", "gumbel", "exponential"}));
  bench_cmd->add_option("--graph", bench_graphs, "Graph models")->delimiter(',')->check(CLI::IsMember({"er", "sf"}));
  bench_cmd->add_option("--n", bench.n, "Sample size");
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--penalty-discount", bench.penalty_discount, "BIC penalty discount");
  bench_cmd->add_flag("--bes", bench.use_bes, "Run backward equivalence search");
  bench_cmd->add_option("--num-starts", bench.num_starts, "Starting permutations per search");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads across repetitions");
  bench_cmd->add_option("--out-dir", bench_out, "Write runs.csv, summary.csv, summary.txt, manifest.txt");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (simulate_cmd->parsed()) {
      if (!sim_from->empty()) {
        const fs::path dir = sim.out_dir;
        sim = simulate_options_from(io::Manifest::parse(io::read_file(sim_manifest)));
        if (!sim_out_opt->empty()) sim.out_dir = dir;
      } else {
        sim.sim.graph = parse_graph_kind(sim_graph);
        sim.sim.noise = parse_noise_family(sim_noise);
      }
      const Simulation s = cmd_simulate(sim);
      out << "wrote " << (sim.out_dir / "graph.txt").string() << " (" << s.truth.num_edges() << " edges), "
          << (sim.out_dir / "data.csv").string() << "\n";
    } else if (search_cmd->parsed()) {
      if (!search_from->empty()) {
        const fs::path override_out = srch.out;
        srch = search_options_from(io::Manifest::parse(io::read_file(search_manifest_path)));
        if (!search_out_opt->empty()) srch.out = override_out;
      } else if (data_opt->empty()) {
        throw UsageError("search needs --data or --from-manifest");
      }
      const SearchOutcome s = cmd_search(srch);
      out << "elapsed_seconds " << io::format_double(s.seconds) << "\n";
    } else if (eval_cmd->parsed()) {
      const EvalReport r = cmd_eval(ev);
      out << kEvalHeader << "\n" << format_eval_row(r) << "\n";
    } else if (bench_cmd->parsed()) {
      bench.noises.clear();
      for (const auto& s : bench_noises) bench.noises.push_back(parse_noise_family(s));
      bench.graphs.clear();
      for (const auto& s : bench_graphs) bench.graphs.push_back(parse_graph_kind(s));
      if (!bench_out.empty()) bench.out_dir = bench_out;
      const BenchResult b = cmd_bench(bench);
      out << format_summary_table(b);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace boss::cli

#endif  // BOSS_TOOLS_CLI_HPP
