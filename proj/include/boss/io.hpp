#ifndef BOSS_IO_HPP
#define BOSS_IO_HPP

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "boss/common.hpp"
#include "boss/graph.hpp"

namespace boss::io {

class IoError : public DataError {
 public:
  using DataError::DataError;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

inline std::size_t parse_index(std::string_view s, std::string_view what) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw DataError("malformed " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Edge lists:
//   p <num_vars>
//   <i> -> <j>     directed
//   <i> -- <j>     undirected
// Written with directed edges first, then undirected, each sorted.

inline std::string format_edge_list(const Pdag& g) {
  std::string out = "p " + std::to_string(g.num_vars()) + "\n";
  for (const auto& [u, v] : g.directed_edges()) out += std::to_string(u) + " -> " + std::to_string(v) + "\n";
  for (const auto& [u, v] : g.undirected_edges()) out += std::to_string(u) + " -- " + std::to_string(v) + "\n";
  return out;
}

inline std::string format_edge_list(const Dag& g) { return format_edge_list(Pdag::from_dag(g)); }

inline Pdag parse_edge_list(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines[0].substr(0, 2) != "p ") throw DataError("edge list must start with 'p <num_vars>'");
  const std::size_t p = detail::parse_index(lines[0].substr(2), "variable count");
  Pdag g(p);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty()) continue;
    const auto sp1 = line.find(' ');
    const auto sp2 = line.find(' ', sp1 == std::string_view::npos ? sp1 : sp1 + 1);
    if (sp1 == std::string_view::npos || sp2 == std::string_view::npos) {
      throw DataError("malformed edge line " + std::to_string(i + 1) + ": '" + std::string(line) + "'");
    }
    const std::size_t a = detail::parse_index(line.substr(0, sp1), "edge endpoint");
    const std::string_view arrow = line.substr(sp1 + 1, sp2 - sp1 - 1);
    const std::size_t b = detail::parse_index(line.substr(sp2 + 1), "edge endpoint");
    if (a >= p || b >= p) throw DataError("edge endpoint out of range on line " + std::to_string(i + 1));
    try {
      if (arrow == "->") {
        g.add_directed(a, b);
      } else if (arrow == "--") {
        g.add_undirected(a, b);
      } else {
        throw DataError("unknown edge marker '" + std::string(arrow) + "'");
      }
    } catch (const InvalidArgument& e) {
      throw DataError("invalid edge on line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return g;
}

inline Dag parse_dag_edge_list(std::string_view text) {
  const Pdag g = parse_edge_list(text);
  if (!g.undirected_edges().empty()) throw DataError("expected a DAG but found undirected edges");
  Dag out(g.num_vars());
  for (const auto& [u, v] : g.directed_edges()) out.add_edge(u, v);
  if (!is_acyclic(out)) throw DataError("graph file contains a directed cycle");
  return out;
}

// ---------------------------------------------------------------------------
// CSV: header row of names, comma separated, '.' decimals, no quoting.

struct Dataset {
  std::vector<std::string> names;
  Eigen::MatrixXd values;  // rows are samples
};

inline std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw Error("cannot format number");
  return {buf, ptr};
}

inline std::vector<std::string> default_names(std::size_t p) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < p; ++i) names.push_back("V" + std::to_string(i));
  return names;
}

inline std::string format_csv(const Dataset& d) {
  const auto p = d.values.cols();
  if (static_cast<std::size_t>(p) != d.names.size()) throw InvalidArgument("name count does not match columns");
  std::string out;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (j) out += ',';
    out += d.names[static_cast<std::size_t>(j)];
  }
  out += '\n';
  for (Eigen::Index i = 0; i < d.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (j) out += ',';
      out += format_double(d.values(i, j));
    }
    out += '\n';
  }
  return out;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline Dataset parse_csv(std::string_view text) {
  auto lines = detail::split_lines(text);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw DataError("CSV is empty");
  Dataset d;
  for (auto name : split_commas(lines[0])) d.names.emplace_back(name);
  const std::size_t p = d.names.size();
  const std::size_t n = lines.size() - 1;
  d.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) {
    const auto cells = split_commas(lines[i + 1]);
    if (cells.size() != p) {
      throw DataError("CSV row " + std::to_string(i + 2) + " has " + std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(p));
    }
    for (std::size_t j = 0; j < p; ++j) {
      double value = 0.0;
      const auto cell = cells[j];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty() || !std::isfinite(value)) {
        throw DataError("non-numeric cell '" + std::string(cell) + "' at row " + std::to_string(i + 2) + ", column " +
                        std::to_string(j + 1));
      }
      d.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Shuffle map: one "orig_index,shuffled_index" line per variable.

inline std::string format_shuffle_map(const std::vector<Var>& shuffle) {
  std::string out;
  for (std::size_t v = 0; v < shuffle.size(); ++v) out += std::to_string(v) + "," + std::to_string(shuffle[v]) + "\n";
  return out;
}

inline std::vector<Var> parse_shuffle_map(std::string_view text, std::size_t p) {
  std::vector<Var> shuffle(p, p);
  std::vector<bool> used(p, false);
  for (auto line : detail::split_lines(text)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw DataError("malformed shuffle map line: '" + std::string(line) + "'");
    const std::size_t orig = detail::parse_index(line.substr(0, comma), "shuffle index");
    const std::size_t shuffled = detail::parse_index(line.substr(comma + 1), "shuffle index");
    if (orig >= p || shuffled >= p || shuffle[orig] != p || used[shuffled]) {
      throw DataError("shuffle map is not a bijection on 0.." + std::to_string(p - 1));
    }
    shuffle[orig] = shuffled;
    used[shuffled] = true;
  }
  for (Var s : shuffle) {
    if (s == p) throw DataError("shuffle map does not cover every variable");
  }
  return shuffle;
}

inline std::vector<Var> invert(const std::vector<Var>& map) {
  std::vector<Var> out(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) out.at(map[i]) = i;
  return out;
}

// ---------------------------------------------------------------------------
// Manifest: ordered key=value lines.

class Manifest {
 public:
  void set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_) {
      if (k == key) {
        v = value;
        return;
      }
    }
    entries_.emplace_back(key, value);
  }

  std::optional<std::string> get(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
      if (k == key) return v;
    }
    return std::nullopt;
  }

  std::string require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw DataError("manifest is missing '" + key + "'");
    return *v;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string format() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
    return out;
  }

  static Manifest parse(std::string_view text) {
    Manifest m;
    for (auto line : detail::split_lines(text)) {
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw DataError("malformed manifest line: '" + std::string(line) + "'");
      m.set(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
    }
    return m;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace boss::io

#endif  // BOSS_IO_HPP
