#pragma once

/// @file io.hpp
/// @brief Snapshot files, key = value config files, and number formatting
/// for the CLI.
///
/// Snapshot layout:
///   "HFLD1\n"
///   one ASCII header line of space-separated key=value pairs:
///     n=<dim> sizes=<N1,...> lengths=<L1,...> components=<c> t=<time>
///     layout=row-major-components-innermost
///   node_count * components little-endian IEEE-754 doubles.
/// Doubles in text are written in shortest round-trip form.

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "hflow/flow.hpp"
#include "hflow/grid.hpp"
#include "hflow/metric.hpp"
#include "hflow/tensor.hpp"

namespace hflow::io {

inline constexpr std::string_view kSnapshotMagic = "HFLD1\n";
inline constexpr std::string_view kSnapshotLayout = "row-major-components-innermost";

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  while (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline long long parse_integer(std::string_view s) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

/// Writes to a sibling temp file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct Snapshot {
  int n = 0;
  std::vector<std::size_t> sizes;
  std::vector<double> lengths;
  int components = 0;
  double t = 0.0;
  std::vector<double> data;  ///< node-major, components innermost

  std::size_t node_count() const {
    std::size_t c = 1;
    for (auto s : sizes) c *= s;
    return c;
  }

  bool operator==(const Snapshot&) const = default;
};

inline std::string encode_snapshot(const Snapshot& s) {
  if (s.sizes.size() != static_cast<std::size_t>(s.n) || s.lengths.size() != s.sizes.size()) {
    throw std::invalid_argument("snapshot: dimension does not match sizes/lengths");
  }
  if (s.data.size() != s.node_count() * static_cast<std::size_t>(s.components)) {
    throw std::invalid_argument("snapshot: data size does not match header");
  }
  std::string out(kSnapshotMagic);
  out += "n=" + std::to_string(s.n) + " sizes=";
  for (std::size_t d = 0; d < s.sizes.size(); ++d) out += (d ? "," : "") + std::to_string(s.sizes[d]);
  out += " lengths=";
  for (std::size_t d = 0; d < s.lengths.size(); ++d) out += (d ? "," : "") + format_double(s.lengths[d]);
  out += " components=" + std::to_string(s.components) + " t=" + format_double(s.t);
  out += " layout=" + std::string(kSnapshotLayout) + "\n";
  out.reserve(out.size() + 8 * s.data.size());
  for (double v : s.data) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
  }
  return out;
}

inline Snapshot decode_snapshot(std::string_view bytes) {
  if (bytes.substr(0, kSnapshotMagic.size()) != kSnapshotMagic) throw std::runtime_error("snapshot: bad magic");
  bytes.remove_prefix(kSnapshotMagic.size());
  const std::size_t eol = bytes.find('\n');
  if (eol == std::string_view::npos) throw std::runtime_error("snapshot: missing header line");
  std::map<std::string, std::string> kv;
  for (const auto& tok : split(bytes.substr(0, eol), ' ')) {
    if (tok.empty()) continue;
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::runtime_error("snapshot: malformed header token '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"n", "sizes", "lengths", "components", "t", "layout"}) {
    if (!kv.count(key)) throw std::runtime_error(std::string("snapshot: header lacks '") + key + "'");
  }
  if (kv["layout"] != kSnapshotLayout) throw std::runtime_error("snapshot: unsupported layout " + kv["layout"]);
  Snapshot s;
  s.n = static_cast<int>(parse_integer(kv["n"]));
  for (const auto& v : split(kv["sizes"], ',')) s.sizes.push_back(static_cast<std::size_t>(parse_integer(v)));
  for (const auto& v : split(kv["lengths"], ',')) s.lengths.push_back(parse_double(v));
  s.components = static_cast<int>(parse_integer(kv["components"]));
  s.t = parse_double(kv["t"]);
  if (s.n < 1 || s.n > kMaxDim || s.sizes.size() != static_cast<std::size_t>(s.n) || s.lengths.size() != s.sizes.size() ||
      s.components < 1) {
    throw std::runtime_error("snapshot: inconsistent header");
  }
  bytes.remove_prefix(eol + 1);
  const std::size_t count = s.node_count() * static_cast<std::size_t>(s.components);
  if (bytes.size() != 8 * count) throw std::runtime_error("snapshot: payload size does not match header");
  s.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t(static_cast<unsigned char>(bytes[8 * i + b])) << (8 * b);
    s.data[i] = std::bit_cast<double>(bits);
  }
  return s;
}

inline void write_snapshot(const std::filesystem::path& path, const Snapshot& s) {
  write_file_atomic(path, encode_snapshot(s));
}

inline Snapshot read_snapshot(const std::filesystem::path& path) { return decode_snapshot(read_file(path)); }

template <int Dim>
Snapshot snapshot_header(const PeriodicGrid<Dim>& grid, int components, double t) {
  Snapshot s;
  s.n = Dim;
  s.sizes.assign(grid.sizes().begin(), grid.sizes().end());
  s.lengths.assign(grid.lengths().begin(), grid.lengths().end());
  s.components = components;
  s.t = t;
  s.data.resize(grid.node_count() * static_cast<std::size_t>(components));
  return s;
}

template <int Dim>
Snapshot to_snapshot(const ScalarField<Dim>& f, double t = 0.0) {
  Snapshot s = snapshot_header(f.grid(), 1, t);
  std::copy(f.values().begin(), f.values().end(), s.data.begin());
  return s;
}

/// Upper-triangle components in row-major order per node.
template <int Dim>
Snapshot to_snapshot(const SymTensorField<Dim>& f, double t = 0.0) {
  constexpr int C = kSymCount<Dim>;
  Snapshot s = snapshot_header(f.grid(), C, t);
  for (std::size_t n = 0; n < f.node_count(); ++n)
    for (int c = 0; c < C; ++c) s.data[n * C + c] = f.stored(c)[n];
  return s;
}

template <int Dim, int Rank>
Snapshot to_snapshot(const TensorField<Dim, Rank>& f, double t = 0.0) {
  Snapshot s = snapshot_header(f.grid(), TensorField<Dim, Rank>::kComponents, t);
  std::copy(f.data().begin(), f.data().end(), s.data.begin());
  return s;
}

template <int Dim>
Snapshot to_snapshot(const PairSymmetricField<Dim>& f, double t = 0.0) {
  Snapshot s = snapshot_header(f.grid(), PairSymmetricField<Dim>::kComponents, t);
  std::copy(f.data().begin(), f.data().end(), s.data.begin());
  return s;
}

template <int Dim>
PeriodicGrid<Dim> grid_of(const Snapshot& s) {
  if (s.n != Dim) throw std::runtime_error("snapshot dimension " + std::to_string(s.n) + " does not match");
  typename PeriodicGrid<Dim>::Index sizes{};
  typename PeriodicGrid<Dim>::Point lengths{};
  for (int d = 0; d < Dim; ++d) {
    sizes[d] = s.sizes[d];
    lengths[d] = s.lengths[d];
  }
  return PeriodicGrid<Dim>(sizes, lengths);
}

template <int Dim>
ScalarField<Dim> scalar_from_snapshot(const Snapshot& s) {
  if (s.components != 1) throw std::runtime_error("snapshot: expected 1 component");
  return ScalarField<Dim>(grid_of<Dim>(s), s.data);
}

template <int Dim>
SymTensorField<Dim> sym_from_snapshot(const Snapshot& s) {
  constexpr int C = kSymCount<Dim>;
  if (s.components != C) throw std::runtime_error("snapshot: expected " + std::to_string(C) + " components");
  SymTensorField<Dim> f(grid_of<Dim>(s));
  for (std::size_t n = 0; n < f.node_count(); ++n)
    for (int c = 0; c < C; ++c) f.stored(c)[n] = s.data[n * C + c];
  return f;
}

/// Diagnostics CSV: header row, then one row per DiagnosticsRow in field order.
inline std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows) {
  std::string out = std::string(diagnostics_header()) + "\n";
  for (const auto& r : rows) {
    for (double v : {r.t, r.sup_q, r.t_sup_q, r.lambda_min, r.lambda_max, r.var_det, r.mean_drift, r.sup_phi, r.dt}) {
      out += format_double(v);
      out += ',';
    }
    out.back() = '\n';
  }
  return out;
}

/// Parsed `key = value` file: flat namespace, `#` starts a comment, a key
/// may appear once per file. set() overrides.
class Config {
 public:
  Config() = default;

  static Config parse(std::string_view text) {
    Config cfg;
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
      ++line_no;
      std::string line = raw;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
      }
      const std::string key = trim(line.substr(0, eq));
      if (cfg.has(key)) {
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      }
      cfg.set(key, trim(line.substr(eq + 1)));
    }
    return cfg;
  }

  static Config load(const std::filesystem::path& path) { return parse(read_file(path)); }

  void set(const std::string& key, const std::string& value) {
    if (key.empty()) throw std::invalid_argument("config: empty key");
    for (auto& [k, v] : entries_) {
      if (k == key) {
        v = value;
        return;
      }
    }
    entries_.emplace_back(key, value);
  }

  bool has(const std::string& key) const { return find(key) != nullptr; }

  std::string get(const std::string& key, const std::string& fallback) const {
    const auto* v = find(key);
    return v ? *v : fallback;
  }

  double get_double(const std::string& key, double fallback) const {
    const auto* v = find(key);
    return v ? parse_double(*v) : fallback;
  }

  long long get_integer(const std::string& key, long long fallback) const {
    const auto* v = find(key);
    return v ? parse_integer(*v) : fallback;
  }

  std::vector<double> get_doubles(const std::string& key) const {
    std::vector<double> out;
    if (const auto* v = find(key)) {
      for (const auto& item : split(*v, ',')) out.push_back(parse_double(trim(item)));
    }
    return out;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  /// Canonical text form, one `key = value` per line in insertion order.
  std::string to_text() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
  }

 private:
  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return &v;
    return nullptr;
  }

  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace hflow::io
