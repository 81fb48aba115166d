#include "dsgso/io.hpp"

#include "dsgso/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

namespace dsgso::io {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    fields.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::optional<long long> to_int(std::string_view s) {
  s = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

/// Line reader that tracks 1-based line numbers and strips '\r'.
class Lines {
 public:
  Lines(std::istream& in, std::string source)
      : in_(in), source_(std::move(source)) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  /// Next line that is not blank.
  bool next_content(std::string& line) {
    while (next(line)) {
      if (!trim(line).empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_, number_, what);
  }

  double number(std::string_view field, const char* name) const {
    const auto v = to_double(field);
    if (!v || !std::isfinite(*v)) {
      fail(std::string("non-numeric ") + name + " '" + std::string(field) + "'");
    }
    return *v;
  }

  long long integer(std::string_view field, const char* name) const {
    const auto v = to_int(field);
    if (!v) fail(std::string("non-integer ") + name + " '" + std::string(field) + "'");
    return *v;
  }

  const std::string& source() const { return source_; }
  std::size_t line_number() const { return number_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t number_ = 0;
};

void expect_header(Lines& lines, const std::vector<std::string>& expected) {
  std::string line;
  if (!lines.next_content(line)) lines.fail("missing header");
  const auto fields = split(line, ',');
  bool ok = fields.size() == expected.size();
  for (std::size_t i = 0; ok && i < fields.size(); ++i) {
    ok = lower(fields[i]) == expected[i];
  }
  if (!ok) {
    std::string want;
    for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
    lines.fail("expected header '" + want + "', got '" + line + "'");
  }
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

json number_or_null(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Matrix read_matrix_market(std::istream& in, const std::string& source,
                          bool nonnegative) {
  Lines lines(in, source);
  std::string line;
  if (!lines.next(line)) lines.fail("empty Matrix Market file");
  const auto banner = split_ws(line);
  if (banner.size() != 5 || lower(banner[0]) != "%%matrixmarket" ||
      lower(banner[1]) != "matrix") {
    lines.fail("expected '%%MatrixMarket matrix <format> <field> <symmetry>'");
  }
  const std::string format = lower(banner[2]);
  const std::string field = lower(banner[3]);
  const std::string symmetry = lower(banner[4]);
  if (format != "coordinate" && format != "array") {
    lines.fail("unsupported format '" + format + "'");
  }
  if (field != "real" && field != "integer" && field != "double" &&
      !(field == "pattern" && format == "coordinate")) {
    lines.fail("unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric" &&
      symmetry != "skew-symmetric") {
    lines.fail("unsupported symmetry '" + symmetry + "'");
  }

  // Size line after comments.
  do {
    if (!lines.next(line)) lines.fail("missing size line");
  } while (trim(line).empty() || trim(line).front() == '%');
  const auto size = split_ws(line);
  const bool coordinate = format == "coordinate";
  if (size.size() != (coordinate ? 3u : 2u)) lines.fail("malformed size line");
  const long long rows = lines.integer(size[0], "row count");
  const long long cols = lines.integer(size[1], "column count");
  if (rows < 0 || cols < 0) lines.fail("negative dimensions");
  if (!coordinate && symmetry == "skew-symmetric") {
    lines.fail("skew-symmetric array storage is not supported");
  }
  if (symmetry != "general" && rows != cols) {
    lines.fail("symmetric storage requires a square matrix");
  }

  std::vector<Triplet> triplets;
  auto add = [&](long long i, long long j, double v) {
    if (nonnegative && v < 0.0) {
      lines.fail("negative entry " + format_double(v) + " at (" +
                 std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
    }
    triplets.push_back({static_cast<Index>(i), static_cast<Index>(j), v});
    if (i != j && symmetry == "symmetric") {
      triplets.push_back({static_cast<Index>(j), static_cast<Index>(i), v});
    } else if (i != j && symmetry == "skew-symmetric") {
      if (nonnegative && v > 0.0) lines.fail("skew-symmetric matrix has negative entries");
      triplets.push_back({static_cast<Index>(j), static_cast<Index>(i), -v});
    }
  };

  if (coordinate) {
    const long long nnz = lines.integer(size[2], "entry count");
    if (nnz < 0) lines.fail("negative entry count");
    long long seen = 0;
    while (lines.next(line)) {
      const auto t = trim(line);
      if (t.empty() || t.front() == '%') continue;
      const auto f = split_ws(t);
      const std::size_t want = field == "pattern" ? 2u : 3u;
      if (f.size() != want) {
        lines.fail("expected " + std::to_string(want) + " fields, got " +
                   std::to_string(f.size()));
      }
      const long long i = lines.integer(f[0], "row index");
      const long long j = lines.integer(f[1], "column index");
      if (i < 1 || i > rows || j < 1 || j > cols) {
        lines.fail("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                   ") outside " + std::to_string(rows) + "x" +
                   std::to_string(cols));
      }
      if (symmetry != "general" && j > i) {
        lines.fail("symmetric storage must list the lower triangle only");
      }
      const double v = field == "pattern" ? 1.0 : lines.number(f[2], "value");
      if (++seen > nnz) lines.fail("more entries than the declared " + std::to_string(nnz));
      add(i - 1, j - 1, v);
    }
    if (seen != nnz) {
      lines.fail("declared " + std::to_string(nnz) + " entries, found " +
                 std::to_string(seen));
    }
  } else {
    // Column-major; symmetric arrays list the lower triangle only.
    long long i = 0;
    long long j = 0;
    const bool full = symmetry == "general";
    auto advance = [&] {
      ++i;
      if (i == rows) {
        ++j;
        i = full ? 0 : j;
      }
    };
    while (lines.next(line)) {
      const auto t = trim(line);
      if (t.empty() || t.front() == '%') continue;
      if (j >= cols) lines.fail("more values than the declared size");
      const double v = lines.number(t, "value");
      if (v != 0.0) add(i, j, v);
      advance();
    }
    if (j < cols && rows > 0) lines.fail("fewer values than the declared size");
  }
  return Matrix::from_triplets(static_cast<Index>(rows),
                               static_cast<Index>(cols), triplets);
}

Matrix load_matrix_market(const std::filesystem::path& path, bool nonnegative) {
  auto in = open_in(path);
  return read_matrix_market(in, path.string(), nonnegative);
}

void write_matrix_market(std::ostream& out, const Matrix& matrix) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonzeros() << '\n';
  matrix.for_each_nonzero([&out](Index i, Index j, double v) {
    out << (i + 1) << ' ' << (j + 1) << ' ' << format_double(v) << '\n';
  });
}

void save_matrix_market(const std::filesystem::path& path, const Matrix& matrix) {
  auto out = open_out(path);
  write_matrix_market(out, matrix);
  finish(out, path);
}

Graph read_edge_list_csv(std::istream& in, const std::string& source,
                         std::optional<Index> n_vertices) {
  Lines lines(in, source);
  expect_header(lines, {"src", "dst", "weight"});
  std::vector<Edge> edges;
  std::set<std::pair<Index, Index>> seen;
  Index max_id = -1;
  std::string line;
  while (lines.next(line)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 3) {
      lines.fail("expected 3 fields, got " + std::to_string(f.size()));
    }
    const long long src = lines.integer(f[0], "src");
    const long long dst = lines.integer(f[1], "dst");
    const double w = lines.number(f[2], "weight");
    if (src < 0 || dst < 0) lines.fail("negative vertex id");
    if (n_vertices && (src >= *n_vertices || dst >= *n_vertices)) {
      lines.fail("vertex id outside [0, " + std::to_string(*n_vertices) + ")");
    }
    if (w < 0.0) lines.fail("negative weight " + format_double(w));
    if (!seen.emplace(src, dst).second) {
      lines.fail("duplicate edge (" + std::to_string(src) + ", " +
                 std::to_string(dst) + ")");
    }
    max_id = std::max({max_id, static_cast<Index>(src), static_cast<Index>(dst)});
    edges.push_back({static_cast<Index>(src), static_cast<Index>(dst), w});
  }
  const Index n = n_vertices.value_or(max_id + 1);
  if (n <= 0) throw ParseError(source, lines.line_number(), "edge list is empty");
  return Graph::from_edges(n, edges);
}

Graph load_edge_list_csv(const std::filesystem::path& path,
                         std::optional<Index> n_vertices) {
  auto in = open_in(path);
  return read_edge_list_csv(in, path.string(), n_vertices);
}

void write_edge_list_csv(std::ostream& out, const Graph& graph) {
  out << "src,dst,weight\n";
  for (const auto& e : graph.edges()) {
    out << e.src << ',' << e.dst << ',' << format_double(e.weight) << '\n';
  }
}

VertexGeometry read_geometry_csv(std::istream& in, const std::string& source) {
  Lines lines(in, source);
  expect_header(lines, {"id", "lat", "lon", "alt"});
  std::vector<std::optional<GeoPoint>> points;
  std::string line;
  while (lines.next(line)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 4) {
      lines.fail("expected 4 fields, got " + std::to_string(f.size()));
    }
    const long long id = lines.integer(f[0], "id");
    if (id < 0) lines.fail("negative vertex id");
    const GeoPoint p{lines.number(f[1], "lat"), lines.number(f[2], "lon"),
                     lines.number(f[3], "alt")};
    if (p.latitude_deg < -90.0 || p.latitude_deg > 90.0) {
      lines.fail("latitude outside [-90, 90]");
    }
    const auto slot = static_cast<std::size_t>(id);
    if (slot >= points.size()) points.resize(slot + 1);
    if (points[slot]) lines.fail("duplicate vertex id " + std::to_string(id));
    points[slot] = p;
  }
  std::vector<GeoPoint> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i]) {
      throw ParseError(source, 0, "vertex id " + std::to_string(i) + " missing");
    }
    out.push_back(*points[i]);
  }
  if (out.empty()) throw ParseError(source, lines.line_number(), "no vertices");
  return VertexGeometry(std::move(out));
}

VertexGeometry load_geometry_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_geometry_csv(in, path.string());
}

void write_geometry_csv(std::ostream& out, const VertexGeometry& geometry) {
  out << "id,lat,lon,alt\n";
  const auto& pts = geometry.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out << i << ',' << format_double(pts[i].latitude_deg) << ','
        << format_double(pts[i].longitude_deg) << ','
        << format_double(pts[i].altitude_m) << '\n';
  }
}

std::vector<double> read_column_csv(std::istream& in, const std::string& source) {
  Lines lines(in, source);
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (lines.next(line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.find(',') != std::string_view::npos) {
      lines.fail("expected a single column");
    }
    const auto v = to_double(t);
    if (!v) {
      if (first) {
        first = false;
        continue;
      }
      lines.fail("non-numeric value '" + std::string(t) + "'");
    }
    if (!std::isfinite(*v)) lines.fail("non-finite value");
    first = false;
    values.push_back(*v);
  }
  return values;
}

std::vector<double> load_column_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_column_csv(in, path.string());
}

GraphSignal load_signal_csv(const std::filesystem::path& path) {
  const auto values = load_column_csv(path);
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

void write_signal_csv(std::ostream& out, const GraphSignal& x,
                      const std::string& header) {
  if (!header.empty()) out << header << '\n';
  for (Index i = 0; i < x.size(); ++i) out << format_double(x(i)) << '\n';
}

Graph load_graph(const std::filesystem::path& path) {
  if (lower(path.extension().string()) == ".csv") return load_edge_list_csv(path);
  return Graph(load_matrix_market(path, /*nonnegative=*/true));
}

DSOperator load_operator(const std::filesystem::path& path, double tol) {
  return DSOperator::from_matrix(load_matrix_market(path, true), tol);
}

std::string balance_diagnostics_json(const BalanceResult& result) {
  json j;
  j["schema"] = 1;
  j["residual"] = result.op.tolerance_achieved();
  j["iterations"] = result.op.iterations_used();
  j["n"] = result.op.size();
  j["nonzeros"] = result.op.matrix().nonzeros();
  return j.dump(2) + "\n";
}

std::string birkhoff_json(const BirkhoffDecomposition& decomposition) {
  json terms = json::array();
  for (const auto& t : decomposition.terms) {
    terms.push_back({{"a", t.coefficient}, {"perm", t.permutation}});
  }
  json j;
  j["schema"] = 1;
  j["n"] = decomposition.dimension;
  j["terms"] = std::move(terms);
  return j.dump(2) + "\n";
}

BirkhoffDecomposition parse_birkhoff_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("<json>", 0, e.what());
  }
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) {
    throw ParseError("<json>", 0, "expected an object with a 'terms' array");
  }
  BirkhoffDecomposition d;
  try {
    for (const auto& t : j["terms"]) {
      d.terms.push_back({t.at("a").get<double>(),
                         t.at("perm").get<std::vector<Index>>()});
    }
  } catch (const json::exception& e) {
    throw ParseError("<json>", 0, std::string("malformed term: ") + e.what());
  }
  if (j.contains("n")) {
    d.dimension = j["n"].get<Index>();
  } else if (!d.terms.empty()) {
    d.dimension = static_cast<Index>(d.terms.front().permutation.size());
  }
  return d;
}

std::string bounds_report_json(const BoundsReport& r) {
  json j;
  j["schema"] = 1;
  j["vertex"] = r.vertex;
  j["mu"] = r.moments.mean;
  j["sigma"] = r.moments.sigma;
  j["rho"] = r.moments.rho;
  j["N_m"] = r.local.size;
  j["L"] = r.local.lower;
  j["U"] = r.local.upper;
  j["row_energy"] = r.row_energy;
  j["kantorovich"] = r.kantorovich;
  j["var_exact"] = r.variance_exact;
  j["var_bound"] = r.variance_bound;
  j["var_asymptotic"] = number_or_null(r.variance_asymptotic);
  j["power_upper"] = number_or_null(r.power_upper);
  j["power_lower"] = r.power_lower;
  if (r.monte_carlo) {
    const auto& mc = *r.monte_carlo;
    j["mc"] = {{"trials", mc.trials},
               {"mean", mc.mean},
               {"var", mc.variance},
               {"power", mc.power},
               {"stderr_mean", mc.stderr_mean},
               {"stderr_var", mc.stderr_variance},
               {"stderr_power", mc.stderr_power}};
  } else {
    j["mc"] = nullptr;
  }
  return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dsgso::io
