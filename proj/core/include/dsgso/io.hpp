#pragma once

#include "dsgso/balance.hpp"
#include "dsgso/birkhoff.hpp"
#include "dsgso/graph.hpp"
#include "dsgso/matrix.hpp"
#include "dsgso/shift_filter.hpp"
#include "dsgso/stat_bounds.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dsgso::io {

// Readers throw ParseError (with the 1-based line number) on malformed
// content and IoError when a file cannot be opened or written.

/// "%.17g"; enough digits for an exact round trip of any double.
std::string format_double(double value);

/// Coordinate (real/integer/pattern; general/symmetric/skew-symmetric) and
/// array (real/integer; general/symmetric) formats. Symmetric files are
/// expanded to full storage. With `nonnegative`, negative entries are
/// rejected at the line that holds them.
Matrix read_matrix_market(std::istream& in, const std::string& source = "<stream>",
                          bool nonnegative = false);
Matrix load_matrix_market(const std::filesystem::path& path,
                          bool nonnegative = false);
/// Always writes "coordinate real general", 1-based, row-major order.
void write_matrix_market(std::ostream& out, const Matrix& matrix);
void save_matrix_market(const std::filesystem::path& path, const Matrix& matrix);

/// Header `src,dst,weight`, 0-based ids. Without `n_vertices` the graph size
/// is one past the largest id seen.
Graph read_edge_list_csv(std::istream& in, const std::string& source = "<stream>",
                         std::optional<Index> n_vertices = std::nullopt);
Graph load_edge_list_csv(const std::filesystem::path& path,
                         std::optional<Index> n_vertices = std::nullopt);
void write_edge_list_csv(std::ostream& out, const Graph& graph);

/// Header `id,lat,lon,alt`; ids must cover 0..N-1 exactly once.
VertexGeometry read_geometry_csv(std::istream& in,
                                 const std::string& source = "<stream>");
VertexGeometry load_geometry_csv(const std::filesystem::path& path);
void write_geometry_csv(std::ostream& out, const VertexGeometry& geometry);

/// One value per line; an optional non-numeric header line is skipped.
std::vector<double> read_column_csv(std::istream& in,
                                    const std::string& source = "<stream>");
std::vector<double> load_column_csv(const std::filesystem::path& path);
GraphSignal load_signal_csv(const std::filesystem::path& path);
void write_signal_csv(std::ostream& out, const GraphSignal& x,
                      const std::string& header = "value");

/// Weight matrix from either format, chosen by extension (.csv edge list,
/// anything else Matrix Market).
Graph load_graph(const std::filesystem::path& path);
/// Doubly stochastic operator from Matrix Market, checked to `tol`.
DSOperator load_operator(const std::filesystem::path& path, double tol = 1e-8);

// JSON documents. All carry "schema": 1.
std::string balance_diagnostics_json(const BalanceResult& result);
std::string birkhoff_json(const BirkhoffDecomposition& decomposition);
BirkhoffDecomposition parse_birkhoff_json(const std::string& text);
std::string bounds_report_json(const BoundsReport& report);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace dsgso::io
