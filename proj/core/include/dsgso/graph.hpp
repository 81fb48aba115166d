#pragma once

#include "dsgso/matrix.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace dsgso {

/// Directed edge src -> dst. In weight-matrix terms this is W(dst, src):
/// row m of W lists the incoming edges of vertex m.
struct Edge {
  Index src = 0;
  Index dst = 0;
  double weight = 0.0;
};

/// Weighted directed graph backed by its weight matrix W.
///
/// W(m, n) > 0 exactly when n -> m is an edge; absent edges are exact zeros.
/// Immutable once built.
class Graph {
 public:
  /// Takes ownership of a square, nonnegative weight matrix. Throws
  /// InvalidParameter on negative or non-finite entries.
  explicit Graph(Matrix weights);

  /// Edges with zero weight are dropped. Negative or non-finite weights,
  /// repeated (src, dst) pairs and out-of-range ids throw.
  static Graph from_edges(Index n_vertices, std::span<const Edge> edges,
                          Storage storage = Storage::kAuto);

  Index n_vertices() const { return weights_.rows(); }
  Index edge_count() const { return weights_.nonzeros(); }
  const Matrix& weights() const { return weights_; }

  bool has_edge(Index src, Index dst) const { return weight(src, dst) > 0.0; }
  double weight(Index src, Index dst) const { return weights_(dst, src); }

  /// All edges ordered by (dst, src).
  std::vector<Edge> edges() const;

 private:
  Matrix weights_;
};

struct Neighborhood {
  Index center = 0;
  std::vector<Index> members;  // ascending

  Index size() const { return static_cast<Index>(members.size()); }
};

/// Vertices with an edge into `m`. Throws InvalidParameter for a bad id.
Neighborhood incoming_neighborhood(const Graph& graph, Index m);

struct GeoPoint {
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double altitude_m = 0.0;
};

/// Vertex positions, projected once into a local Cartesian frame in
/// kilometres: equirectangular about the mean latitude, altitude appended.
class VertexGeometry {
 public:
  explicit VertexGeometry(std::vector<GeoPoint> points);

  /// Positions already in a Cartesian frame (km); points() is left empty.
  static VertexGeometry from_cartesian_km(
      Eigen::Matrix<double, Eigen::Dynamic, 3> coordinates);

  Index size() const { return projected_.rows(); }
  const std::vector<GeoPoint>& points() const { return points_; }
  const Eigen::Matrix<double, Eigen::Dynamic, 3>& projected_km() const {
    return projected_;
  }

  double distance_km(Index a, Index b) const;

 private:
  VertexGeometry() = default;

  std::vector<GeoPoint> points_;
  Eigen::Matrix<double, Eigen::Dynamic, 3> projected_;
};

enum class SelfLoops { kInclude, kExclude };

struct KernelOptions {
  double scale_km = 1.0;    // W = exp(-(r / scale)^2)
  double threshold = 0.0;   // off-diagonal weights below this become 0
  SelfLoops self_loops = SelfLoops::kInclude;  // include => W(m, m) = 1
  Storage storage = Storage::kAuto;
};

using WarningSink = std::function<void(std::string_view)>;

/// Gaussian distance kernel graph. Symmetric by construction. Coincident
/// distinct vertices keep weight 1 and raise a warning through `warn`
/// (stderr when no sink is given).
Graph build_weight_matrix(const VertexGeometry& geometry,
                          const KernelOptions& options,
                          const WarningSink& warn = {});

struct WeightDiagnostics {
  Index n = 0;
  Index nonzeros = 0;
  Index negative_entries = 0;
  Index non_finite_entries = 0;
  std::vector<Index> zero_rows;
  std::vector<Index> zero_cols;
  bool square = true;
  bool symmetric = true;
  double min_positive = 0.0;
  double max_entry = 0.0;
  double density = 0.0;
  std::vector<std::string> issues;

  bool balanceable() const {
    return square && negative_entries == 0 && non_finite_entries == 0 &&
           zero_rows.empty() && zero_cols.empty();
  }
};

/// Sanity report on a raw weight matrix; never throws.
WeightDiagnostics validate_weights(const Matrix& weights);
WeightDiagnostics validate_weights(const Graph& graph);

}  // namespace dsgso
