#include "dsgso/graph.hpp"

#include "dsgso/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <set>

namespace dsgso {
namespace {

constexpr double kEarthRadiusKm = 6371.0088;

std::string vertex_pair(Index a, Index b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

}  // namespace

Graph::Graph(Matrix weights) : weights_(std::move(weights)) {
  if (!weights_.is_square()) {
    throw InvalidParameter("weight matrix must be square, got " +
                           std::to_string(weights_.rows()) + "x" +
                           std::to_string(weights_.cols()));
  }
  weights_.for_each_nonzero([](Index i, Index j, double v) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidParameter("weight at " + vertex_pair(i, j) +
                             " is negative or non-finite");
    }
  });
}

Graph Graph::from_edges(Index n_vertices, std::span<const Edge> edges,
                        Storage storage) {
  if (n_vertices <= 0) throw InvalidParameter("graph needs at least 1 vertex");
  std::set<std::pair<Index, Index>> seen;
  std::vector<Triplet> triplets;
  triplets.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.src < 0 || e.src >= n_vertices || e.dst < 0 || e.dst >= n_vertices) {
      throw InvalidParameter("edge " + vertex_pair(e.src, e.dst) +
                             " references a vertex outside [0, " +
                             std::to_string(n_vertices) + ")");
    }
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw InvalidParameter("edge " + vertex_pair(e.src, e.dst) +
                             " has negative or non-finite weight");
    }
    if (!seen.emplace(e.src, e.dst).second) {
      throw InvalidParameter("duplicate edge " + vertex_pair(e.src, e.dst));
    }
    if (e.weight > 0.0) triplets.push_back({e.dst, e.src, e.weight});
  }
  return Graph(Matrix::from_triplets(n_vertices, n_vertices, triplets, storage));
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  weights_.for_each_nonzero(
      [&out](Index m, Index n, double w) { out.push_back({n, m, w}); });
  return out;
}

Neighborhood incoming_neighborhood(const Graph& graph, Index m) {
  if (m < 0 || m >= graph.n_vertices()) {
    throw InvalidParameter("vertex id " + std::to_string(m) +
                           " out of range [0, " +
                           std::to_string(graph.n_vertices()) + ")");
  }
  Neighborhood hood{m, {}};
  for (const auto& [n, w] : graph.weights().row(m)) {
    if (w > 0.0) hood.members.push_back(n);
  }
  return hood;
}

VertexGeometry::VertexGeometry(std::vector<GeoPoint> points)
    : points_(std::move(points)), projected_(points_.size(), 3) {
  if (points_.empty()) throw InvalidParameter("geometry has no vertices");
  double mean_lat = 0.0;
  for (const auto& p : points_) {
    if (!std::isfinite(p.latitude_deg) || !std::isfinite(p.longitude_deg) ||
        !std::isfinite(p.altitude_m)) {
      throw InvalidParameter("geometry contains a non-finite coordinate");
    }
    mean_lat += p.latitude_deg;
  }
  mean_lat /= static_cast<double>(points_.size());

  constexpr double kDeg = std::numbers::pi / 180.0;
  const double cos_lat = std::cos(mean_lat * kDeg);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    const auto row = static_cast<Index>(i);
    projected_(row, 0) = kEarthRadiusKm * p.longitude_deg * kDeg * cos_lat;
    projected_(row, 1) = kEarthRadiusKm * p.latitude_deg * kDeg;
    projected_(row, 2) = p.altitude_m / 1000.0;
  }
}

VertexGeometry VertexGeometry::from_cartesian_km(
    Eigen::Matrix<double, Eigen::Dynamic, 3> coordinates) {
  if (coordinates.rows() == 0) throw InvalidParameter("geometry has no vertices");
  if (!coordinates.allFinite()) {
    throw InvalidParameter("geometry contains a non-finite coordinate");
  }
  VertexGeometry g;
  g.projected_ = std::move(coordinates);
  return g;
}

double VertexGeometry::distance_km(Index a, Index b) const {
  if (a < 0 || a >= size() || b < 0 || b >= size()) {
    throw InvalidParameter("vertex id out of range");
  }
  return (projected_.row(a) - projected_.row(b)).norm();
}

Graph build_weight_matrix(const VertexGeometry& geometry,
                          const KernelOptions& options,
                          const WarningSink& warn) {
  if (geometry.size() < 2) {
    throw InvalidParameter("weight kernel needs at least 2 vertices");
  }
  if (!(options.scale_km > 0.0) || !std::isfinite(options.scale_km)) {
    throw InvalidParameter("kernel scale must be positive");
  }
  if (!(options.threshold >= 0.0)) {
    throw InvalidParameter("kernel threshold must be nonnegative");
  }
  const WarningSink sink = warn ? warn : [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };

  const Index n = geometry.size();
  std::vector<Triplet> triplets;
  for (Index m = 0; m < n; ++m) {
    if (options.self_loops == SelfLoops::kInclude) triplets.push_back({m, m, 1.0});
    for (Index k = m + 1; k < n; ++k) {
      const double r = geometry.distance_km(m, k);
      if (r == 0.0) {
        sink("vertices " + std::to_string(m) + " and " + std::to_string(k) +
             " share coordinates; edge weight fixed at 1");
      }
      const double ratio = r / options.scale_km;
      const double w = std::exp(-ratio * ratio);
      if (w <= 0.0 || w < options.threshold) continue;
      triplets.push_back({m, k, w});
      triplets.push_back({k, m, w});
    }
  }
  return Graph(Matrix::from_triplets(n, n, triplets, options.storage));
}

WeightDiagnostics validate_weights(const Matrix& weights) {
  WeightDiagnostics d;
  d.n = weights.rows();
  d.square = weights.is_square();
  if (!d.square) {
    d.issues.push_back("not square: " + std::to_string(weights.rows()) + "x" +
                       std::to_string(weights.cols()));
  }

  std::vector<Index> row_support(static_cast<std::size_t>(weights.rows()), 0);
  std::vector<Index> col_support(static_cast<std::size_t>(weights.cols()), 0);
  double min_positive = std::numeric_limits<double>::infinity();
  weights.for_each_nonzero([&](Index i, Index j, double v) {
    ++d.nonzeros;
    if (!std::isfinite(v)) {
      ++d.non_finite_entries;
      return;
    }
    if (v < 0.0) {
      ++d.negative_entries;
      return;
    }
    ++row_support[static_cast<std::size_t>(i)];
    ++col_support[static_cast<std::size_t>(j)];
    min_positive = std::min(min_positive, v);
    d.max_entry = std::max(d.max_entry, v);
  });
  d.min_positive = std::isfinite(min_positive) ? min_positive : 0.0;

  for (std::size_t i = 0; i < row_support.size(); ++i) {
    if (row_support[i] == 0) d.zero_rows.push_back(static_cast<Index>(i));
  }
  for (std::size_t j = 0; j < col_support.size(); ++j) {
    if (col_support[j] == 0) d.zero_cols.push_back(static_cast<Index>(j));
  }

  const double cells =
      static_cast<double>(weights.rows()) * static_cast<double>(weights.cols());
  d.density = cells > 0.0 ? static_cast<double>(d.nonzeros) / cells : 0.0;

  if (d.square) {
    d.symmetric = max_abs_difference(weights, weights.transposed()) == 0.0;
  } else {
    d.symmetric = false;
  }

  if (d.negative_entries > 0) {
    d.issues.push_back(std::to_string(d.negative_entries) + " negative entries");
  }
  if (d.non_finite_entries > 0) {
    d.issues.push_back(std::to_string(d.non_finite_entries) +
                       " non-finite entries");
  }
  for (Index i : d.zero_rows) {
    d.issues.push_back("unbalanceable: empty row " + std::to_string(i));
  }
  for (Index j : d.zero_cols) {
    d.issues.push_back("unbalanceable: empty column " + std::to_string(j));
  }
  if (!d.symmetric) d.issues.push_back("asymmetric");
  return d;
}

WeightDiagnostics validate_weights(const Graph& graph) {
  return validate_weights(graph.weights());
}

}  // namespace dsgso
