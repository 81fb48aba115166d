#include "dsgso/sensor_demo.hpp"

#include "dsgso/balance.hpp"
#include "dsgso/errors.hpp"
#include "dsgso/io.hpp"
#include "dsgso/random.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace dsgso {
namespace {

// Region sampled by the sensors.
constexpr double kLatMin = 51.0;
constexpr double kLatMax = 52.0;
constexpr double kLonMin = -1.5;
constexpr double kLonMax = 0.0;

constexpr double kLapseRate = 6.5;        // deg C per km of altitude

struct Bump {
  double u, v, width, weight;
};
constexpr std::array<Bump, 3> kBumps{{
    {0.25, 0.30, 0.18, 1.0},
    {0.70, 0.65, 0.22, 0.8},
    {0.45, 0.85, 0.15, -0.7},
}};

double unit_uniform(RandomStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double terrain_m(double u, double v) {
  return 40.0 + 220.0 * u * v + 60.0 * std::sin(3.0 * u) * std::cos(2.0 * v);
}

/// Maps a geometry point back to unit-square coordinates.
std::pair<double, double> unit_coords(const GeoPoint& p) {
  return {(p.longitude_deg - kLonMin) / (kLonMax - kLonMin),
          (p.latitude_deg - kLatMin) / (kLatMax - kLatMin)};
}

void validate(const SensorFieldConfig& c) {
  if (c.n_sensors < 2) throw InvalidParameter("n_sensors must be >= 2");
  if (!std::isfinite(c.noise_sigma) || c.noise_sigma < 0.0) {
    throw InvalidParameter("noise_sigma must be >= 0");
  }
  if (!(c.kernel_scale_km > 0.0)) throw InvalidParameter("kernel scale must be > 0");
  if (!(c.threshold >= 0.0)) throw InvalidParameter("threshold must be >= 0");
  if (!std::isfinite(c.field_amplitude)) throw InvalidParameter("field amplitude must be finite");
  if (c.shifts < 0) throw InvalidParameter("shift count must be >= 0");
}

const char* field_name(FieldKind kind) {
  return kind == FieldKind::kBumps ? "bumps" : "gradient";
}

nlohmann::json snr_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

double snr_db(const GraphSignal& estimate, const GraphSignal& truth) {
  if (estimate.size() != truth.size()) {
    throw InvalidParameter("estimate and truth differ in length");
  }
  const double signal = truth.squaredNorm();
  if (!(signal > 0.0)) throw InvalidParameter("truth signal is all zero");
  const double error = (estimate - truth).squaredNorm();
  if (error == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / error);
}

VertexGeometry sensor_layout(const SensorFieldConfig& config) {
  validate(config);
  const int n = config.n_sensors;
  const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  std::vector<GeoPoint> points;
  points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    RandomStream rng(config.layout_seed, static_cast<std::uint64_t>(i));
    const double u = ((i % side) + 0.5 + 0.7 * (unit_uniform(rng) - 0.5)) / side;
    const double v = ((i / side) + 0.5 + 0.7 * (unit_uniform(rng) - 0.5)) / side;
    points.push_back({kLatMin + v * (kLatMax - kLatMin),
                      kLonMin + u * (kLonMax - kLonMin), terrain_m(u, v)});
  }
  return VertexGeometry(std::move(points));
}

GraphSignal true_field(const SensorFieldConfig& config,
                       const VertexGeometry& geometry) {
  const auto& pts = geometry.points();
  GraphSignal mu(static_cast<Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [u, v] = unit_coords(pts[i]);
    double shape = 0.0;
    if (config.field == FieldKind::kBumps) {
      for (const auto& b : kBumps) {
        const double du = u - b.u;
        const double dv = v - b.v;
        shape += b.weight * std::exp(-(du * du + dv * dv) / (2.0 * b.width * b.width));
      }
    } else {
      shape = 0.9 * u - 0.6 * v;
    }
    mu(static_cast<Index>(i)) = kFieldBaseline + config.field_amplitude * shape -
                                kLapseRate * pts[i].altitude_m / 1000.0;
  }
  return mu;
}

ExperimentReport run_sensor_demo(const SensorFieldConfig& config) {
  validate(config);
  VertexGeometry geometry = sensor_layout(config);
  GraphSignal truth = true_field(config, geometry);

  GraphSignal noisy = truth;
  if (config.noise_sigma > 0.0) {
    RandomStream rng(config.seed, 0);
    std::normal_distribution<double> normal(0.0, config.noise_sigma);
    for (Index i = 0; i < noisy.size(); ++i) noisy(i) += normal(rng);
  }

  KernelOptions kernel;
  kernel.scale_km = config.kernel_scale_km;
  kernel.threshold = config.threshold;
  kernel.self_loops = SelfLoops::kInclude;
  const Graph graph = build_weight_matrix(geometry, kernel, [](std::string_view) {});
  const BalanceResult balanced = sinkhorn_knopp(graph);
  GraphSignal denoised = diffuse(balanced.op, noisy, config.shifts);

  const double n = static_cast<double>(truth.size());
  const double sigma2 = config.noise_sigma * config.noise_sigma;
  const double input = snr_db(noisy, truth);
  const double output = snr_db(denoised, truth);
  ExperimentReport report{
      config,
      std::move(geometry),
      std::move(truth),
      std::move(noisy),
      std::move(denoised),
      input,
      output,
      std::isinf(input) ? 0.0 : output - input,
      sigma2 > 0.0 ? 0.0 : std::numeric_limits<double>::infinity(),
      balanced.op.iterations_used(),
      balanced.op.tolerance_achieved(),
      graph.edge_count(),
  };
  if (sigma2 > 0.0) {
    report.expected_input_snr_db =
        10.0 * std::log10(report.truth.squaredNorm() / (n * sigma2));
  }
  return report;
}

std::string experiment_report_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["schema"] = 1;
  j["config"] = {{"n_sensors", r.config.n_sensors},
                 {"noise_sigma", r.config.noise_sigma},
                 {"kernel_scale_km", r.config.kernel_scale_km},
                 {"threshold", r.config.threshold},
                 {"shifts", r.config.shifts},
                 {"seed", r.config.seed},
                 {"layout_seed", r.config.layout_seed},
                 {"field", field_name(r.config.field)},
                 {"field_amplitude", r.config.field_amplitude}};
  j["input_snr_db"] = snr_value(r.input_snr_db);
  j["output_snr_db"] = snr_value(r.output_snr_db);
  j["gain_db"] = r.gain_db;
  j["expected_input_snr_db"] = snr_value(r.expected_input_snr_db);
  j["operator"] = {{"edges", r.edges},
                   {"balance_iterations", r.balance_iterations},
                   {"balance_residual", r.balance_residual}};
  auto to_array = [](const GraphSignal& x) {
    return std::vector<double>(x.data(), x.data() + x.size());
  };
  j["truth"] = to_array(r.truth);
  j["noisy"] = to_array(r.noisy);
  j["denoised"] = to_array(r.denoised);
  return j.dump(2) + "\n";
}

std::string experiment_report_csv(const ExperimentReport& r) {
  std::ostringstream out;
  out << "id,lat,lon,alt,true,noisy,denoised\n";
  const auto& pts = r.geometry.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto k = static_cast<Index>(i);
    out << i << ',' << io::format_double(pts[i].latitude_deg) << ','
        << io::format_double(pts[i].longitude_deg) << ','
        << io::format_double(pts[i].altitude_m) << ','
        << io::format_double(r.truth(k)) << ',' << io::format_double(r.noisy(k))
        << ',' << io::format_double(r.denoised(k)) << '\n';
  }
  return out.str();
}

}  // namespace dsgso
