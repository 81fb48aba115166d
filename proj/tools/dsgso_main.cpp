// dsgso: command-line front end for doubly stochastic graph shift operators.

#include "dsgso/balance.hpp"
#include "dsgso/birkhoff.hpp"
#include "dsgso/errors.hpp"
#include "dsgso/io.hpp"
#include "dsgso/sensor_demo.hpp"
#include "dsgso/shift_filter.hpp"
#include "dsgso/stat_bounds.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace dsgso;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct GlobalOptions {
  std::uint64_t seed = 42;
  std::string output;
  std::string format;
};

/// Writes to --output when given, stdout otherwise.
void emit(const GlobalOptions& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
  } else {
    io::write_text_file(g.output, text);
  }
}

/// Sidecar JSON goes next to --output (<output>.json) or to stderr.
void emit_sidecar(const GlobalOptions& g, const std::string& json) {
  if (g.output.empty()) {
    std::cerr << json;
  } else {
    io::write_text_file(g.output + ".json", json);
  }
}

std::string format_or(const GlobalOptions& g, const std::string& fallback) {
  return g.format.empty() ? fallback : g.format;
}

nlohmann::json norms_json(const GraphSignal& x) {
  return {{"l1", vector_norm(x, NormType::kL1)},
          {"l2", vector_norm(x, NormType::kL2)},
          {"linf", vector_norm(x, NormType::kInf)},
          {"mean", x.size() > 0 ? x.mean() : 0.0}};
}

std::string signal_record(const GraphSignal& before, const GraphSignal& after,
                          const std::string& op, nlohmann::json extra) {
  nlohmann::json j;
  j["schema"] = 1;
  j["operation"] = op;
  j["before"] = norms_json(before);
  j["after"] = norms_json(after);
  for (auto& [k, v] : extra.items()) j[k] = v;
  return j.dump(2) + "\n";
}

std::string signal_output(const GlobalOptions& g, const GraphSignal& y) {
  const std::string fmt = format_or(g, "csv");
  if (fmt == "json") {
    nlohmann::json j = std::vector<double>(y.data(), y.data() + y.size());
    return j.dump() + "\n";
  }
  if (fmt != "csv") throw InvalidParameter("signals support --format csv or json");
  std::ostringstream os;
  io::write_signal_csv(os, y);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Doubly stochastic graph shift operators: balancing, shifts, "
               "filters, Birkhoff decomposition and boundedness checks"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--output,-o", g.output, "Output path (default: stdout)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "mtx", "json"}));

  // balance
  auto* balance = app.add_subcommand("balance", "Sinkhorn-Knopp balancing of a weight matrix");
  std::string balance_input;
  BalanceOptions balance_opts;
  balance->add_option("--input,-i", balance_input, "Weight matrix (.mtx or src,dst,weight .csv)")
      ->required();
  balance->add_option("--tol", balance_opts.tol, "Row/column residual tolerance")
      ->capture_default_str();
  balance->add_option("--max-iter", balance_opts.max_iter, "Sweep limit")
      ->capture_default_str();

  // shift
  auto* shift = app.add_subcommand("shift", "Apply k graph shifts to a signal");
  std::string shift_op, shift_signal;
  int shift_k = 1;
  shift->add_option("--op", shift_op, "Doubly stochastic operator (.mtx)")->required();
  shift->add_option("--signal", shift_signal, "Single-column CSV signal")->required();
  shift->add_option("--k", shift_k, "Number of shifts")->capture_default_str();

  // filter
  auto* filter = app.add_subcommand("filter", "Apply a polynomial graph filter");
  std::string filter_op, filter_coeffs, filter_signal;
  filter->add_option("--op", filter_op, "Doubly stochastic operator (.mtx)")->required();
  filter->add_option("--coeffs", filter_coeffs, "Single-column CSV h_0..h_K")->required();
  filter->add_option("--signal", filter_signal, "Single-column CSV signal")->required();

  // birkhoff
  auto* birkhoff = app.add_subcommand("birkhoff", "Birkhoff-von Neumann decomposition");
  std::string birkhoff_op;
  BirkhoffOptions birkhoff_opts;
  birkhoff->add_option("--op", birkhoff_op, "Doubly stochastic operator (.mtx)")->required();
  birkhoff->add_option("--zero-tol", birkhoff_opts.zero_tol, "Structural zero level")
      ->capture_default_str();

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Closed-form and Monte Carlo shift bounds");
  std::string bounds_op;
  Index bounds_vertex = 0;
  SignalMoments moments;
  std::int64_t trials = 100000;
  unsigned threads = 1;
  bounds->add_option("--op", bounds_op, "Doubly stochastic operator (.mtx)")->required();
  bounds->add_option("--vertex", bounds_vertex, "Vertex m (0-based)")->required();
  bounds->add_option("--sigma", moments.sigma, "Signal standard deviation")->required();
  bounds->add_option("--rho", moments.rho, "Equicorrelation in [0, 1]")->required();
  bounds->add_option("--mu", moments.mean, "Signal mean")->capture_default_str();
  bounds->add_option("--trials", trials, "Monte Carlo trials (0 disables)")
      ->capture_default_str();
  bounds->add_option("--threads", threads, "Monte Carlo worker threads")
      ->capture_default_str();

  // demo-sensors
  auto* demo = app.add_subcommand("demo-sensors", "Synthetic sensor-field denoising demo");
  SensorFieldConfig demo_cfg;
  std::string field = "bumps";
  demo->add_option("--n-sensors", demo_cfg.n_sensors)->capture_default_str();
  demo->add_option("--noise-sigma", demo_cfg.noise_sigma)->capture_default_str();
  demo->add_option("--scale", demo_cfg.kernel_scale_km, "Kernel distance scale (km)")
      ->capture_default_str();
  demo->add_option("--threshold", demo_cfg.threshold)->capture_default_str();
  demo->add_option("--k", demo_cfg.shifts, "Number of shifts")->capture_default_str();
  demo->add_option("--amplitude", demo_cfg.field_amplitude, "Field amplitude (deg C)")
      ->capture_default_str();
  demo->add_option("--layout-seed", demo_cfg.layout_seed)->capture_default_str();
  demo->add_option("--field", field)->check(CLI::IsMember({"bumps", "gradient"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*balance) {
      const Graph graph = io::load_graph(balance_input);
      const BalanceResult result = sinkhorn_knopp(graph, balance_opts);
      const std::string fmt = format_or(g, "mtx");
      std::ostringstream os;
      if (fmt == "mtx") {
        io::write_matrix_market(os, result.op.matrix());
      } else if (fmt == "csv") {
        io::write_edge_list_csv(os, Graph(result.op.matrix()));
      } else {
        throw InvalidParameter("balance supports --format mtx or csv");
      }
      emit(g, os.str());
      emit_sidecar(g, io::balance_diagnostics_json(result));
    } else if (*shift) {
      const DSOperator op = io::load_operator(shift_op);
      const GraphSignal x = io::load_signal_csv(shift_signal);
      const GraphSignal y = diffuse(op, x, shift_k);
      emit(g, signal_output(g, y));
      emit_sidecar(g, signal_record(x, y, "shift", {{"k", shift_k}}));
    } else if (*filter) {
      const DSOperator op = io::load_operator(filter_op);
      const FilterSpec spec(io::load_column_csv(filter_coeffs));
      const GraphSignal x = io::load_signal_csv(filter_signal);
      const GraphSignal y = apply_filter(op, spec, x);
      emit(g, signal_output(g, y));
      emit_sidecar(g, signal_record(x, y, "filter",
                                    {{"order", spec.order()},
                                     {"gain_bound", spec.absolute_gain()}}));
    } else if (*birkhoff) {
      const DSOperator op = io::load_operator(birkhoff_op);
      const auto d = birkhoff_decompose(op, birkhoff_opts);
      emit(g, io::birkhoff_json(d));
    } else if (*bounds) {
      const DSOperator op = io::load_operator(bounds_op);
      std::optional<MonteCarloOptions> mc;
      if (trials > 0) mc = MonteCarloOptions{trials, g.seed, threads, {}};
      emit(g, io::bounds_report_json(
                  compute_bounds_report(op, bounds_vertex, moments, mc)));
    } else if (*demo) {
      demo_cfg.seed = g.seed;
      demo_cfg.field = field == "bumps" ? FieldKind::kBumps : FieldKind::kGradient;
      const ExperimentReport report = run_sensor_demo(demo_cfg);
      const std::string fmt = format_or(g, "json");
      if (fmt == "json") {
        emit(g, experiment_report_json(report));
      } else if (fmt == "csv") {
        emit(g, experiment_report_csv(report));
      } else {
        throw InvalidParameter("demo-sensors supports --format json or csv");
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::kInvalidParameter:
        return kExitInvalid;
      case ErrorKind::kNumericalFailure:
        return kExitNumerical;
      case ErrorKind::kIo:
        return kExitIo;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}
