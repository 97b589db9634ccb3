// curveflow -- Lagrangian evolution of closed plane curves under the
// fourth-order law beta = -d2k/ds2 + b(k) (surface diffusion, Willmore flow),
// with asymptotically uniform tangential redistribution of the grid points.
//
// usage:
//   curveflow run --config cfg.json [--out DIR] [--svg]
//   curveflow presets NAME
//   curveflow convergence --preset willmore-circle --levels K
//
// exit codes: 0 ok, 1 configuration/usage error, 2 solver failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "curveflow/config.hpp"
#include "curveflow/csv.hpp"
#include "curveflow/curve.hpp"
#include "curveflow/stepper.hpp"
#include "curveflow/svg.hpp"

namespace {

using namespace curveflow;

void print_usage(std::ostream& out) {
  out << "usage:\n"
      << "  curveflow run --config cfg.json [--out DIR] [--svg]\n"
      << "  curveflow presets NAME\n"
      << "  curveflow convergence --preset willmore-circle --levels K\n";
}

DiscreteCurve initial_curve(const RunConfig& cfg) {
  if (cfg.shape) return init_from_points(generate(*cfg.shape));
  return init_from_points(read_curve_csv(*cfg.input_file));
}

int cmd_run(const std::vector<std::string>& args) {
  std::string config_path;
  std::string out_override;
  bool svg = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i] == "--out" && i + 1 < args.size()) {
      out_override = args[++i];
    } else if (args[i] == "--svg") {
      svg = true;
    } else {
      throw Error("run: unexpected argument '" + args[i] + "'");
    }
  }
  if (config_path.empty()) throw Error("run: --config FILE is required");

  RunConfig cfg = load_config(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  const std::filesystem::path out_dir = cfg.out_dir;

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());
  std::filesystem::remove(out_dir / "metrics.csv");  // appended to below; start clean
  {
    std::ofstream cfg_out(out_dir / "config.json");
    cfg_out << emit_config(cfg).dump(2) << '\n';
  }

  DiscreteCurve curve = initial_curve(cfg);
  std::vector<Snapshot> kept;
  const SnapshotSink sink = [&](const Snapshot& snap) {
    write_snapshot(snap, out_dir);
    if (svg) kept.push_back(snap);
    std::printf("step %8ld  t=%-10.6g  L=%-10.6g  uniformity=%-8.4g  k in [%.4g, %.4g]\n",
                snap.step, snap.curve.t, snap.diag.total_length, snap.uniformity, snap.k_min,
                snap.k_max);
  };

  const DiscreteCurve final_curve =
      evolve(std::move(curve), cfg.model, cfg.step_params(), cfg.t_end, cfg.snapshot_every, sink);

  if (svg) {
    SvgOptions options;
    options.vertex_markers = true;
    render_svg(kept, out_dir / "overlay.svg", options);
  }

  const CurveMeasures m = area_and_length(final_curve);
  std::printf("done: t=%g  area=%.8g  length=%.8g  isoperimetric=%.6f  uniformity=%.4f\n",
              final_curve.t, m.area, m.polygon_length, isoperimetric_ratio(final_curve),
              uniformity_ratio(final_curve));
  std::printf("outputs in %s\n", out_dir.string().c_str());
  return 0;
}

int cmd_presets(const std::vector<std::string>& args) {
  if (args.size() != 1) {
    std::cerr << "presets: expected exactly one name; available:";
    for (const std::string& name : preset_names()) std::cerr << ' ' << name;
    std::cerr << '\n';
    return 1;
  }
  std::cout << emit_config(preset(args[0])).dump(2) << '\n';
  return 0;
}

// Refinement study for the expanding Willmore circle, whose radius obeys
// dR/dt = 1/(2 R^3), i.e. R(t) = (R0^4 + 2 t)^(1/4).
int cmd_convergence(const std::vector<std::string>& args) {
  std::string preset_name;
  int levels = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--preset" && i + 1 < args.size()) {
      preset_name = args[++i];
    } else if (args[i] == "--levels" && i + 1 < args.size()) {
      levels = std::stoi(args[++i]);
    } else {
      throw Error("convergence: unexpected argument '" + args[i] + "'");
    }
  }
  if (preset_name != "willmore-circle") {
    throw Error("convergence: --preset willmore-circle is the only supported study");
  }
  if (levels < 1 || levels > 8) throw Error("convergence: --levels must be in 1..8");

  const double t_end = 0.005;
  const double exact = std::pow(1.0 + 2.0 * t_end, 0.25);
  std::printf("willmore-circle refinement study, t_end=%g, exact mean radius %.10f\n", t_end,
              exact);
  std::printf("%-6s %-6s %-10s %-14s %-12s %-8s\n", "level", "n", "tau", "mean_radius", "error",
              "ratio");

  double prev_error = 0.0;
  for (int level = 0; level < levels; ++level) {
    const int n = 200 << level;
    StepParams params;
    params.tau = 1e-5 / static_cast<double>(1 << level);
    params.omega = 1.0;
    params.redistribution = Redistribution::AsymptoticallyUniform;
    // exact solves keep the measured errors purely discretization error
    params.solver.kind = SolverParams::Kind::Dense;

    DiscreteCurve curve = init_from_points(generate(ShapeSpec::circle(1.0, n)));
    curve = evolve(std::move(curve), FlowModel::willmore(), params, t_end, 0);
    const double mean_radius = mean_vertex_radius(curve);
    const double error = std::abs(mean_radius - exact);
    if (level == 0) {
      std::printf("%-6d %-6d %-10.3g %-14.10f %-12.4e %-8s\n", level, n, params.tau, mean_radius,
                  error, "-");
    } else {
      std::printf("%-6d %-6d %-10.3g %-14.10f %-12.4e %-8.3f\n", level, n, params.tau, mean_radius,
                  error, prev_error / error);
    }
    prev_error = error;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    print_usage(std::cerr);
    return 1;
  }
  const std::string command = args[0];
  args.erase(args.begin());

  try {
    if (command == "run") return cmd_run(args);
    if (command == "presets") return cmd_presets(args);
    if (command == "convergence") return cmd_convergence(args);
    if (command == "--help" || command == "-h" || command == "help") {
      print_usage(std::cout);
      return 0;
    }
    std::cerr << "unknown command '" << command << "'\n";
    print_usage(std::cerr);
    return 1;
  } catch (const StepFailed& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
