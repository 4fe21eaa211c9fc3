// vortexff command-line front end.
//
//   vortexff run <config-file> [--output PATH] [--format csv|json]
//                [--threads N] [--grid-nodes N] [--grid-levels N]
//   vortexff selftest
//   vortexff print-config-template <mode>

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vortexff/config.hpp"
#include "vortexff/formfactor.hpp"
#include "vortexff/observables.hpp"
#include "vortexff/runner.hpp"

namespace {

int selftest() {
  using namespace vff;
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    if (!ok) ++failures;
  };

  check("Laguerre L_2^1(2) = -1", std::abs(assoc_laguerre({2, 1}, 2.0) + 1.0) < 1e-14);
  check("R_10(0) = 2", std::abs(hydrogenic_radial(1, 0, 0.0) - 2.0) < 1e-14);
  check("Y_00 = 1/sqrt(4 pi)",
        std::abs(spherical_harmonic(0, 0, 0.3, 1.2) - 1.0 / std::sqrt(4.0 * kPi)) <
            1e-14);

  BeamParams beam{100.0, 1e4, 0, 1};
  check("w(z_R) = w0 sqrt(2)",
        std::abs(beam_width(beam, beam.rayleigh_range) -
                 beam.waist() * std::sqrt(2.0)) < 1e-9);
  const std::complex<double> norm = integrate_polar_2d(
      [&](double rho, double phi) { return std::norm(lg_mode(beam, rho, 0.0, phi)); },
      8.0 * beam.waist(), 64, 16);
  check("LG transverse norm = 1", std::abs(norm.real() - 1.0) < 1e-8);

  const AtomicState s1{1, 0, 0, {}};
  GridSpec grid = default_grid(s1, s1, 64, 1);
  const Vec3 q{0.0, 0.0, 1.0};
  const FormFactorResult m = plane_wave_ff(s1, s1, q, grid);
  check("hydrogen 1s form factor at q=1",
        std::abs(m.value.real() - 0.64) < 1e-4 && std::abs(m.value.imag()) < 1e-10);

  const QuadResult g = integrate_3d(
      [](const Vec3& r) { return std::complex<double>(std::exp(-r.dot(r)), 0.0); },
      GridSpec{{}, {6.0, 6.0, 6.0}, 48, 1});
  check("Gaussian box integral = pi^(3/2)",
        std::abs(g.value.real() - std::pow(kPi, 1.5)) < 1e-10);

  std::cout << (failures == 0 ? "selftest: all checks passed"
                              : "selftest: FAILURES present")
            << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Atomic form factors for twisted (vortex) photon beams"};
  app.require_subcommand(1);

  // run
  std::string config_path, output_override, format_override;
  int threads = 0, grid_nodes = 0, grid_levels = 0;
  CLI::App* run_cmd = app.add_subcommand("run", "Execute a run configuration");
  run_cmd->add_option("config", config_path, "Configuration file")->required();
  run_cmd->add_option("--output", output_override, "Override output path");
  run_cmd->add_option("--format", format_override, "Override output format (csv|json)");
  run_cmd->add_option("--threads", threads,
                      "Worker threads (default: VORTEXFF_THREADS or 1)");
  run_cmd->add_option("--grid-nodes", grid_nodes, "Override grid nodes per axis");
  run_cmd->add_option("--grid-levels", grid_levels, "Override grid refinement levels");

  CLI::App* selftest_cmd = app.add_subcommand("selftest", "Run the built-in oracle suite");

  std::string template_mode;
  CLI::App* tmpl_cmd =
      app.add_subcommand("print-config-template", "Print a starter config for a mode");
  tmpl_cmd->add_option("mode", template_mode,
                       "plane|vortex|tv_scan|impact_profile|xsec")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (selftest_cmd->parsed()) return selftest();

  if (tmpl_cmd->parsed()) {
    vff::RunMode mode;
    if (template_mode == "plane") mode = vff::RunMode::plane;
    else if (template_mode == "vortex") mode = vff::RunMode::vortex;
    else if (template_mode == "tv_scan") mode = vff::RunMode::tv_scan;
    else if (template_mode == "impact_profile") mode = vff::RunMode::impact_profile;
    else if (template_mode == "xsec") mode = vff::RunMode::xsec;
    else {
      std::cerr << "vortexff: unknown mode '" << template_mode << "'\n";
      return vff::kExitConfigError;
    }
    std::cout << vff::config_template(mode);
    return 0;
  }

  // run
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "vortexff: cannot read config file " << config_path << "\n";
    return vff::kExitConfigError;
  }
  std::ostringstream text;
  text << in.rdbuf();

  vff::RunConfig cfg;
  try {
    cfg = vff::parse_config(text.str());
  } catch (const vff::ConfigError& e) {
    std::cerr << "vortexff: " << e.what() << "\n";
    return vff::kExitConfigError;
  }
  if (!output_override.empty()) cfg.output_path = output_override;
  if (!format_override.empty()) {
    if (format_override == "csv") cfg.format = vff::OutputFormat::csv;
    else if (format_override == "json") cfg.format = vff::OutputFormat::json;
    else {
      std::cerr << "vortexff: --format expects csv or json\n";
      return vff::kExitConfigError;
    }
  }
  if (grid_nodes > 0) cfg.grid.nodes_per_axis = grid_nodes;
  if (grid_levels > 0) cfg.grid.refinement_levels = grid_levels;

  return vff::run(cfg, vff::resolve_threads(threads));
}
