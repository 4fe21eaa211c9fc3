#ifndef VORTEXFF_RUNNER_HPP
#define VORTEXFF_RUNNER_HPP

// Executes a RunConfig and writes CSV or JSON results. All floating values
// are printed with 17 significant digits and every output embeds the full
// effective configuration, so files are reproducible byte for byte.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vortexff/config.hpp"
#include "vortexff/formfactor.hpp"
#include "vortexff/observables.hpp"

namespace vff {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitNumericalFailure = 3,
  kExitCoverageError = 4,
};

namespace rundetail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;  // metadata footer lines (e.g. parseval)
  std::vector<std::string> warnings;
};

inline AtomicState resolve_atom(const AtomSpec& spec, const BeamParams& beam) {
  AtomicState s{spec.n, spec.l, spec.m, spec.center};
  if (spec.center_units == CenterUnits::waist) s.center = spec.center * beam.waist();
  s.validate();
  return s;
}

inline GridSpec build_grid(const RunConfig& cfg, const AtomicState& initial,
                           const AtomicState& final_state) {
  if (cfg.grid.box_half_width > 0.0) {
    GridSpec g;
    g.center = 0.5 * (initial.center + final_state.center);
    g.half_widths = {cfg.grid.box_half_width, cfg.grid.box_half_width,
                     cfg.grid.box_half_width};
    g.nodes_per_axis = cfg.grid.nodes_per_axis;
    g.refinement_levels = cfg.grid.refinement_levels;
    return g;
  }
  return default_grid(initial, final_state, cfg.grid.nodes_per_axis,
                      cfg.grid.refinement_levels, cfg.grid.support_floor,
                      cfg.grid.padding);
}

inline void check_tolerance(const RunConfig& cfg, const FormFactorResult& r) {
  if (cfg.grid.tolerance > 0.0 && r.abs_error_estimate > cfg.grid.tolerance) {
    std::ostringstream os;
    os << "quadrature did not converge: error estimate " << r.abs_error_estimate
       << " exceeds tolerance " << cfg.grid.tolerance;
    throw EvaluationError(os.str());
  }
}

inline FormFactorResult eval_vortex(const RunConfig& cfg, const BeamParams& in,
                                    const BeamParams& out, double theta, int threads) {
  const AtomicState ai = resolve_atom(cfg.atom_initial, in);
  const AtomicState af = resolve_atom(cfg.atom_final, in);
  const GridSpec grid = build_grid(cfg, ai, af);
  const ScatteringGeometry geom{in.wavenumber(), out.wavenumber(), theta};
  FormFactorResult r = vortex_ff(ai, af, in, out, geom, grid, threads);
  check_tolerance(cfg, r);
  return r;
}

inline Table run_plane(const RunConfig& cfg, int threads) {
  Table t;
  t.columns = {"theta", "abs_q", "re_M", "im_M", "abs_M2", "err_est"};
  const double k = cfg.beam_in.wavenumber();
  const AtomicState ai = resolve_atom(cfg.atom_initial, cfg.beam_in);
  const AtomicState af = resolve_atom(cfg.atom_final, cfg.beam_in);
  const GridSpec grid = build_grid(cfg, ai, af);

  struct Point { double theta; Vec3 q; };
  std::vector<Point> points;
  if (!cfg.q_list.empty()) {
    for (double q : cfg.q_list) {
      const double s = q / (2.0 * k);
      const double theta = s <= 1.0 ? 2.0 * std::asin(s) : std::nan("");
      points.push_back({theta, Vec3{0.0, 0.0, q}});
    }
  } else {
    for (double theta : cfg.theta)
      points.push_back({theta, ScatteringGeometry::elastic(k, theta).q()});
  }
  for (const auto& pt : points) {
    const FormFactorResult r = plane_wave_ff(ai, af, pt.q, grid, threads);
    check_tolerance(cfg, r);
    if (r.resolution_warning) t.warnings.push_back(r.warning);
    t.rows.push_back({pt.theta, pt.q.norm(), r.value.real(), r.value.imag(),
                      std::norm(r.value), r.abs_error_estimate});
  }
  return t;
}

inline Table run_vortex(const RunConfig& cfg, int threads) {
  Table t;
  t.columns = {"theta", "abs_q", "re_Mv", "im_Mv", "abs_Mv2", "err_est"};
  for (double theta : cfg.theta) {
    const FormFactorResult r = eval_vortex(cfg, cfg.beam_in, cfg.beam_out, theta, threads);
    if (r.paraxial_warning)
      t.warnings.push_back("paraxial validity warning: divergence angle >= 30 deg");
    if (r.resolution_warning) t.warnings.push_back(r.warning);
    const ScatteringGeometry geom{cfg.beam_in.wavenumber(), cfg.beam_out.wavenumber(),
                                  theta};
    t.rows.push_back({theta, geom.q().norm(), r.value.real(), r.value.imag(),
                      std::norm(r.value), r.abs_error_estimate});
  }
  return t;
}

struct SweptRun {
  RunConfig cfg;     // with the swept parameter applied
  double theta;
};

inline SweptRun apply_sweep(const RunConfig& base, double value) {
  SweptRun out{base, base.theta.empty() ? 0.0 : base.theta.front()};
  const std::string& p = base.sweep.parameter;
  if (p == "z_R") {
    out.cfg.beam_in.rayleigh_range = value;
    out.cfg.beam_out.rayleigh_range = value;
  } else if (p == "ell") {
    out.cfg.beam_in.ell = static_cast<int>(value);
    out.cfg.beam_out.ell = static_cast<int>(value);
  } else if (p == "p") {
    out.cfg.beam_in.p = static_cast<int>(value);
    out.cfg.beam_out.p = static_cast<int>(value);
  } else if (p == "b") {
    out.cfg.atom_initial.center.x = value;
    out.cfg.atom_final.center.x = value;
  } else if (p == "Theta") {
    out.theta = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + p + "'");
  }
  return out;
}

/// Reference Rayleigh range used for the plane-wave-limit denominator M_p.
inline double reference_zr(const RunConfig& cfg) {
  if (cfg.plane_ref_zr > 0.0) return cfg.plane_ref_zr;
  double zr = cfg.beam_in.rayleigh_range;
  if (cfg.sweep.parameter == "z_R")
    for (double v : cfg.sweep.values) zr = std::max(zr, v);
  return 100.0 * zr;
}

inline Table run_tv_scan(const RunConfig& cfg, int threads) {
  Table t;
  t.columns = {"sweep_value", "re_Mv", "im_Mv", "abs_Mv2",
               "re_Mp",       "im_Mp", "abs_Mp2", "T_v", "err_est"};
  const double zr_ref = reference_zr(cfg);
  for (double value : cfg.sweep.values) {
    const SweptRun sw = apply_sweep(cfg, value);
    const FormFactorResult rv =
        eval_vortex(sw.cfg, sw.cfg.beam_in, sw.cfg.beam_out, sw.theta, threads);

    RunConfig ref = sw.cfg;  // same quantum numbers, plane-wave-limit z_R
    ref.beam_in.rayleigh_range = zr_ref;
    ref.beam_out.rayleigh_range = zr_ref;
    const FormFactorResult rp =
        eval_vortex(ref, ref.beam_in, ref.beam_out, sw.theta, threads);

    if (rv.paraxial_warning)
      t.warnings.push_back("paraxial validity warning: divergence angle >= 30 deg");
    const double tv = vortex_factor(rv.value, rp.value);
    t.rows.push_back({value, rv.value.real(), rv.value.imag(), std::norm(rv.value),
                      rp.value.real(), rp.value.imag(), std::norm(rp.value), tv,
                      std::max(rv.abs_error_estimate, rp.abs_error_estimate)});
  }
  return t;
}

/// Scattering-amplitude profile f(q) on a polar grid over the elastic disk
/// q <= 2k. Requires an on-axis atom; the azimuthal dependence is then the
/// pure winding e^{i(ell_i - ell_f + M_i - M_f) phi}.
inline QProfile build_qprofile(const RunConfig& cfg, int threads) {
  const double k = cfg.beam_in.wavenumber();
  if (std::abs(cfg.beam_out.wavenumber() - k) > 1e-12 * k)
    throw ConfigError("impact_profile: requires elastic beams (equal wavelengths)");
  if (cfg.atom_initial.center.x != 0.0 || cfg.atom_initial.center.y != 0.0 ||
      cfg.atom_final.center.x != 0.0 || cfg.atom_final.center.y != 0.0)
    throw ConfigError("impact_profile: requires an on-axis atom (transverse center 0)");

  QProfile fq;
  fq.k = k;
  fq.grid = PolarGrid::make(2.0 * k, cfg.profile.n_q, cfg.profile.n_phi_q);
  fq.values.resize(fq.grid.size());

  const int winding = (cfg.profile.amplitude == AmplitudeKind::vortex
                           ? cfg.beam_in.ell - cfg.beam_out.ell
                           : 0) +
                      cfg.atom_initial.m - cfg.atom_final.m;

  const AtomicState ai = resolve_atom(cfg.atom_initial, cfg.beam_in);
  const AtomicState af = resolve_atom(cfg.atom_final, cfg.beam_in);
  const GridSpec grid3 = build_grid(cfg, ai, af);

  for (std::size_t ir = 0; ir < fq.grid.r_nodes.size(); ++ir) {
    const double q = fq.grid.r_nodes[ir];
    const double theta = 2.0 * std::asin(std::min(1.0, q / (2.0 * k)));
    std::complex<double> f;
    if (cfg.profile.amplitude == AmplitudeKind::vortex) {
      const ScatteringGeometry geom{k, k, theta};
      const FormFactorResult r =
          vortex_ff(ai, af, cfg.beam_in, cfg.beam_out, geom, grid3, threads);
      check_tolerance(cfg, r);
      f = r.value;
    } else {
      const FormFactorResult r =
          plane_wave_ff(ai, af, ScatteringGeometry::elastic(k, theta).q(), grid3,
                        threads);
      check_tolerance(cfg, r);
      f = r.value;
    }
    for (int j = 0; j < fq.grid.n_phi; ++j) {
      const double phase = winding * fq.grid.phi(j);
      fq.values[fq.grid.index(ir, j)] =
          f * std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  return fq;
}

/// Extend b until |a(b)| falls below 1e-4 of its running maximum. The search
/// stops at the largest b the q-grid still resolves; past that point the
/// discrete transform is aliasing noise, not signal.
inline double adaptive_b_max(const QProfile& fq) {
  const double db = (2.0 * kPi / fq.grid.r_upper) / 8.0;
  const double cycles_max =
      std::min<double>(static_cast<double>(fq.grid.r_nodes.size()), fq.grid.n_phi) /
      6.0;
  const double b_reso = cycles_max * 2.0 * kPi / fq.grid.r_upper;
  double amax = 0.0;
  int below = 0;
  for (int j = 0;; ++j) {
    const double b = j * db;
    if (b > b_reso) break;
    const double a = std::abs(impact_amplitude(fq, {b, 0.0}));
    amax = std::max(amax, a);
    if (j > 8 && a < 1e-4 * amax)
      ++below;
    else
      below = 0;
    if (below >= 8) return b * 1.05;
  }
  throw CoverageError(
      "impact_profile: |a(b)| did not fall below 1e-4 of its peak within the "
      "b-range resolved by the q-grid; supply profile.b_max or raise "
      "profile.n_q / profile.n_phi_q");
}

inline Table run_impact_profile(const RunConfig& cfg, int threads,
                                ParsevalResult* parseval_out = nullptr) {
  Table t;
  t.columns = {"b", "phi_b", "re_a", "im_a", "abs_a2"};
  const QProfile fq = build_qprofile(cfg, threads);
  const double b_max =
      cfg.profile.b_max > 0.0 ? cfg.profile.b_max : adaptive_b_max(fq);
  if (!transform_resolved(fq, b_max))
    t.warnings.push_back("q-grid undersamples e^{iq.b} at the outermost b; "
                         "increase profile.n_q / profile.n_phi_q");
  const BProfile ab = make_bprofile(fq, b_max, cfg.profile.n_b, cfg.profile.n_phi_b);
  for (std::size_t ir = 0; ir < ab.grid.r_nodes.size(); ++ir)
    for (int j = 0; j < ab.grid.n_phi; ++j) {
      const std::complex<double> a = ab.values[ab.grid.index(ir, j)];
      t.rows.push_back({ab.grid.r_nodes[ir], ab.grid.phi(j), a.real(), a.imag(),
                        std::norm(a)});
    }
  const ParsevalResult pr = parseval_check(fq, ab);
  if (parseval_out) *parseval_out = pr;
  t.notes.push_back("parseval sigma_q = " + fmt(pr.sigma_q));
  t.notes.push_back("parseval sigma_b = " + fmt(pr.sigma_b));
  t.notes.push_back("parseval rel_diff = " + fmt(pr.rel_diff));
  t.notes.push_back("max_probability = " + fmt(pr.max_probability));
  if (!pr.probability_bound_ok)
    t.warnings.push_back("max |a(b)|^2 exceeds unity: first-order amplitude "
                         "outside its validity range");
  return t;
}

inline Table run_xsec(const RunConfig& cfg, int threads) {
  Table t;
  t.columns = {"theta",      "abs_q",       "re_M",        "im_M",
               "abs_M2",     "thomson_r02", "compton_r02", "err_est"};
  const double ki = cfg.beam_in.wavenumber();
  const double kf = cfg.beam_out.wavenumber();
  const double thomson = thomson_dcs(cfg.polarization, ki, kf);
  const AtomicState ai = resolve_atom(cfg.atom_initial, cfg.beam_in);
  const AtomicState af = resolve_atom(cfg.atom_final, cfg.beam_in);
  const GridSpec grid = build_grid(cfg, ai, af);
  for (double theta : cfg.theta) {
    const ScatteringGeometry geom{ki, kf, theta};
    FormFactorResult r;
    if (cfg.profile.amplitude == AmplitudeKind::vortex)
      r = eval_vortex(cfg, cfg.beam_in, cfg.beam_out, theta, threads);
    else {
      r = plane_wave_ff(ai, af, geom.q(), grid, threads);
      check_tolerance(cfg, r);
    }
    t.rows.push_back({theta, geom.q().norm(), r.value.real(), r.value.imag(),
                      std::norm(r.value), thomson, compton_dcs(r.value, thomson),
                      r.abs_error_estimate});
  }
  return t;
}

inline void write_csv(std::ostream& os, const RunConfig& cfg, const Table& t) {
  os << "# vortexff " << kVersion << "\n";
  os << "# mode = " << to_string(cfg.mode) << "\n";
  os << "# effective config:\n";
  std::istringstream cfgtext(emit_config(cfg));
  std::string line;
  while (std::getline(cfgtext, line)) os << "# " << line << "\n";
  for (const auto& w : t.warnings) os << "# warning: " << w << "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    os << (c ? "," : "") << t.columns[c];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << fmt(row[c]);
    os << "\n";
  }
  for (const auto& n : t.notes) os << "# " << n << "\n";
}

inline void write_json(std::ostream& os, const RunConfig& cfg, const Table& t) {
  nlohmann::json j;
  j["metadata"]["version"] = kVersion;
  j["metadata"]["mode"] = to_string(cfg.mode);
  j["metadata"]["config"] = emit_config(cfg);
  j["metadata"]["warnings"] = t.warnings;
  j["metadata"]["notes"] = t.notes;
  j["columns"] = t.columns;
  nlohmann::json data = nlohmann::json::object();
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    nlohmann::json col = nlohmann::json::array();
    for (const auto& row : t.rows) col.push_back(row[c]);
    data[t.columns[c]] = std::move(col);
  }
  j["data"] = std::move(data);
  os << j.dump(2) << "\n";
}

}  // namespace rundetail

inline int resolve_threads(int cli_threads) {
  if (cli_threads > 0) return cli_threads;
  if (const char* env = std::getenv("VORTEXFF_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

/// Execute a validated config; returns a process exit code.
inline int run(const RunConfig& cfg, int threads = 1, std::ostream* log = &std::cerr) {
  using namespace rundetail;
  try {
    Table t;
    switch (cfg.mode) {
      case RunMode::plane: t = run_plane(cfg, threads); break;
      case RunMode::vortex: t = run_vortex(cfg, threads); break;
      case RunMode::tv_scan: t = run_tv_scan(cfg, threads); break;
      case RunMode::impact_profile: t = run_impact_profile(cfg, threads); break;
      case RunMode::xsec: t = run_xsec(cfg, threads); break;
    }
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) {
      if (log) *log << "vortexff: cannot open output file " << cfg.output_path << "\n";
      return kExitConfigError;
    }
    if (cfg.format == OutputFormat::csv)
      write_csv(out, cfg, t);
    else
      write_json(out, cfg, t);
    if (log)
      for (const auto& w : t.warnings) *log << "vortexff: warning: " << w << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    if (log) *log << "vortexff: config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const CoverageError& e) {
    if (log) *log << "vortexff: coverage error: " << e.what() << "\n";
    return kExitCoverageError;
  } catch (const GridCoverageError& e) {
    if (log) *log << "vortexff: coverage error: " << e.what() << "\n";
    return kExitCoverageError;
  } catch (const EvaluationError& e) {
    if (log) *log << "vortexff: numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const DomainError& e) {
    if (log) *log << "vortexff: config error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace vff

#endif
