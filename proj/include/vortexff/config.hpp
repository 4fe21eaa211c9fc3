#ifndef VORTEXFF_CONFIG_HPP
#define VORTEXFF_CONFIG_HPP

// Run configuration: a flat key-value document with [section] headers.
// parse_config applies defaults and validates invariants; emit_config writes
// the full effective configuration back out, so parse(emit(c)) == c and
// every output file can reproduce itself.

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vortexff/beam.hpp"
#include "vortexff/errors.hpp"
#include "vortexff/observables.hpp"
#include "vortexff/vec3.hpp"

namespace vff {

inline constexpr const char* kVersion = "0.1.0";

enum class RunMode { plane, vortex, tv_scan, impact_profile, xsec };
enum class OutputFormat { csv, json };
enum class CenterUnits { bohr, waist };
enum class AmplitudeKind { vortex, plane };

struct AtomSpec {
  int n = 1;
  int l = 0;
  int m = 0;
  Vec3 center{};
  CenterUnits center_units = CenterUnits::bohr;

  friend bool operator==(const AtomSpec& a, const AtomSpec& b) {
    return a.n == b.n && a.l == b.l && a.m == b.m && a.center == b.center &&
           a.center_units == b.center_units;
  }
};

struct GridConfig {
  int nodes_per_axis = 48;
  int refinement_levels = 3;
  double support_floor = 1e-12;
  double padding = 1.2;
  double box_half_width = 0.0;  // 0 = derive from support_radius
  double tolerance = 0.0;       // 0 = no convergence enforcement

  friend bool operator==(const GridConfig& a, const GridConfig& b) {
    return a.nodes_per_axis == b.nodes_per_axis &&
           a.refinement_levels == b.refinement_levels &&
           a.support_floor == b.support_floor && a.padding == b.padding &&
           a.box_half_width == b.box_half_width && a.tolerance == b.tolerance;
  }
};

struct SweepConfig {
  std::string parameter;        // z_R, ell, p, b, Theta
  std::vector<double> values;

  friend bool operator==(const SweepConfig& a, const SweepConfig& b) {
    return a.parameter == b.parameter && a.values == b.values;
  }
};

struct ProfileConfig {
  int n_q = 128;
  int n_phi_q = 256;
  int n_b = 96;
  int n_phi_b = 64;
  double b_max = 0.0;           // 0 = adaptive
  AmplitudeKind amplitude = AmplitudeKind::vortex;

  friend bool operator==(const ProfileConfig& a, const ProfileConfig& b) {
    return a.n_q == b.n_q && a.n_phi_q == b.n_phi_q && a.n_b == b.n_b &&
           a.n_phi_b == b.n_phi_b && a.b_max == b.b_max && a.amplitude == b.amplitude;
  }
};

struct RunConfig {
  RunMode mode = RunMode::plane;
  AtomSpec atom_initial;
  AtomSpec atom_final;
  BeamParams beam_in;
  BeamParams beam_out;
  std::vector<double> theta;    // radians
  std::vector<double> q_list;   // 1/bohr magnitudes, plane mode alternative
  SweepConfig sweep;
  double plane_ref_zr = 0.0;    // 0 = 100 x largest relevant z_R
  GridConfig grid;
  ProfileConfig profile;
  PolarizationPair polarization;
  std::string output_path = "out.csv";
  OutputFormat format = OutputFormat::csv;

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.mode == b.mode && a.atom_initial == b.atom_initial &&
           a.atom_final == b.atom_final && a.beam_in == b.beam_in &&
           a.beam_out == b.beam_out && a.theta == b.theta && a.q_list == b.q_list &&
           a.sweep == b.sweep && a.plane_ref_zr == b.plane_ref_zr &&
           a.grid == b.grid && a.profile == b.profile &&
           a.polarization.lambda_i == b.polarization.lambda_i &&
           a.polarization.lambda_f == b.polarization.lambda_f &&
           a.output_path == b.output_path && a.format == b.format;
  }
};

namespace cfgdetail {

struct Entry {
  std::string value;
  int line = 0;
  mutable bool used = false;
};

using Document = std::map<std::string, Entry>;  // key "section.key"

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline Document tokenize(const std::string& text) {
  Document doc;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (doc.count(full))
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" +
                        full + "'");
    doc[full] = {value, lineno, false};
  }
  return doc;
}

inline const Entry* find(const Document& doc, const std::string& key) {
  const auto it = doc.find(key);
  if (it == doc.end()) return nullptr;
  it->second.used = true;
  return &it->second;
}

[[noreturn]] inline void fail(const std::string& key, const Entry& e,
                              const std::string& msg) {
  throw ConfigError("config key '" + key + "' (line " + std::to_string(e.line) +
                    "): " + msg);
}

inline double to_double(const std::string& key, const Entry& e) {
  std::istringstream ss(e.value);
  double v;
  if (!(ss >> v) || !(ss >> std::ws).eof()) fail(key, e, "expected a number");
  return v;
}

inline int to_int(const std::string& key, const Entry& e) {
  std::istringstream ss(e.value);
  int v;
  if (!(ss >> v) || !(ss >> std::ws).eof()) fail(key, e, "expected an integer");
  return v;
}

inline std::vector<double> to_list(const std::string& key, const Entry& e) {
  std::istringstream ss(e.value);
  std::vector<double> out;
  double v;
  while (ss >> v) out.push_back(v);
  if (!(ss >> std::ws).eof() || out.empty())
    fail(key, e, "expected a space-separated list of numbers");
  return out;
}

inline Vec3 to_vec3(const std::string& key, const Entry& e) {
  const auto v = to_list(key, e);
  if (v.size() != 3) fail(key, e, "expected three numbers");
  return {v[0], v[1], v[2]};
}

inline double get_double(const Document& doc, const std::string& key, double dflt) {
  const Entry* e = find(doc, key);
  return e ? to_double(key, *e) : dflt;
}

inline int get_int(const Document& doc, const std::string& key, int dflt) {
  const Entry* e = find(doc, key);
  return e ? to_int(key, *e) : dflt;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace cfgdetail

inline std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::plane: return "plane";
    case RunMode::vortex: return "vortex";
    case RunMode::tv_scan: return "tv_scan";
    case RunMode::impact_profile: return "impact_profile";
    case RunMode::xsec: return "xsec";
  }
  return "?";
}

inline RunConfig parse_config(const std::string& text) {
  using namespace cfgdetail;
  const Document doc = tokenize(text);
  RunConfig cfg;

  // [units] -- all lengths below are multiplied by this factor into bohr
  double length_scale = 1.0;
  if (const Entry* e = find(doc, "units.length")) {
    if (e->value == "bohr") length_scale = 1.0;
    else if (e->value == "m") length_scale = 1.0 / 5.29177210903e-11;
    else if (e->value == "nm") length_scale = 1e-9 / 5.29177210903e-11;
    else fail("units.length", *e, "expected bohr, m or nm");
  }

  const Entry* mode_e = find(doc, "run.mode");
  if (!mode_e) throw ConfigError("missing required key 'run.mode'");
  if (mode_e->value == "plane") cfg.mode = RunMode::plane;
  else if (mode_e->value == "vortex") cfg.mode = RunMode::vortex;
  else if (mode_e->value == "tv_scan") cfg.mode = RunMode::tv_scan;
  else if (mode_e->value == "impact_profile") cfg.mode = RunMode::impact_profile;
  else if (mode_e->value == "xsec") cfg.mode = RunMode::xsec;
  else fail("run.mode", *mode_e, "expected plane, vortex, tv_scan, impact_profile or xsec");

  auto parse_atom = [&](const std::string& sec, const AtomSpec& dflt) {
    AtomSpec a = dflt;
    a.n = get_int(doc, sec + ".n", dflt.n);
    a.l = get_int(doc, sec + ".l", dflt.l);
    a.m = get_int(doc, sec + ".m", dflt.m);
    if (const Entry* e = find(doc, sec + ".center_units")) {
      if (e->value == "bohr") a.center_units = CenterUnits::bohr;
      else if (e->value == "waist") a.center_units = CenterUnits::waist;
      else fail(sec + ".center_units", *e, "expected bohr or waist");
    }
    if (const Entry* e = find(doc, sec + ".center")) {
      a.center = to_vec3(sec + ".center", *e);
      if (a.center_units == CenterUnits::bohr) a.center = a.center * length_scale;
    }
    if (a.n < 1) throw ConfigError("config: N must be >= 1 in [" + sec + "]");
    if (a.l < 0 || a.l >= a.n)
      throw ConfigError("config: L must satisfy 0 <= L < N in [" + sec + "]");
    if (std::abs(a.m) > a.l)
      throw ConfigError("config: |M| must be <= L in [" + sec + "]");
    return a;
  };
  cfg.atom_initial = parse_atom("atom_initial", AtomSpec{});
  cfg.atom_final = parse_atom("atom_final", cfg.atom_initial);

  auto parse_beam = [&](const std::string& sec, const BeamParams& dflt) {
    BeamParams b = dflt;
    b.wavelength = get_double(doc, sec + ".wavelength", dflt.wavelength / length_scale) *
                   length_scale;
    b.rayleigh_range =
        get_double(doc, sec + ".rayleigh_range", dflt.rayleigh_range / length_scale) *
        length_scale;
    b.p = get_int(doc, sec + ".p", dflt.p);
    b.ell = get_int(doc, sec + ".ell", dflt.ell);
    b.validate();
    return b;
  };
  cfg.beam_in = parse_beam("beam_in", BeamParams{});
  cfg.beam_out = parse_beam("beam_out", cfg.beam_in);

  if (const Entry* e = find(doc, "geometry.theta")) cfg.theta = to_list("geometry.theta", *e);
  if (const Entry* e = find(doc, "geometry.q")) {
    cfg.q_list = to_list("geometry.q", *e);
    for (auto& q : cfg.q_list) q /= length_scale;
  }
  if (!cfg.q_list.empty() && cfg.mode != RunMode::plane)
    throw ConfigError("config: geometry.q is only valid in plane mode");
  if (cfg.theta.empty() && cfg.q_list.empty()) cfg.theta = {0.0};
  for (double t : cfg.theta)
    if (!(t >= 0.0 && t <= kPi))
      throw ConfigError("config: geometry.theta values must lie in [0, pi]");

  if (const Entry* e = find(doc, "sweep.parameter")) {
    cfg.sweep.parameter = e->value;
    const Entry* ve = find(doc, "sweep.values");
    if (!ve) throw ConfigError("missing required key 'sweep.values'");
    cfg.sweep.values = to_list("sweep.values", *ve);
    static const char* allowed[] = {"z_R", "ell", "p", "b", "Theta"};
    bool ok = false;
    for (const char* a : allowed) ok = ok || cfg.sweep.parameter == a;
    if (!ok) fail("sweep.parameter", *e, "expected one of z_R, ell, p, b, Theta");
    if (cfg.sweep.parameter == "z_R" || cfg.sweep.parameter == "b")
      for (auto& v : cfg.sweep.values) v *= length_scale;
  }
  if (cfg.mode == RunMode::tv_scan && cfg.sweep.values.empty())
    throw ConfigError("config: tv_scan requires a [sweep] section");

  cfg.plane_ref_zr = get_double(doc, "sweep.plane_ref_zr", 0.0) * length_scale;

  cfg.grid.nodes_per_axis = get_int(doc, "grid.nodes_per_axis", 48);
  cfg.grid.refinement_levels = get_int(doc, "grid.refinement_levels", 3);
  cfg.grid.support_floor = get_double(doc, "grid.support_floor", 1e-12);
  cfg.grid.padding = get_double(doc, "grid.padding", 1.2);
  cfg.grid.box_half_width =
      get_double(doc, "grid.box_half_width", 0.0) * length_scale;
  cfg.grid.tolerance = get_double(doc, "grid.tolerance", 0.0);
  if (cfg.grid.nodes_per_axis < 4 || cfg.grid.nodes_per_axis % 2 != 0)
    throw ConfigError("config: grid.nodes_per_axis must be even and >= 4");
  if (cfg.grid.refinement_levels < 1)
    throw ConfigError("config: grid.refinement_levels must be >= 1");

  cfg.profile.n_q = get_int(doc, "profile.n_q", 128);
  cfg.profile.n_phi_q = get_int(doc, "profile.n_phi_q", 256);
  cfg.profile.n_b = get_int(doc, "profile.n_b", 96);
  cfg.profile.n_phi_b = get_int(doc, "profile.n_phi_b", 64);
  cfg.profile.b_max = get_double(doc, "profile.b_max", 0.0) * length_scale;
  if (const Entry* e = find(doc, "profile.amplitude")) {
    if (e->value == "vortex") cfg.profile.amplitude = AmplitudeKind::vortex;
    else if (e->value == "plane") cfg.profile.amplitude = AmplitudeKind::plane;
    else fail("profile.amplitude", *e, "expected vortex or plane");
  }

  if (const Entry* e = find(doc, "polarization.lambda_i"))
    cfg.polarization.lambda_i = to_vec3("polarization.lambda_i", *e);
  if (const Entry* e = find(doc, "polarization.lambda_f"))
    cfg.polarization.lambda_f = to_vec3("polarization.lambda_f", *e);
  if (cfg.mode == RunMode::xsec) cfg.polarization.validate();

  if (const Entry* e = find(doc, "output.path")) cfg.output_path = e->value;
  if (const Entry* e = find(doc, "output.format")) {
    if (e->value == "csv") cfg.format = OutputFormat::csv;
    else if (e->value == "json") cfg.format = OutputFormat::json;
    else fail("output.format", *e, "expected csv or json");
  }

  for (const auto& [key, entry] : doc)
    if (!entry.used)
      throw ConfigError("config key '" + key + "' (line " +
                        std::to_string(entry.line) + "): unknown key");
  return cfg;
}

/// Full effective configuration as a parseable document.
inline std::string emit_config(const RunConfig& cfg) {
  using cfgdetail::fmt;
  std::ostringstream os;
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? " " : "") + cfgdetail::fmt(v[i]);
    return s;
  };
  os << "[run]\n";
  os << "mode = " << to_string(cfg.mode) << "\n\n";
  auto atom = [&](const char* sec, const AtomSpec& a) {
    os << "[" << sec << "]\n";
    os << "n = " << a.n << "\nl = " << a.l << "\nm = " << a.m << "\n";
    os << "center = " << fmt(a.center.x) << " " << fmt(a.center.y) << " "
       << fmt(a.center.z) << "\n";
    os << "center_units = "
       << (a.center_units == CenterUnits::bohr ? "bohr" : "waist") << "\n\n";
  };
  atom("atom_initial", cfg.atom_initial);
  atom("atom_final", cfg.atom_final);
  auto beam = [&](const char* sec, const BeamParams& b) {
    os << "[" << sec << "]\n";
    os << "wavelength = " << fmt(b.wavelength) << "\n";
    os << "rayleigh_range = " << fmt(b.rayleigh_range) << "\n";
    os << "p = " << b.p << "\nell = " << b.ell << "\n\n";
  };
  beam("beam_in", cfg.beam_in);
  beam("beam_out", cfg.beam_out);
  os << "[geometry]\n";
  if (!cfg.theta.empty()) os << "theta = " << list(cfg.theta) << "\n";
  if (!cfg.q_list.empty()) os << "q = " << list(cfg.q_list) << "\n";
  os << "\n";
  if (!cfg.sweep.values.empty() || cfg.plane_ref_zr != 0.0) {
    os << "[sweep]\n";
    if (!cfg.sweep.values.empty()) {
      os << "parameter = " << cfg.sweep.parameter << "\n";
      os << "values = " << list(cfg.sweep.values) << "\n";
    }
    if (cfg.plane_ref_zr != 0.0)
      os << "plane_ref_zr = " << fmt(cfg.plane_ref_zr) << "\n";
    os << "\n";
  }
  os << "[grid]\n";
  os << "nodes_per_axis = " << cfg.grid.nodes_per_axis << "\n";
  os << "refinement_levels = " << cfg.grid.refinement_levels << "\n";
  os << "support_floor = " << fmt(cfg.grid.support_floor) << "\n";
  os << "padding = " << fmt(cfg.grid.padding) << "\n";
  if (cfg.grid.box_half_width != 0.0)
    os << "box_half_width = " << fmt(cfg.grid.box_half_width) << "\n";
  if (cfg.grid.tolerance != 0.0) os << "tolerance = " << fmt(cfg.grid.tolerance) << "\n";
  os << "\n[profile]\n";
  os << "n_q = " << cfg.profile.n_q << "\nn_phi_q = " << cfg.profile.n_phi_q << "\n";
  os << "n_b = " << cfg.profile.n_b << "\nn_phi_b = " << cfg.profile.n_phi_b << "\n";
  if (cfg.profile.b_max != 0.0) os << "b_max = " << fmt(cfg.profile.b_max) << "\n";
  os << "amplitude = "
     << (cfg.profile.amplitude == AmplitudeKind::vortex ? "vortex" : "plane") << "\n";
  os << "\n[polarization]\n";
  os << "lambda_i = " << fmt(cfg.polarization.lambda_i.x) << " "
     << fmt(cfg.polarization.lambda_i.y) << " " << fmt(cfg.polarization.lambda_i.z)
     << "\n";
  os << "lambda_f = " << fmt(cfg.polarization.lambda_f.x) << " "
     << fmt(cfg.polarization.lambda_f.y) << " " << fmt(cfg.polarization.lambda_f.z)
     << "\n";
  os << "\n[output]\n";
  os << "path = " << cfg.output_path << "\n";
  os << "format = " << (cfg.format == OutputFormat::csv ? "csv" : "json") << "\n";
  return os.str();
}

/// Commented starter configuration for a mode, for `print-config-template`.
inline std::string config_template(RunMode mode) {
  RunConfig cfg;
  cfg.mode = mode;
  cfg.beam_in = {100.0, 1e4, 0, 1};
  cfg.beam_out = cfg.beam_in;
  cfg.theta = {0.001, 0.01, 0.1};
  if (mode == RunMode::tv_scan) {
    cfg.sweep.parameter = "z_R";
    cfg.sweep.values = {1e3, 3.162e3, 1e4, 3.162e4, 1e5};
  }
  if (mode == RunMode::plane) {
    cfg.theta.clear();
    cfg.q_list = {0.1, 0.5, 1.0, 2.0, 5.0};
  }
  if (mode == RunMode::impact_profile) cfg.theta.clear();
  return emit_config(cfg);
}

}  // namespace vff

#endif
