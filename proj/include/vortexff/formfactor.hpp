#ifndef VORTEXFF_FORMFACTOR_HPP
#define VORTEXFF_FORMFACTOR_HPP

// Atomic form factors: plane-wave matrix element <f| e^{iq.r} |i>, the
// vortex form factor with incoming/outgoing Laguerre-Gauss dressing and the
// (1/2) lambda z_R normalization, and the geometric structure factor for
// multi-center targets.
//
// Frames: the incoming beam runs along +z; the scattering plane is y-z and
// the outgoing frame is obtained by rotating about the common x axis by the
// scattering angle Theta, so k_f = k_f (0, sin Theta, cos Theta).

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "vortexff/atom.hpp"
#include "vortexff/beam.hpp"
#include "vortexff/quadrature.hpp"

namespace vff {

struct ScatteringGeometry {
  double k_i = 0.0;    // 1/bohr
  double k_f = 0.0;    // 1/bohr
  double theta = 0.0;  // radians, angle between incoming and outgoing beams

  void validate() const {
    if (!(k_i > 0.0 && k_f > 0.0))
      throw DomainError("ScatteringGeometry: wavenumbers must be > 0");
    if (!(theta >= 0.0 && theta <= kPi))
      throw DomainError("ScatteringGeometry: Theta must be in [0, pi]");
  }

  Vec3 k_f_direction() const { return {0.0, std::sin(theta), std::cos(theta)}; }

  /// Momentum transfer q = k_i z_hat - k_f k_f_hat. For elastic runs
  /// |q| = 2 k sin(Theta/2).
  Vec3 q() const {
    return {0.0, -k_f * std::sin(theta), k_i - k_f * std::cos(theta)};
  }

  static ScatteringGeometry elastic(double k, double theta) {
    return {k, k, theta};
  }
};

struct FormFactorResult {
  std::complex<double> value{};
  double abs_error_estimate = 0.0;
  GridSpec grid;  // provenance
  bool paraxial_warning = false;
  bool resolution_warning = false;
  std::string warning;
};

/// Coordinates of r in the outgoing (scattered) frame: a rotation about x
/// taking z_hat onto k_f_hat, i.e. z' = r . k_f_hat.
inline Vec3 rotate_to_scattered_frame(const Vec3& r, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {r.x, r.y * c - r.z * s, r.y * s + r.z * c};
}

/// Box (centered on the states' midpoint) covering both states' support,
/// padded by `padding` times the support radius at `density_floor`.
inline GridSpec default_grid(const AtomicState& initial, const AtomicState& final_state,
                             int nodes_per_axis = 48, int refinement_levels = 3,
                             double density_floor = 1e-12, double padding = 1.2) {
  const double ri = padding * support_radius(initial, density_floor);
  const double rf = padding * support_radius(final_state, density_floor);
  GridSpec grid;
  for (int a = 0; a < 3; ++a) {
    const double ci = (a == 0 ? initial.center.x : a == 1 ? initial.center.y
                                                          : initial.center.z);
    const double cf = (a == 0 ? final_state.center.x : a == 1 ? final_state.center.y
                                                              : final_state.center.z);
    const double lo = std::min(ci - ri, cf - rf);
    const double hi = std::max(ci + ri, cf + rf);
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    if (a == 0) { grid.center.x = c; grid.half_widths.x = h; }
    if (a == 1) { grid.center.y = c; grid.half_widths.y = h; }
    if (a == 2) { grid.center.z = c; grid.half_widths.z = h; }
  }
  grid.nodes_per_axis = nodes_per_axis;
  grid.refinement_levels = refinement_levels;
  return grid;
}

namespace detail {

inline void check_grid_covers(const GridSpec& grid, const AtomicState& s,
                              double density_floor = 1e-12, double padding = 1.2) {
  const double rs = padding * support_radius(s, density_floor);
  const bool ok = s.center.x - rs >= grid.center.x - grid.half_widths.x &&
                  s.center.x + rs <= grid.center.x + grid.half_widths.x &&
                  s.center.y - rs >= grid.center.y - grid.half_widths.y &&
                  s.center.y + rs <= grid.center.y + grid.half_widths.y &&
                  s.center.z - rs >= grid.center.z - grid.half_widths.z &&
                  s.center.z + rs <= grid.center.z + grid.half_widths.z;
  if (!ok) {
    std::ostringstream os;
    os << "grid does not cover the state's support; required box: center ("
       << s.center.x << ", " << s.center.y << ", " << s.center.z
       << "), half-width >= " << rs << " on every axis";
    throw GridCoverageError(os.str());
  }
}

}  // namespace detail

/// Plane-wave form factor M = integral phi_f^* e^{iq.r} phi_i d3r.
inline FormFactorResult plane_wave_ff(const AtomicState& initial,
                                      const AtomicState& final_state, const Vec3& q,
                                      const GridSpec& grid, int threads = 1) {
  initial.validate();
  final_state.validate();
  if (!q.finite()) throw DomainError("plane_wave_ff: q must be finite");
  detail::check_grid_covers(grid, initial);
  detail::check_grid_covers(grid, final_state);

  auto integrand = [&](const Vec3& r) -> std::complex<double> {
    const double phase = q.dot(r);
    return std::conj(wavefunction(final_state, r)) *
           std::complex<double>(std::cos(phase), std::sin(phase)) *
           wavefunction(initial, r);
  };
  const QuadResult qr = integrate_3d(integrand, grid, threads, q.norm());

  FormFactorResult out;
  out.value = qr.value;
  out.abs_error_estimate = qr.abs_error_estimate;
  out.grid = grid;
  out.resolution_warning = qr.resolution_warning;
  out.warning = qr.warning;
  return out;
}

/// Vortex form factor:
///   (1/2) lambda z_R  *  integral phi_f^* [u_out in the rotated frame]^*
///                                 e^{iq.r} u_in phi_i d3r,
/// with the normalization prefactor taken from the incoming beam. The
/// outgoing Laguerre-Gauss factor is produced by complex conjugation of the
/// mode function, never by a second sign convention.
inline FormFactorResult vortex_ff(const AtomicState& initial,
                                  const AtomicState& final_state,
                                  const BeamParams& beam_in, const BeamParams& beam_out,
                                  const ScatteringGeometry& geom, const GridSpec& grid,
                                  int threads = 1) {
  initial.validate();
  final_state.validate();
  beam_in.validate();
  beam_out.validate();
  geom.validate();
  if (std::abs(geom.k_i - beam_in.wavenumber()) > 1e-9 * geom.k_i)
    throw DomainError("vortex_ff: geometry k_i inconsistent with incoming wavelength");
  if (std::abs(geom.k_f - beam_out.wavenumber()) > 1e-9 * geom.k_f)
    throw DomainError("vortex_ff: geometry k_f inconsistent with outgoing wavelength");
  detail::check_grid_covers(grid, initial);
  detail::check_grid_covers(grid, final_state);

  const Vec3 q = geom.q();
  const double theta = geom.theta;

  auto integrand = [&](const Vec3& r) -> std::complex<double> {
    const std::complex<double> u_in =
        lg_mode(beam_in, std::hypot(r.x, r.y), r.z, std::atan2(r.y, r.x));
    const Vec3 rp = rotate_to_scattered_frame(r, theta);
    const std::complex<double> u_out =
        lg_mode(beam_out, std::hypot(rp.x, rp.y), rp.z, std::atan2(rp.y, rp.x));
    const double phase = q.dot(r);
    return std::conj(wavefunction(final_state, r)) * std::conj(u_out) *
           std::complex<double>(std::cos(phase), std::sin(phase)) * u_in *
           wavefunction(initial, r);
  };

  // curvature phase bounds the extra oscillation on top of e^{iq.r}
  const double box_diag = 2.0 * std::sqrt(grid.half_widths.dot(grid.half_widths));
  const double max_grad =
      q.norm() + geom.k_i * box_diag / beam_in.rayleigh_range;
  const QuadResult qr = integrate_3d(integrand, grid, threads, max_grad);

  FormFactorResult out;
  out.value = 0.5 * beam_in.wavelength * beam_in.rayleigh_range * qr.value;
  out.abs_error_estimate =
      0.5 * beam_in.wavelength * beam_in.rayleigh_range * qr.abs_error_estimate;
  out.grid = grid;
  out.paraxial_warning = !beam_in.paraxial_ok() || !beam_out.paraxial_ok();
  out.resolution_warning = qr.resolution_warning;
  out.warning = qr.warning;
  return out;
}

/// Geometric structure factor G = sum_j e^{iq.R_j} for a multi-center target.
inline std::complex<double> structure_factor(const Vec3& q,
                                             const std::vector<Vec3>& centers) {
  if (centers.empty()) throw DomainError("structure_factor: centers must be non-empty");
  detail::KahanSum acc;
  for (const Vec3& c : centers) {
    const double phase = q.dot(c);
    acc.add({std::cos(phase), std::sin(phase)});
  }
  return acc.get();
}

}  // namespace vff

#endif
