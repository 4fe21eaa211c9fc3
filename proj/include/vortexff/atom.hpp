#ifndef VORTEXFF_ATOM_HPP
#define VORTEXFF_ATOM_HPP

// Hydrogenic target states with a rigid spatial displacement from the beam
// axis. The quantization axis is fixed along the incoming beam direction
// (+z); the displacement lives in the state, not the beam, so both beam
// frames stay fixed.

#include <algorithm>
#include <cmath>
#include <complex>

#include "vortexff/errors.hpp"
#include "vortexff/specfun.hpp"
#include "vortexff/vec3.hpp"

namespace vff {

struct AtomicState {
  int N = 1;
  int L = 0;
  int M = 0;
  Vec3 center{};  // bohr; transverse part is the impact parameter b

  void validate() const {
    if (N < 1) throw DomainError("AtomicState: N must be >= 1");
    if (L < 0 || L >= N) throw DomainError("AtomicState: L must satisfy 0 <= L < N");
    if (std::abs(M) > L) throw DomainError("AtomicState: |M| must be <= L");
    if (!center.finite()) throw DomainError("AtomicState: center must be finite");
  }
};

/// Complex amplitude of the displaced bound state at position r (bohr).
inline std::complex<double> wavefunction(const AtomicState& state, const Vec3& r) {
  state.validate();
  const Vec3 d = r - state.center;
  const double rr = d.norm();
  const double radial = hydrogenic_radial(state.N, state.L, rr);
  if (state.L == 0) return radial * spherical_harmonic(0, 0, 0.0, 0.0);
  if (rr == 0.0) return 0.0;  // r^L factor kills the angular singularity
  const double theta = std::acos(std::clamp(d.z / rr, -1.0, 1.0));
  const double phi = std::atan2(d.y, d.x);
  return radial * spherical_harmonic(state.L, state.M, theta, phi);
}

namespace detail {
inline double radial_density(const AtomicState& s, double r) {
  const double R = hydrogenic_radial(s.N, s.L, r);
  return r * r * R * R;
}
}  // namespace detail

/// Smallest radius beyond which the radial probability density r^2 R^2
/// stays below density_floor times its maximum. density_floor = 1 returns
/// the location of the density maximum.
inline double support_radius(const AtomicState& state, double density_floor) {
  state.validate();
  if (!(density_floor > 0.0 && density_floor <= 1.0))
    throw DomainError("support_radius: require 0 < density_floor <= 1");

  // Scan far enough that exponential decay dominates any density_floor in use.
  const double r_out = 60.0 * state.N * state.N + 60.0;
  const int nscan = 20000;
  const double dr = r_out / nscan;

  double dmax = 0.0, r_at_max = 0.0;
  for (int i = 1; i <= nscan; ++i) {
    const double d = detail::radial_density(state, i * dr);
    if (d > dmax) {
      dmax = d;
      r_at_max = i * dr;
    }
  }
  // refine the maximum by golden-section around the scan peak
  {
    double a = std::max(0.0, r_at_max - dr), b = r_at_max + dr;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200; ++it) {
      const double c = b - gr * (b - a);
      const double d = a + gr * (b - a);
      if (detail::radial_density(state, c) < detail::radial_density(state, d))
        a = c;
      else
        b = d;
    }
    r_at_max = 0.5 * (a + b);
    dmax = detail::radial_density(state, r_at_max);
  }
  if (density_floor == 1.0) return r_at_max;

  const double threshold = density_floor * dmax;
  // outermost scan point at or above threshold
  int last_above = 0;
  for (int i = nscan; i >= 1; --i) {
    if (detail::radial_density(state, i * dr) >= threshold) {
      last_above = i;
      break;
    }
  }
  double lo = last_above * dr, hi = lo + dr;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::radial_density(state, mid) >= threshold)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace vff

#endif
