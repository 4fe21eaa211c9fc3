#ifndef VORTEXFF_BEAM_HPP
#define VORTEXFF_BEAM_HPP

// Laguerre-Gauss twisted-photon mode and beam-geometry relations (width,
// Gouy phase, divergence and Coulomb angles). Lengths in bohr.

#include <cmath>
#include <complex>

#include "vortexff/errors.hpp"
#include "vortexff/specfun.hpp"

namespace vff {

inline constexpr double kParaxialLimitRadians = kPi / 6.0;  // 30 degrees

struct BeamParams {
  double wavelength = 100.0;     // bohr
  double rayleigh_range = 1e4;   // bohr
  int p = 0;                     // radial index
  int ell = 0;                   // OAM index; sign = handedness

  double wavenumber() const { return 2.0 * kPi / wavelength; }
  double waist() const { return std::sqrt(wavelength * rayleigh_range / kPi); }

  /// False when the divergence angle at the waist reaches the paraxial
  /// validity bound (warning state, not a rejection).
  bool paraxial_ok() const {
    return std::atan(waist() / rayleigh_range) < kParaxialLimitRadians;
  }

  void validate() const {
    if (!(wavelength > 0.0)) throw DomainError("BeamParams: wavelength must be > 0");
    if (!(rayleigh_range > 0.0))
      throw DomainError("BeamParams: rayleigh_range must be > 0");
    if (p < 0) throw DomainError("BeamParams: p must be >= 0");
  }

  friend bool operator==(const BeamParams& a, const BeamParams& b) {
    return a.wavelength == b.wavelength && a.rayleigh_range == b.rayleigh_range &&
           a.p == b.p && a.ell == b.ell;
  }
};

/// w(z) = w0 sqrt(1 + z^2/z_R^2); even in z.
inline double beam_width(const BeamParams& beam, double z) {
  const double zr = z / beam.rayleigh_range;
  return beam.waist() * std::sqrt(1.0 + zr * zr);
}

/// (2p + |ell| + 1) arctan(z/z_R); odd in z.
inline double gouy_phase(const BeamParams& beam, double z) {
  return (2.0 * beam.p + std::abs(beam.ell) + 1.0) *
         std::atan(z / beam.rayleigh_range);
}

/// Asymptotic cone angle of the intensity ring through impact parameter b:
/// arctan(b / z_R). b = w0 recovers the textbook divergence angle.
inline double divergence_angle(const BeamParams& beam, double b) {
  if (!(b >= 0.0)) throw DomainError("divergence_angle: require b >= 0");
  return std::atan(b / beam.rayleigh_range);
}

/// Classical Coulomb scattering angle for impact parameter b and head-on
/// closest-approach distance d0: Theta_C = 2 arctan(d0 / 2b).
inline double coulomb_angle(double b, double d0) {
  if (!(b > 0.0)) throw DomainError("coulomb_angle: require b > 0");
  if (!(d0 > 0.0)) throw DomainError("coulomb_angle: require d0 > 0");
  return 2.0 * std::atan(d0 / (2.0 * b));
}

/// Full complex Laguerre-Gauss amplitude u_{p,ell}(rho, z, phi):
/// area-normalized transverse profile, e^{i ell phi} winding, curvature
/// phase k rho^2 z / 2(z^2 + z_R^2) and minus the Gouy phase.
inline std::complex<double> lg_mode(const BeamParams& beam, double rho, double z,
                                    double phi) {
  beam.validate();
  if (!(rho >= 0.0)) throw DomainError("lg_mode: require rho >= 0");
  const int labs = std::abs(beam.ell);
  if (rho == 0.0 && labs != 0) return 0.0;  // vortex null, avoid log(0)

  const double w = beam_width(beam, z);
  const double lognorm = 0.5 * (std::log(2.0) + log_factorial(beam.p) -
                                std::log(kPi) - log_factorial(beam.p + labs));
  const double x = 2.0 * rho * rho / (w * w);
  double amp = std::exp(lognorm) / w;
  if (labs != 0) amp *= std::pow(rho * std::sqrt(2.0) / w, labs);
  amp *= std::exp(-0.5 * x) * assoc_laguerre({beam.p, labs}, x);

  const double zr = beam.rayleigh_range;
  const double phase = beam.ell * phi +
                       beam.wavenumber() * rho * rho * z / (2.0 * (z * z + zr * zr)) -
                       gouy_phase(beam, z);
  return amp * std::complex<double>(std::cos(phase), std::sin(phase));
}

}  // namespace vff

#endif
