#ifndef VORTEXFF_OBSERVABLES_HPP
#define VORTEXFF_OBSERVABLES_HPP

// Measurable quantities built from form factors: Thomson/Compton cross
// sections, the vortex factor T_v, impact-parameter amplitudes a(b) and the
// Parseval total-cross-section identity between the q-space and b-space
// pictures.

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <vector>

#include "vortexff/errors.hpp"
#include "vortexff/quadrature.hpp"
#include "vortexff/vec3.hpp"

namespace vff {

/// Classical electron radius, for converting r0^2-unit cross sections to SI.
inline constexpr double kClassicalElectronRadiusMeters = 2.818e-15;

struct PolarizationPair {
  Vec3 lambda_i{1.0, 0.0, 0.0};
  Vec3 lambda_f{1.0, 0.0, 0.0};

  void validate() const {
    if (std::abs(lambda_i.norm() - 1.0) > 1e-12 ||
        std::abs(lambda_f.norm() - 1.0) > 1e-12)
      throw DomainError("PolarizationPair: polarization vectors must be unit norm");
  }
};

/// Thomson differential cross section (omega_f/omega_i) |Lambda_i.Lambda_f|^2
/// in units of r0^2 per steradian. The Klein-Nishina correction is out of
/// scope here.
inline double thomson_dcs(const PolarizationPair& pol, double omega_i, double omega_f) {
  pol.validate();
  if (!(omega_i > 0.0 && omega_f > 0.0))
    throw DomainError("thomson_dcs: frequencies must be > 0");
  const double dot = pol.lambda_i.dot(pol.lambda_f);
  return (omega_f / omega_i) * dot * dot;
}

/// Compton differential cross section |M|^2 * dsigma_T/dOmega.
inline double compton_dcs(std::complex<double> M, double thomson) {
  if (!(thomson >= 0.0)) throw DomainError("compton_dcs: thomson must be >= 0");
  return std::norm(M) * thomson;
}

/// Vortex factor T_v = |M_v|^2 / |M_p|^2 - 1; T_v + 1 converts plane-wave
/// data to vortex data.
inline double vortex_factor(std::complex<double> M_v, std::complex<double> M_p,
                            double denominator_floor = 1e-300) {
  const double mp2 = std::norm(M_p);
  if (!(mp2 > denominator_floor * denominator_floor))
    throw DomainError("vortex_factor: |M_p| below the degenerate-denominator floor");
  return std::norm(M_v) / mp2 - 1.0;
}

/// Tensor-structured polar sample grid: Gauss-Legendre radial nodes on
/// [0, r_max] times n_phi uniform azimuthal nodes phi_j = 2 pi j / n_phi.
struct PolarGrid {
  std::vector<double> r_nodes;
  std::vector<double> r_weights;
  double r_upper = 0.0;
  int n_phi = 0;

  static PolarGrid make(double r_max, int n_r, int n_phi) {
    if (!(r_max > 0.0) || n_r < 2 || n_phi < 4)
      throw DomainError("PolarGrid: require r_max > 0, n_r >= 2, n_phi >= 4");
    const auto& [x, w] = detail::gauss_legendre(n_r);
    PolarGrid g;
    g.r_nodes.resize(n_r);
    g.r_weights.resize(n_r);
    for (int i = 0; i < n_r; ++i) {
      g.r_nodes[i] = 0.5 * r_max * (x[i] + 1.0);
      g.r_weights[i] = 0.5 * r_max * w[i];
    }
    g.r_upper = r_max;
    g.n_phi = n_phi;
    return g;
  }

  double phi(int j) const { return 2.0 * kPi * j / n_phi; }
  std::size_t size() const { return r_nodes.size() * static_cast<std::size_t>(n_phi); }
  std::size_t index(std::size_t ir, std::size_t jphi) const {
    return ir * static_cast<std::size_t>(n_phi) + jphi;
  }
};

/// Scattering amplitude samples f(q) on a transverse-plane polar grid.
struct QProfile {
  PolarGrid grid;         // radial coordinate is |q| (1/bohr)
  double k = 0.0;         // beam wavenumber (1/bohr)
  std::vector<std::complex<double>> values;  // size grid.size()
};

/// Probability amplitude samples a(b) on a polar impact-parameter grid.
struct BProfile {
  PolarGrid grid;         // radial coordinate is b (bohr)
  double k = 0.0;
  std::vector<std::complex<double>> values;
};

/// True when the q-grid places at least ~6 samples per oscillation of
/// e^{iq.b} at impact parameter magnitude b.
inline bool transform_resolved(const QProfile& fq, double b) {
  if (fq.grid.r_nodes.empty()) return false;
  const double q_max = fq.grid.r_upper;
  const double cycles = q_max * b / (2.0 * kPi);
  if (cycles <= 0.0) return true;
  const double radial_ok = fq.grid.r_nodes.size() / cycles;
  const double azimuthal_ok = fq.grid.n_phi / cycles;
  return radial_ok >= 6.0 && azimuthal_ok >= 6.0;
}

/// a(b) = 1/(2 pi k) * integral e^{iq.b} f(q) d2q over the sampled q-disk.
inline std::complex<double> impact_amplitude(const QProfile& fq, const Vec2& b) {
  if (fq.values.empty()) throw DomainError("impact_amplitude: empty profile");
  if (fq.values.size() != fq.grid.size())
    throw DomainError("impact_amplitude: profile size does not match its grid");
  if (!(fq.k > 0.0)) throw DomainError("impact_amplitude: k must be > 0");

  const double dphi = 2.0 * kPi / fq.grid.n_phi;
  detail::KahanSum acc;
  for (std::size_t ir = 0; ir < fq.grid.r_nodes.size(); ++ir) {
    const double q = fq.grid.r_nodes[ir];
    const double wq = fq.grid.r_weights[ir] * q * dphi;
    for (int j = 0; j < fq.grid.n_phi; ++j) {
      const double phi = fq.grid.phi(j);
      const double phase = q * (std::cos(phi) * b.x + std::sin(phi) * b.y);
      acc.add(fq.values[fq.grid.index(ir, j)] *
              std::complex<double>(std::cos(phase), std::sin(phase)) * wq);
    }
  }
  return acc.get() / (2.0 * kPi * fq.k);
}

/// BProfile over a polar b-grid; b-points evaluate independently and land
/// in deterministic grid order.
inline BProfile make_bprofile(const QProfile& fq, double b_max, int n_b, int n_phi_b) {
  BProfile ab;
  ab.grid = PolarGrid::make(b_max, n_b, n_phi_b);
  ab.k = fq.k;
  ab.values.resize(ab.grid.size());
  for (std::size_t ir = 0; ir < ab.grid.r_nodes.size(); ++ir) {
    for (int j = 0; j < ab.grid.n_phi; ++j) {
      const double b = ab.grid.r_nodes[ir];
      const double phi = ab.grid.phi(j);
      ab.values[ab.grid.index(ir, j)] =
          impact_amplitude(fq, {b * std::cos(phi), b * std::sin(phi)});
    }
  }
  return ab;
}

struct ParsevalResult {
  // With a(b) = 1/(2 pi k) integral e^{iq.b} f(q) d2q, Plancherel gives
  // sigma_b = (1/k^2) integral |f|^2 d2q, which is also the small-angle
  // limit of sigma = integral |f|^2 dOmega.
  double sigma_q = 0.0;    // (1/k^2) * integral |f|^2 d2q
  double sigma_b = 0.0;    // integral |a|^2 d2b
  double rel_diff = 0.0;
  double max_probability = 0.0;  // max |a(b)|^2 over the grid (diagnostic)
  bool probability_bound_ok = true;
};

/// Both sides of the total-cross-section identity between the q-space and
/// b-space pictures. Throws CoverageError when the b-grid truncates
/// amplitude above 1e-6 of the peak at its boundary.
inline ParsevalResult parseval_check(const QProfile& fq, const BProfile& ab) {
  if (fq.values.empty() || ab.values.empty())
    throw DomainError("parseval_check: empty profile");
  if (fq.values.size() != fq.grid.size() || ab.values.size() != ab.grid.size())
    throw DomainError("parseval_check: profile size does not match its grid");

  auto polar_norm2 = [](const PolarGrid& g,
                        const std::vector<std::complex<double>>& v) {
    const double dphi = 2.0 * kPi / g.n_phi;
    detail::KahanSum acc;
    for (std::size_t ir = 0; ir < g.r_nodes.size(); ++ir)
      for (int j = 0; j < g.n_phi; ++j)
        acc.add(std::norm(v[g.index(ir, j)]) * g.r_weights[ir] * g.r_nodes[ir] * dphi);
    return acc.get().real();
  };

  double peak = 0.0, boundary = 0.0;
  const std::size_t last_ring = ab.grid.r_nodes.size() - 1;
  for (std::size_t ir = 0; ir < ab.grid.r_nodes.size(); ++ir)
    for (int j = 0; j < ab.grid.n_phi; ++j) {
      const double p = std::norm(ab.values[ab.grid.index(ir, j)]);
      peak = std::max(peak, p);
      if (ir == last_ring) boundary = std::max(boundary, p);
    }
  if (peak > 0.0 && boundary > 1e-6 * peak) {
    std::ostringstream os;
    os << "parseval_check: boundary |a|^2 is " << boundary / peak
       << " of the peak (> 1e-6); extend the b-grid";
    throw CoverageError(os.str());
  }

  ParsevalResult out;
  out.sigma_q = polar_norm2(fq.grid, fq.values) / (fq.k * fq.k);
  out.sigma_b = polar_norm2(ab.grid, ab.values);
  const double scale = std::max(std::abs(out.sigma_q), std::abs(out.sigma_b));
  out.rel_diff = scale > 0.0 ? std::abs(out.sigma_q - out.sigma_b) / scale : 0.0;
  out.max_probability = peak;
  // first-order amplitudes may legitimately exceed unity; report, don't fail
  out.probability_bound_ok = peak <= 1.0;
  return out;
}

}  // namespace vff

#endif
