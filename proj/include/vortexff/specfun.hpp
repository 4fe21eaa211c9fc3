#ifndef VORTEXFF_SPECFUN_HPP
#define VORTEXFF_SPECFUN_HPP

// Special functions for hydrogenic bound states and Laguerre-Gauss modes:
// generalized Laguerre polynomials, complex spherical harmonics and the
// hydrogenic radial functions R_NL (unit nuclear charge, lengths in bohr).

#include <cmath>
#include <complex>

#include "vortexff/errors.hpp"

namespace vff {

inline constexpr double kPi = 3.14159265358979323846;

/// Polynomial indices (p, alpha) of a generalized Laguerre polynomial
/// L_p^alpha; alpha plays the role of |ell| or 2L+1.
struct PolyIndex {
  int p = 0;
  int alpha = 0;

  void validate() const {
    if (p < 0) throw DomainError("PolyIndex: p must be >= 0");
    if (alpha < 0) throw DomainError("PolyIndex: alpha must be >= 0");
  }
};

inline double log_factorial(int n) {
  return std::lgamma(static_cast<double>(n) + 1.0);
}

/// Generalized Laguerre polynomial L_p^alpha(x) in the standard convention
/// (L_0 = 1, L_1 = 1 + alpha - x), evaluated by the ascending three-term
/// recurrence, which is stable for the moderate indices used here.
inline double assoc_laguerre(PolyIndex idx, double x) {
  idx.validate();
  if (!std::isfinite(x)) throw DomainError("assoc_laguerre: x is not finite");
  double lkm1 = 1.0;                     // L_0
  if (idx.p == 0) return lkm1;
  double lk = 1.0 + idx.alpha - x;       // L_1
  for (int k = 1; k < idx.p; ++k) {
    const double lkp1 =
        ((2.0 * k + idx.alpha + 1.0 - x) * lk - (k + idx.alpha) * lkm1) / (k + 1.0);
    lkm1 = lk;
    lk = lkp1;
  }
  return lk;
}

/// Orthonormal complex spherical harmonic Y_LM(theta, phi) with the
/// Condon-Shortley phase.
inline std::complex<double> spherical_harmonic(int L, int M, double theta, double phi) {
  if (L < 0 || std::abs(M) > L)
    throw DomainError("spherical_harmonic: require 0 <= L and |M| <= L");
  const int m = std::abs(M);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);

  // P_m^m(ct) = (-1)^m (2m-1)!! (1-ct^2)^{m/2}, then ascend in L.
  double pmm = 1.0;
  for (int k = 1; k <= m; ++k) pmm *= -(2.0 * k - 1.0) * st;
  double plm = pmm;
  if (L > m) {
    double pm1 = pmm;                       // P_m^m
    double pl = ct * (2.0 * m + 1.0) * pmm; // P_{m+1}^m
    for (int l = m + 2; l <= L; ++l) {
      const double pnew = ((2.0 * l - 1.0) * ct * pl - (l + m - 1.0) * pm1) / (l - m);
      pm1 = pl;
      pl = pnew;
    }
    plm = pl;
  }

  const double lognorm =
      0.5 * (std::log((2.0 * L + 1.0) / (4.0 * kPi)) + log_factorial(L - m) -
             log_factorial(L + m));
  const double norm = std::exp(lognorm);
  std::complex<double> y =
      norm * plm * std::complex<double>(std::cos(m * phi), std::sin(m * phi));
  if (M < 0) {
    y = std::conj(y);
    if (m % 2 != 0) y = -y;
  }
  return y;
}

/// Hydrogenic radial function R_NL(r), normalized so that
/// integral R^2 r^2 dr = 1. Unit nuclear charge, r in bohr.
inline double hydrogenic_radial(int N, int L, double r) {
  if (N < 1 || L < 0 || L >= N)
    throw DomainError("hydrogenic_radial: require N >= 1 and 0 <= L < N");
  if (!(r >= 0.0)) throw DomainError("hydrogenic_radial: require r >= 0");
  const double x = 2.0 * r / N;
  // log of sqrt((2/N)^3 (N-L-1)! / (2N (N+L)!))
  const double lognorm = 0.5 * (3.0 * std::log(2.0 / N) + log_factorial(N - L - 1) -
                                std::log(2.0 * N) - log_factorial(N + L));
  const double lag = assoc_laguerre({N - L - 1, 2 * L + 1}, x);
  return std::exp(lognorm) * std::pow(x, L) * std::exp(-0.5 * x) * lag;
}

}  // namespace vff

#endif
