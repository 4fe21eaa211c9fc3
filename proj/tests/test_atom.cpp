#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "vortexff/atom.hpp"
#include "vortexff/quadrature.hpp"

using namespace vff;
using Catch::Approx;

TEST_CASE("wavefunction values") {
  const AtomicState s1{1, 0, 0, {}};
  CHECK(wavefunction(s1, {0.0, 0.0, 0.0}).real() ==
        Approx(1.0 / std::sqrt(kPi)).epsilon(1e-14));

  const Vec3 c{3.0, -1.0, 0.5};
  const AtomicState shifted{1, 0, 0, c};
  CHECK(wavefunction(shifted, c) == wavefunction(s1, {0.0, 0.0, 0.0}));

  const AtomicState p0{2, 1, 0, {}};
  const double expect = hydrogenic_radial(2, 1, 1.0) * std::sqrt(3.0 / (4.0 * kPi));
  CHECK(wavefunction(p0, {0.0, 0.0, 1.0}).real() == Approx(expect).epsilon(1e-13));
  CHECK(wavefunction(p0, {0.0, 0.0, 1.0}).imag() == Approx(0.0).margin(1e-16));
}

TEST_CASE("shift covariance is exact") {
  const Vec3 c{1.25, -0.5, 2.0};
  const AtomicState origin{3, 2, -1, {}};
  const AtomicState moved{3, 2, -1, c};
  for (const Vec3 r : {Vec3{0.3, 0.7, -1.1}, Vec3{2.0, 2.0, 2.0}, Vec3{-4.0, 0.1, 0.0}})
    CHECK(wavefunction(moved, r) == wavefunction(origin, r - c));
}

TEST_CASE("parity (-1)^L for origin-centered states") {
  for (const AtomicState s : {AtomicState{1, 0, 0, {}}, AtomicState{2, 1, 1, {}},
                              AtomicState{3, 2, -2, {}}, AtomicState{3, 1, 0, {}}}) {
    const Vec3 r{0.8, -0.4, 1.3};
    const auto even = wavefunction(s, r);
    const auto odd = wavefunction(s, -r);
    const double sign = (s.L % 2 == 0) ? 1.0 : -1.0;
    CHECK(std::abs(odd - sign * even) < 1e-15 * std::abs(even) + 1e-300);
  }
}

TEST_CASE("normalization over the support box within 1e-6") {
  for (int N = 1; N <= 3; ++N)
    for (int L = 0; L < N; ++L)
      for (int M = -L; M <= L; ++M) {
        const AtomicState s{N, L, M, {}};
        const double hw = 1.2 * support_radius(s, 1e-12);
        const GridSpec grid{{}, {hw, hw, hw}, 80, 1};
        const QuadResult norm = integrate_3d(
            [&](const Vec3& r) {
              return std::complex<double>(std::norm(wavefunction(s, r)), 0.0);
            },
            grid);
        CHECK(norm.value.real() == Approx(1.0).margin(1e-6));
      }
}

TEST_CASE("support radius") {
  const AtomicState s1{1, 0, 0, {}};

  SECTION("floor 1 returns the density maximum, r = 1 bohr for 1s") {
    CHECK(support_radius(s1, 1.0) == Approx(1.0).margin(1e-6));
  }

  SECTION("floor 1e-12 matches an independent bisection of r^2 e^{-2r}") {
    // oracle: outermost solution of r^2 e^{-2r} = 1e-12 * e^{-2}
    const double target = 1e-12 * std::exp(-2.0);
    double lo = 1.0, hi = 100.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid * mid * std::exp(-2.0 * mid) >= target)
        lo = mid;
      else
        hi = mid;
    }
    const double oracle = 0.5 * (lo + hi);
    CHECK(support_radius(s1, 1e-12) == Approx(oracle).epsilon(1e-6));
    CHECK(support_radius(s1, 1e-12) == Approx(17.69).margin(0.05));
  }

  SECTION("monotone in the floor") {
    CHECK(support_radius(s1, 1e-14) >= support_radius(s1, 1e-12));
  }

  CHECK_THROWS_AS(support_radius(s1, 0.0), DomainError);
  CHECK_THROWS_AS(support_radius(s1, 2.0), DomainError);
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(wavefunction({0, 0, 0, {}}, {}), DomainError);
  CHECK_THROWS_AS(wavefunction({1, 1, 0, {}}, {}), DomainError);
  CHECK_THROWS_AS(wavefunction({2, 1, 2, {}}, {}), DomainError);
}
