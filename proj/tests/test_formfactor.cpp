#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "vortexff/formfactor.hpp"

using namespace vff;
using Catch::Approx;

namespace {
const AtomicState k1s{1, 0, 0, {}};

// hydrogen 1s elastic form factor, closed form
double ff_1s(double q) { return 1.0 / std::pow(1.0 + q * q / 4.0, 2); }
}  // namespace

TEST_CASE("scattering geometry") {
  const double k = 2.0 * kPi / 100.0;
  SECTION("elastic |q| = 2 k sin(Theta/2)") {
    for (double th : {0.0, 0.3, 1.0, kPi / 2.0, kPi}) {
      const auto g = ScatteringGeometry::elastic(k, th);
      CHECK(g.q().norm() == Approx(2.0 * k * std::sin(th / 2.0)).margin(1e-15));
      CHECK(g.k_f_direction().norm() == Approx(1.0).epsilon(1e-15));
    }
  }
  SECTION("q lies in the y-z scattering plane") {
    const ScatteringGeometry g{k, 0.8 * k, 0.7};
    CHECK(g.q().x == 0.0);
    CHECK(g.q().y == Approx(-0.8 * k * std::sin(0.7)).epsilon(1e-15));
    CHECK(g.q().z == Approx(k - 0.8 * k * std::cos(0.7)).epsilon(1e-15));
  }
  CHECK_THROWS_AS((ScatteringGeometry{0.0, k, 0.1}.validate()), DomainError);
  CHECK_THROWS_AS((ScatteringGeometry{k, k, -0.1}.validate()), DomainError);
  CHECK_THROWS_AS((ScatteringGeometry{k, k, 4.0}.validate()), DomainError);
}

TEST_CASE("rotation to the scattered frame") {
  const Vec3 r{0.3, -1.2, 2.5};
  SECTION("Theta = 0 is the identity") {
    CHECK(rotate_to_scattered_frame(r, 0.0) == r);
  }
  SECTION("norm preserved and z' = r . k_f_hat") {
    for (double th : {0.2, 1.1, 2.7}) {
      const Vec3 rp = rotate_to_scattered_frame(r, th);
      CHECK(rp.norm() == Approx(r.norm()).epsilon(1e-15));
      const ScatteringGeometry g{1.0, 1.0, th};
      CHECK(rp.z == Approx(r.dot(g.k_f_direction())).epsilon(1e-14));
    }
  }
}

TEST_CASE("default grid and coverage checks") {
  const AtomicState shifted{2, 1, 0, {5.0, 0.0, 0.0}};
  const GridSpec grid = default_grid(k1s, shifted, 48, 2);
  CHECK_NOTHROW(detail::check_grid_covers(grid, k1s));
  CHECK_NOTHROW(detail::check_grid_covers(grid, shifted));

  // a box sized for 1s alone cannot cover the shifted 2p state
  const GridSpec small = default_grid(k1s, k1s, 48, 2);
  CHECK_THROWS_AS(detail::check_grid_covers(small, shifted), GridCoverageError);
  try {
    detail::check_grid_covers(small, shifted);
  } catch (const GridCoverageError& e) {
    CHECK(std::string(e.what()).find("required box") != std::string::npos);
  }
  CHECK_THROWS_AS(plane_wave_ff(k1s, shifted, {0.0, 0.0, 1.0}, small),
                  GridCoverageError);
}

TEST_CASE("plane-wave form factor against the 1s closed form") {
  const GridSpec grid = default_grid(k1s, k1s, 96, 2);
  for (double q : {0.0, 0.5, 1.0, 2.0}) {
    const auto r = plane_wave_ff(k1s, k1s, {0.0, 0.0, q}, grid);
    CHECK(r.value.real() == Approx(ff_1s(q)).margin(1e-6));
    CHECK(std::abs(r.value.imag()) < 1e-10);
    CHECK(r.abs_error_estimate < 1e-5);
  }
  SECTION("the 1s form factor is isotropic in q") {
    const auto a = plane_wave_ff(k1s, k1s, {0.0, 0.0, 1.0}, grid);
    const auto b = plane_wave_ff(k1s, k1s, {0.6, 0.0, 0.8}, grid);
    CHECK(std::abs(a.value - b.value) < 1e-6);
  }
}

TEST_CASE("plane-wave form factor symmetries") {
  const GridSpec grid = default_grid(k1s, k1s, 48, 1);
  SECTION("orthogonality at q = 0") {
    const AtomicState s2{2, 0, 0, {}};
    const GridSpec big = default_grid(k1s, s2, 64, 2);
    CHECK(std::abs(plane_wave_ff(k1s, s2, {0.0, 0.0, 0.0}, big).value) < 1e-6);
  }
  SECTION("M(-q) = conj(M(q)) for real wavefunctions") {
    const Vec3 q{0.4, -0.3, 0.9};
    const auto plus = plane_wave_ff(k1s, k1s, q, grid);
    const auto minus = plane_wave_ff(k1s, k1s, -q, grid);
    CHECK(std::abs(minus.value - std::conj(plus.value)) < 1e-13);
  }
  SECTION("rigid shift of both states multiplies M by e^{iq.b}") {
    const Vec3 b{1.5, -0.8, 0.6};
    const Vec3 q{0.7, 0.2, -1.1};
    const AtomicState moved{1, 0, 0, b};
    const GridSpec mg = default_grid(moved, moved, 48, 1);
    const auto m0 = plane_wave_ff(k1s, k1s, q, grid);
    const auto mb = plane_wave_ff(moved, moved, q, mg);
    const auto expect =
        m0.value * std::exp(std::complex<double>(0.0, q.dot(b)));
    CHECK(std::abs(mb.value - expect) < 1e-6);
  }
}

TEST_CASE("vortex form factor reduces to the plane-wave one for wide beams") {
  const BeamParams beam{100.0, 1e5, 0, 0};  // w0 ~ 1784 bohr >> atom
  const double k = beam.wavenumber();
  for (double th : {0.0, 0.5}) {
    const auto geom = ScatteringGeometry::elastic(k, th);
    const GridSpec grid = default_grid(k1s, k1s, 64, 2);
    const auto mv = vortex_ff(k1s, k1s, beam, beam, geom, grid);
    const auto mp = plane_wave_ff(k1s, k1s, geom.q(), grid);
    CHECK(std::abs(mv.value - mp.value) < 1e-4);
    CHECK_FALSE(mv.paraxial_warning);
  }
}

TEST_CASE("vortex form factor azimuthal selection rule at Theta = 0") {
  const BeamParams in{100.0, 1e4, 0, 1};
  const BeamParams out_forbidden{100.0, 1e4, 0, 0};
  const BeamParams out_allowed{100.0, 1e4, 0, 1};
  const auto geom = ScatteringGeometry::elastic(in.wavenumber(), 0.0);
  const GridSpec grid = default_grid(k1s, k1s, 48, 1);

  const auto allowed = vortex_ff(k1s, k1s, in, out_allowed, geom, grid);
  const auto reference =
      vortex_ff(k1s, k1s, out_forbidden, out_forbidden, geom, grid);
  const auto forbidden = vortex_ff(k1s, k1s, in, out_forbidden, geom, grid);
  CHECK(std::abs(reference.value) > 0.1);
  CHECK(std::abs(forbidden.value) < 1e-10 * std::abs(reference.value));
  // allowed ell_i = ell_f = 1 survives, suppressed only by (r/w0)^2
  CHECK(std::abs(allowed.value) > 1e-10 * std::abs(reference.value));
}

TEST_CASE("vortex form factor input checks") {
  const BeamParams beam{100.0, 1e4, 0, 0};
  const GridSpec grid = default_grid(k1s, k1s, 48, 1);
  SECTION("geometry wavenumbers must match the beams") {
    const ScatteringGeometry bad{1.0, beam.wavenumber(), 0.1};
    CHECK_THROWS_AS(vortex_ff(k1s, k1s, beam, beam, bad, grid), DomainError);
  }
  SECTION("tight beams raise the paraxial flag") {
    const BeamParams tight{100.0, 60.0, 0, 0};
    const auto geom = ScatteringGeometry::elastic(tight.wavenumber(), 0.0);
    const auto r = vortex_ff(k1s, k1s, tight, tight, geom, grid);
    CHECK(r.paraxial_warning);
  }
}

TEST_CASE("structure factor") {
  const Vec3 q{0.3, -0.2, 0.9};
  CHECK(structure_factor(q, {Vec3{}}) == std::complex<double>(1.0, 0.0));

  const Vec3 d{1.0, 2.0, -0.5};
  const auto two = structure_factor(q, {d, -d});
  CHECK(two.real() == Approx(2.0 * std::cos(q.dot(d))).epsilon(1e-14));
  CHECK(two.imag() == Approx(0.0).margin(1e-15));

  // |G| <= number of centers
  const std::vector<Vec3> many{{0, 0, 0}, {1, 0, 0}, {0, 2, 0}, {3, 1, -1}};
  CHECK(std::abs(structure_factor(q, many)) <= 4.0 + 1e-12);

  CHECK_THROWS_AS(structure_factor(q, {}), DomainError);
}
