#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "vortexff/quadrature.hpp"

using namespace vff;
using Catch::Approx;

namespace {
std::complex<double> gaussian(const Vec3& r) { return {std::exp(-r.dot(r)), 0.0}; }
}

TEST_CASE("constant field integrates to the box volume") {
  const GridSpec grid{{1.0, -2.0, 0.5}, {2.0, 3.0, 0.25}, 8, 1};
  const auto r = integrate_3d([](const Vec3&) { return std::complex<double>(1.0, 0.0); },
                              grid);
  CHECK(r.value.real() == Approx(4.0 * 6.0 * 0.5).epsilon(1e-14));
  CHECK(r.value.imag() == 0.0);
  CHECK(r.levels_used == 1);
}

TEST_CASE("separable Gaussian on (6,6,6) equals pi^(3/2)") {
  const GridSpec grid{{}, {6.0, 6.0, 6.0}, 48, 2};
  const auto r = integrate_3d(gaussian, grid);
  CHECK(r.value.real() == Approx(std::pow(kPi, 1.5)).margin(1e-10));
  CHECK(r.abs_error_estimate >= 0.0);
  CHECK(r.levels_used == 2);
}

TEST_CASE("odd integrand cancels on a symmetric box") {
  const GridSpec grid{{}, {6.0, 6.0, 6.0}, 32, 1};
  const auto odd = integrate_3d(
      [](const Vec3& r) { return std::complex<double>(r.x * std::exp(-r.dot(r)), 0.0); },
      grid);
  const auto even = integrate_3d(gaussian, grid);
  CHECK(std::abs(odd.value) < 1e-13 * std::abs(even.value));
}

TEST_CASE("results are bit-identical across worker counts") {
  const GridSpec grid{{0.3, 0.0, -0.1}, {5.0, 4.0, 6.0}, 36, 2};
  auto f = [](const Vec3& r) {
    return std::exp(std::complex<double>(-0.1 * r.dot(r), 1.7 * r.z + 0.4 * r.x));
  };
  const auto r1 = integrate_3d(f, grid, 1);
  const auto r4 = integrate_3d(f, grid, 4);
  const auto r8 = integrate_3d(f, grid, 8);
  CHECK(r1.value.real() == r4.value.real());
  CHECK(r1.value.imag() == r4.value.imag());
  CHECK(r1.value.real() == r8.value.real());
  CHECK(r1.value.imag() == r8.value.imag());
  CHECK(r1.abs_error_estimate == r8.abs_error_estimate);
}

TEST_CASE("refinement shrinks the error for smooth integrands") {
  // error estimate at each level must fall by >= 10x until the 1e-12 floor
  const GridSpec base{{}, {6.0, 6.0, 6.0}, 8, 1};
  std::vector<double> values;
  for (int n : {8, 12, 24, 42, 64}) {
    GridSpec g = base;
    g.nodes_per_axis = n;
    values.push_back(integrate_3d(gaussian, g).value.real());
  }
  const double exact = std::pow(kPi, 1.5);
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double prev = std::abs(values[i - 1] - exact);
    const double cur = std::abs(values[i] - exact);
    if (prev > 1e-12) CHECK(cur <= prev / 10.0);
  }
}

TEST_CASE("oscillation resolution guard") {
  const GridSpec coarse{{}, {6.0, 6.0, 6.0}, 12, 1};
  auto f = [](const Vec3& r) {
    return std::exp(std::complex<double>(0.0, 50.0 * r.z));
  };
  const auto warned = integrate_3d(f, coarse, 1, 50.0);
  CHECK(warned.resolution_warning);
  CHECK_FALSE(warned.warning.empty());

  GridSpec fine = coarse;
  fine.nodes_per_axis = 600;
  const auto ok = integrate_3d(f, fine, 1, 50.0);
  CHECK_FALSE(ok.resolution_warning);
}

TEST_CASE("non-finite samples are reported with their coordinate") {
  const GridSpec grid{{}, {1.0, 1.0, 1.0}, 8, 1};
  auto f = [](const Vec3& r) {
    return std::complex<double>(r.x > 0.5 ? std::nan("") : 1.0, 0.0);
  };
  CHECK_THROWS_AS(integrate_3d(f, grid), EvaluationError);
  try {
    integrate_3d(f, grid);
  } catch (const EvaluationError& e) {
    CHECK(std::string(e.what()).find("non-finite sample at (") != std::string::npos);
  }
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(integrate_3d(gaussian, GridSpec{{}, {1.0, 0.0, 1.0}, 8, 1}),
                  DomainError);
  CHECK_THROWS_AS(integrate_3d(gaussian, GridSpec{{}, {1.0, 1.0, 1.0}, 7, 1}),
                  DomainError);
  CHECK_THROWS_AS(integrate_3d(gaussian, GridSpec{{}, {1.0, 1.0, 1.0}, 2, 1}),
                  DomainError);
  CHECK_THROWS_AS(integrate_3d(gaussian, GridSpec{{}, {1.0, 1.0, 1.0}, 8, 0}),
                  DomainError);
}

TEST_CASE("polar 2D rule") {
  SECTION("disk area") {
    const auto a = integrate_polar_2d(
        [](double, double) { return std::complex<double>(1.0, 0.0); }, 3.0, 32, 8);
    CHECK(a.real() == Approx(kPi * 9.0).epsilon(1e-13));
  }
  SECTION("azimuthal orthogonality of e^{i phi}") {
    const auto v = integrate_polar_2d(
        [](double, double phi) {
          return std::exp(std::complex<double>(0.0, phi));
        },
        2.0, 16, 16);
    CHECK(std::abs(v) < 1e-14);
  }
  SECTION("radial Gaussian") {
    const double R = 8.0;
    const auto v = integrate_polar_2d(
        [](double rho, double) {
          return std::complex<double>(std::exp(-rho * rho), 0.0);
        },
        R, 64, 4);
    CHECK(v.real() == Approx(kPi * (1.0 - std::exp(-R * R))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(integrate_polar_2d(
                      [](double, double) { return std::complex<double>(1.0, 0.0); },
                      -1.0, 16),
                  DomainError);
}
