#ifndef VORTEXFF_QUADRATURE_HPP
#define VORTEXFF_QUADRATURE_HPP

// Deterministic tensor-product quadrature on a Cartesian box.
//
// Each axis carries a composite Gauss-Legendre rule split at the box center,
// so an integrand cusp placed at the center (the nucleus of a hydrogenic
// state) sits on panel endpoints where Gauss nodes cluster. Refinement
// multiplies the per-axis node count by 1.5 (rounded up to even) and the
// error estimate is the difference between consecutive levels.
//
// Sample evaluation may fan out across threads; the reduction runs over
// fixed-size blocks in a fixed order with compensated accumulation, so the
// result is bit-identical for any worker count.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vortexff/errors.hpp"
#include "vortexff/specfun.hpp"
#include "vortexff/vec3.hpp"

namespace vff {

struct GridSpec {
  Vec3 center{};
  Vec3 half_widths{};
  int nodes_per_axis = 48;
  int refinement_levels = 3;

  void validate() const {
    if (!(half_widths.x > 0.0 && half_widths.y > 0.0 && half_widths.z > 0.0))
      throw DomainError("GridSpec: half_widths must be strictly positive");
    if (nodes_per_axis < 4) throw DomainError("GridSpec: nodes_per_axis must be >= 4");
    if (nodes_per_axis % 2 != 0)
      throw DomainError("GridSpec: nodes_per_axis must be even");
    if (refinement_levels < 1)
      throw DomainError("GridSpec: refinement_levels must be >= 1");
    if (!center.finite() || !half_widths.finite())
      throw DomainError("GridSpec: non-finite geometry");
  }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.center == b.center && a.half_widths == b.half_widths &&
           a.nodes_per_axis == b.nodes_per_axis &&
           a.refinement_levels == b.refinement_levels;
  }
};

struct QuadResult {
  std::complex<double> value{};
  double abs_error_estimate = 0.0;
  int levels_used = 0;
  bool resolution_warning = false;
  std::string warning;
};

namespace detail {

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
/// Deterministic; cached per order.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> x(n), w(n);
  const int mid = (n + 1) / 2;
  for (int i = 0; i < mid; ++i) {
    double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double wi = 2.0 / ((1.0 - xi * xi) * dp * dp);
    x[i] = -xi;
    x[n - 1 - i] = xi;
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

/// Per-axis composite rule: two Gauss-Legendre panels [c-h, c] and [c, c+h]
/// with n/2 nodes each (n even).
inline void split_axis_rule(double c, double h, int n, std::vector<double>& nodes,
                            std::vector<double>& weights) {
  const auto& [x, w] = gauss_legendre(n / 2);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n / 2; ++i) {
    // panel [c-h, c]
    nodes[i] = (c - 0.5 * h) + 0.5 * h * x[i];
    weights[i] = 0.5 * h * w[i];
    // panel [c, c+h]
    nodes[n / 2 + i] = (c + 0.5 * h) + 0.5 * h * x[i];
    weights[n / 2 + i] = 0.5 * h * w[i];
  }
}

inline int round_up_even(double v) {
  int n = static_cast<int>(std::ceil(v));
  if (n % 2 != 0) ++n;
  return n;
}

/// Kahan-compensated sum of complex values in index order.
class KahanSum {
 public:
  void add(std::complex<double> v) {
    add1(re_, cre_, v.real());
    add1(im_, cim_, v.imag());
  }
  std::complex<double> get() const { return {re_, im_}; }

 private:
  static void add1(double& s, double& c, double v) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double re_ = 0.0, im_ = 0.0, cre_ = 0.0, cim_ = 0.0;
};

constexpr std::size_t kReductionBlock = 4096;

}  // namespace detail

inline int hardware_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

/// Tensor-product integral of a complex field over the box described by
/// `grid`. `max_phase_gradient` (1/bohr), when positive, is the caller's
/// bound on the integrand's phase gradient; the engine flags grids with
/// fewer than 6 samples per implied oscillation wavelength.
template <typename F>
QuadResult integrate_3d(F&& f, const GridSpec& grid, int threads = 1,
                        double max_phase_gradient = 0.0) {
  grid.validate();
  if (threads < 1) threads = 1;

  QuadResult result;
  const std::array<double, 3> hw = {grid.half_widths.x, grid.half_widths.y,
                                    grid.half_widths.z};
  const std::array<double, 3> ctr = {grid.center.x, grid.center.y, grid.center.z};

  if (max_phase_gradient > 0.0) {
    const double wavelength = 2.0 * kPi / max_phase_gradient;
    for (int a = 0; a < 3; ++a) {
      const double spacing = 2.0 * hw[a] / grid.nodes_per_axis;
      if (wavelength / spacing < 6.0) {
        result.resolution_warning = true;
        std::ostringstream os;
        os << "axis " << a << ": " << wavelength / spacing
           << " samples per oscillation wavelength (< 6)";
        result.warning = os.str();
        break;
      }
    }
  }

  std::complex<double> previous{};
  double n_eff = grid.nodes_per_axis;
  for (int level = 0; level < grid.refinement_levels; ++level) {
    const int n = detail::round_up_even(n_eff);
    n_eff *= 1.5;

    std::array<std::vector<double>, 3> nodes, weights;
    for (int a = 0; a < 3; ++a)
      detail::split_axis_rule(ctr[a], hw[a], n, nodes[a], weights[a]);

    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    const std::size_t nblocks =
        (total + detail::kReductionBlock - 1) / detail::kReductionBlock;
    std::vector<std::complex<double>> block_sums(nblocks);
    std::vector<std::string> block_errors(nblocks);

    auto run_blocks = [&](std::size_t b0, std::size_t b1) {
      for (std::size_t b = b0; b < b1; ++b) {
        detail::KahanSum acc;
        const std::size_t lo = b * detail::kReductionBlock;
        const std::size_t hi = std::min(lo + detail::kReductionBlock, total);
        for (std::size_t idx = lo; idx < hi; ++idx) {
          const int k = static_cast<int>(idx % n);
          const int j = static_cast<int>((idx / n) % n);
          const int i = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
          const Vec3 r{nodes[0][i], nodes[1][j], nodes[2][k]};
          const std::complex<double> v = f(r);
          if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream os;
            os << "non-finite sample at (" << r.x << ", " << r.y << ", " << r.z << ")";
            block_errors[b] = os.str();
            return;
          }
          acc.add(v * (weights[0][i] * weights[1][j] * weights[2][k]));
        }
        block_sums[b] = acc.get();
      }
    };

    const int nworkers = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(threads), nblocks));
    if (nworkers <= 1) {
      run_blocks(0, nblocks);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(nworkers);
      const std::size_t chunk = (nblocks + nworkers - 1) / nworkers;
      for (int t = 0; t < nworkers; ++t) {
        const std::size_t b0 = std::min(nblocks, t * chunk);
        const std::size_t b1 = std::min(nblocks, b0 + chunk);
        pool.emplace_back(run_blocks, b0, b1);
      }
      for (auto& th : pool) th.join();
    }
    for (const auto& e : block_errors)
      if (!e.empty()) throw EvaluationError("integrate_3d: " + e);

    detail::KahanSum acc;
    for (const auto& s : block_sums) acc.add(s);
    const std::complex<double> value = acc.get();

    if (level > 0) result.abs_error_estimate = std::abs(value - previous);
    previous = value;
    result.value = value;
    result.levels_used = level + 1;
  }
  return result;
}

/// Polar 2D integral over the disk rho <= rho_max: Gauss-Legendre in rho,
/// uniform trapezoid in phi (exact for finite Fourier content). `g` is
/// called as g(rho, phi).
template <typename G>
std::complex<double> integrate_polar_2d(G&& g, double rho_max, int nodes,
                                        int phi_nodes = 0) {
  if (!(rho_max > 0.0)) throw DomainError("integrate_polar_2d: rho_max must be > 0");
  if (nodes < 2) throw DomainError("integrate_polar_2d: nodes must be >= 2");
  if (phi_nodes <= 0) phi_nodes = nodes;

  const auto& [x, w] = detail::gauss_legendre(nodes);
  const double dphi = 2.0 * kPi / phi_nodes;
  detail::KahanSum acc;
  for (int i = 0; i < nodes; ++i) {
    const double rho = 0.5 * rho_max * (x[i] + 1.0);
    const double wr = 0.5 * rho_max * w[i] * rho;
    for (int j = 0; j < phi_nodes; ++j) {
      const double phi = dphi * j;
      const std::complex<double> v = g(rho, phi);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os << "integrate_polar_2d: non-finite sample at (rho=" << rho
           << ", phi=" << phi << ")";
        throw EvaluationError(os.str());
      }
      acc.add(v * (wr * dphi));
    }
  }
  return acc.get();
}

}  // namespace vff

#endif
