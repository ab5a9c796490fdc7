#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "twistlab/error.hpp"
#include "twistlab/mtheta.hpp"

namespace twistlab::mtheta {
namespace {

constexpr int kNewtonIterations = 60;
constexpr double kNewtonConverged = 1e-10;

// Refines a seed by Newton's method on det f with a central-difference
// derivative. Returns false when the iteration does not settle.
bool newton(const ThetaElement& f, Complex& z, double h) {
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kNewtonIterations; ++it) {
    const Complex d = f.det(z);
    const Complex dp = (f.det(z + h) - f.det(z - h)) / (2.0 * h);
    if (dp == Complex{} || !std::isfinite(std::abs(dp))) return false;
    const Complex step = d / dp;
    if (!std::isfinite(std::abs(step))) return false;
    z -= step;
    last = std::abs(step);
    if (last < 1e-14 * std::max(1.0, std::abs(z))) break;
  }
  return last < kNewtonConverged;
}

std::vector<Complex> locate(const ThetaElement& f, std::size_t grid, const ZeroOptions& options) {
  const LatticeParams& p = f.params();
  const std::vector<double> h = scan_det_grid(f, grid, options.exec);
  const auto g = static_cast<long>(grid);
  const auto at = [&](long t, long s) {
    return h[static_cast<std::size_t>(((t % g + g) % g) * g + (s % g + g) % g)];
  };
  std::vector<Complex> found;
  for (long t = 0; t < g; ++t)
    for (long s = 0; s < g; ++s) {
      const double v = at(t, s);
      bool minimum = true;
      for (long dt = -1; dt <= 1 && minimum; ++dt)
        for (long ds = -1; ds <= 1; ++ds)
          if ((dt != 0 || ds != 0) && at(t + dt, s + ds) < v) {
            minimum = false;
            break;
          }
      if (!minimum) continue;
      Complex z = cell_point(p, static_cast<double>(s) / grid, static_cast<double>(t) / grid);
      if (!newton(f, z, options.newton_step)) continue;
      z = reduce_to_cell(p, z);
      const bool seen = std::any_of(found.begin(), found.end(),
                                    [&](Complex w) { return cell_distance(p, z, w) < options.dedup; });
      if (!seen) found.push_back(z);
    }
  return found;
}

}  // namespace

std::vector<double> scan_det_grid(const ThetaElement& f, std::size_t grid, Execution exec) {
  const LatticeParams& p = f.params();
  const double md = static_cast<double>(p.m);
  const double big_n = md * static_cast<double>(p.n);
  const double t_im = p.tau.imag();
  const double c_im = md * p.c.imag();
  // With w = m z the weight exp(-pi N y^2 / T - b y), y = Im w, cancels the
  // growth of det f under w -> w + tau.
  const double b = (-2.0 * std::numbers::pi * c_im - std::numbers::pi * big_n * t_im) / t_im;
  std::vector<double> out(grid * grid);
  for_each_index(
      grid,
      [&](std::size_t t) {
        for (std::size_t s = 0; s < grid; ++s) {
          const Complex z = cell_point(p, static_cast<double>(s) / grid, static_cast<double>(t) / grid);
          const double y = md * z.imag();
          out[t * grid + s] = std::abs(f.det(z)) * std::exp(-std::numbers::pi * big_n * y * y / t_im - b * y);
        }
      },
      exec);
  return out;
}

std::vector<Complex> det_zeros(const ThetaElement& f, const ZeroOptions& options) {
  const LatticeParams& p = f.params();
  const std::size_t expected = p.m * p.n;
  std::vector<Complex> zeros = locate(f, options.grid, options);
  if (zeros.size() != expected) zeros = locate(f, 2 * options.grid, options);
  if (zeros.size() != expected)
    throw Error(ErrorKind::ZeroCountMismatch, "det_zeros: found " + std::to_string(zeros.size()) +
                                                  " zeros, expected " + std::to_string(expected));
  const double defect = sum_rule_defect(p, zeros);
  if (!(defect <= options.sum_tol))
    throw Error(ErrorKind::SumRuleViolated, "det_zeros: zero sum misses m c + m n / 2 by " + std::to_string(defect));
  linalg::sort_canonical(zeros);
  return zeros;
}

ThetaPoint make_theta_point(ThetaElement element, const ZeroOptions& options) {
  std::vector<Complex> zeros = det_zeros(element, options);
  return ThetaPoint{std::move(element), std::move(zeros)};
}

}  // namespace twistlab::mtheta
