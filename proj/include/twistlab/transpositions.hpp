#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "twistlab/linalg.hpp"
#include "twistlab/permutation.hpp"
#include "twistlab/random.hpp"
#include "twistlab/verification.hpp"

namespace twistlab {

namespace mtheta {
struct ThetaPoint;
}

/// Matrix with a fixed order on its eigenvalues (points of the ordered space).
struct OrderedMatrix {
  CMatrix matrix;
  Spectrum spectrum;
};

using ThetaPointRef = std::shared_ptr<const mtheta::ThetaPoint>;

/// A spectral parameter. Matrix points also carry column vectors (points of C^m).
using Point = std::variant<Complex, CMatrix, OrderedMatrix, ThetaPointRef>;
using PointPair = std::pair<Point, Point>;

enum class DomainKind { Scalar, Matrix, OrderedMatrix, Theta };

std::string to_string(DomainKind kind);

/// A birational map mu(u, v) = (phi(u, v), psi(u, v)) on U x U together with
/// what is needed to test it numerically: a sampler for generic points of U
/// and a scale-relative distance.
///
/// `apply` throws a genericity failure (NonGeneric, SpectraOverlap, ...) when
/// the pair is outside the domain; `is_generic` is the cheap pre-check.
struct TwistedMap {
  std::string name;
  DomainKind domain = DomainKind::Scalar;
  std::function<PointPair(const Point&, const Point&)> apply;
  std::function<bool(const Point&, const Point&)> is_generic;
  std::function<Point(Rng&)> sample;
  std::function<double(const Point&, const Point&)> distance;
};

struct MapParams {
  std::size_t m = 2;             // matrix size for matrix_rational
  Complex q_scale{1.0, 0.0};     // q(u) = q_scale * u + q_shift
  Complex q_shift{0.0, 0.0};
};

/// q_swap, scalar_rational or matrix_rational; anything else is UnknownMap.
TwistedMap builtin_map(const std::string& name, const MapParams& params = {});

const Complex& as_scalar(const Point& p);
const CMatrix& as_matrix(const Point& p);
const OrderedMatrix& as_ordered(const Point& p);
const mtheta::ThetaPoint& as_theta(const Point& p);

/// Scale-relative distance used for scalar and matrix points.
double point_distance(const Point& a, const Point& b);

VerificationReport verify_involution(const TwistedMap& map, std::size_t samples, std::uint64_t seed,
                                     double tol, Execution exec = Execution::Parallel);
VerificationReport verify_braid(const TwistedMap& map, std::size_t samples, std::uint64_t seed,
                                double tol, Execution exec = Execution::Parallel);

/// Residual of mu(mu(u, v)) against (u, v).
double involution_residual(const TwistedMap& map, const Point& u, const Point& v);
/// Componentwise residual between sigma1 sigma2 sigma1 and sigma2 sigma1 sigma2 at (u, v, w).
double braid_residual(const TwistedMap& map, const Point& u, const Point& v, const Point& w);

/// Applies sigma_i = id x mu x id (one-based i) letter by letter.
std::vector<Point> act(const TwistedMap& map, const SigmaWord& word, std::vector<Point> tuple);

/// phi(u1, phi(u2, ... phi(uN, w))) and psi(... psi(psi(w, u1), u2) ..., uN).
PointPair chain_invariants(const TwistedMap& map, const std::vector<Point>& us, const Point& w);

}  // namespace twistlab
