#include "twistlab/transpositions.hpp"

#include <algorithm>
#include <cmath>

#include "twistlab/error.hpp"

namespace twistlab {

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Scalar: return "scalar";
    case DomainKind::Matrix: return "matrix";
    case DomainKind::OrderedMatrix: return "ordered_matrix";
    case DomainKind::Theta: return "theta";
  }
  return "unknown";
}

const Complex& as_scalar(const Point& p) {
  if (const auto* v = std::get_if<Complex>(&p)) return *v;
  throw Error(ErrorKind::DimensionMismatch, "expected a scalar point");
}

const CMatrix& as_matrix(const Point& p) {
  if (const auto* v = std::get_if<CMatrix>(&p)) return *v;
  throw Error(ErrorKind::DimensionMismatch, "expected a matrix point");
}

const OrderedMatrix& as_ordered(const Point& p) {
  if (const auto* v = std::get_if<OrderedMatrix>(&p)) return *v;
  throw Error(ErrorKind::DimensionMismatch, "expected an ordered-matrix point");
}

const mtheta::ThetaPoint& as_theta(const Point& p) {
  if (const auto* v = std::get_if<ThetaPointRef>(&p); v && *v) return **v;
  throw Error(ErrorKind::DimensionMismatch, "expected a theta point");
}

double point_distance(const Point& a, const Point& b) {
  if (a.index() != b.index()) return std::numeric_limits<double>::infinity();
  if (std::holds_alternative<Complex>(a))
    return linalg::relative_distance(std::get<Complex>(a), std::get<Complex>(b));
  if (std::holds_alternative<CMatrix>(a)) {
    const auto& x = std::get<CMatrix>(a);
    const auto& y = std::get<CMatrix>(b);
    if (x.rows() != y.rows() || x.cols() != y.cols()) return std::numeric_limits<double>::infinity();
    return linalg::relative_distance(x, y);
  }
  if (std::holds_alternative<OrderedMatrix>(a)) {
    const auto& x = std::get<OrderedMatrix>(a);
    const auto& y = std::get<OrderedMatrix>(b);
    if (x.matrix.rows() != y.matrix.rows() || x.spectrum.size() != y.spectrum.size())
      return std::numeric_limits<double>::infinity();
    double d = linalg::relative_distance(x.matrix, y.matrix);
    for (std::size_t i = 0; i < x.spectrum.size(); ++i)
      d = std::max(d, linalg::relative_distance(x.spectrum[i], y.spectrum[i]));
    return d;
  }
  throw Error(ErrorKind::DimensionMismatch, "point_distance: theta points need the theta metric");
}

namespace {

constexpr double kScalarGate = 1e-7;

TwistedMap q_swap(Complex scale, Complex shift) {
  if (std::abs(scale) < kScalarGate)
    throw Error(ErrorKind::NonGeneric, "q_swap: q must be invertible (scale != 0)");
  TwistedMap map;
  map.name = "q_swap";
  map.domain = DomainKind::Scalar;
  map.apply = [scale, shift](const Point& u, const Point& v) -> PointPair {
    const Complex q_of_v = scale * as_scalar(v) + shift;
    const Complex q_inv_of_u = (as_scalar(u) - shift) / scale;
    return {q_of_v, q_inv_of_u};
  };
  map.is_generic = [](const Point&, const Point&) { return true; };
  map.sample = [](Rng& rng) -> Point { return rng.complex_normal(); };
  map.distance = point_distance;
  return map;
}

TwistedMap scalar_rational() {
  TwistedMap map;
  map.name = "scalar_rational";
  map.domain = DomainKind::Scalar;
  auto denominator = [](Complex u, Complex v) { return 1.0 - u + u * v; };
  map.is_generic = [denominator](const Point& a, const Point& b) {
    const Complex u = as_scalar(a);
    const Complex v = as_scalar(b);
    const double scale = std::max({1.0, std::abs(u), std::abs(u * v)});
    return std::abs(denominator(u, v)) > kScalarGate * scale;
  };
  map.apply = [denominator, generic = map.is_generic](const Point& a, const Point& b) -> PointPair {
    if (!generic(a, b)) throw Error(ErrorKind::NonGeneric, "scalar_rational: 1 - u + uv vanishes");
    const Complex u = as_scalar(a);
    const Complex v = as_scalar(b);
    const Complex phi = denominator(u, v);
    return {phi, u * v / phi};
  };
  map.sample = [](Rng& rng) -> Point { return rng.complex_normal(); };
  map.distance = point_distance;
  return map;
}

TwistedMap matrix_rational(std::size_t m) {
  if (m == 0) throw Error(ErrorKind::SizeMismatch, "matrix_rational: m must be positive");
  TwistedMap map;
  map.name = "matrix_rational";
  map.domain = DomainKind::Matrix;
  const auto dim = static_cast<Eigen::Index>(m);
  auto phi_of = [dim](const CMatrix& u, const CMatrix& v) -> CMatrix {
    return CMatrix::Identity(dim, dim) - u + u * v;
  };
  map.is_generic = [phi_of, dim](const Point& a, const Point& b) {
    const auto& u = as_matrix(a);
    const auto& v = as_matrix(b);
    if (u.rows() != dim || u.cols() != dim || v.rows() != dim || v.cols() != dim) return false;
    const CMatrix phi = phi_of(u, v);
    const double scale = std::max({1.0, u.norm(), (u * v).norm()});
    return linalg::min_singular_value(phi) > kScalarGate * scale;
  };
  map.apply = [phi_of, generic = map.is_generic](const Point& a, const Point& b) -> PointPair {
    if (!generic(a, b)) throw Error(ErrorKind::NonGeneric, "matrix_rational: 1 - u + uv is singular");
    const auto& u = as_matrix(a);
    const auto& v = as_matrix(b);
    const CMatrix phi = phi_of(u, v);
    CMatrix psi = phi.partialPivLu().solve(u * v);
    return {phi, std::move(psi)};
  };
  map.sample = [dim](Rng& rng) -> Point { return rng.complex_normal_matrix(dim, dim); };
  map.distance = point_distance;
  return map;
}


}  // namespace

TwistedMap builtin_map(const std::string& name, const MapParams& params) {
  if (name == "q_swap") return q_swap(params.q_scale, params.q_shift);
  if (name == "scalar_rational") return scalar_rational();
  if (name == "matrix_rational") return matrix_rational(params.m);
  throw Error(ErrorKind::UnknownMap, "unknown twisted map '" + name + "'");
}

double involution_residual(const TwistedMap& map, const Point& u, const Point& v) {
  const auto [p, q] = map.apply(u, v);
  const auto [u2, v2] = map.apply(p, q);
  return std::max(map.distance(u2, u), map.distance(v2, v));
}

double braid_residual(const TwistedMap& map, const Point& u, const Point& v, const Point& w) {
  const auto lhs = act(map, {1, 2, 1}, {u, v, w});
  const auto rhs = act(map, {2, 1, 2}, {u, v, w});
  double r = 0.0;
  for (std::size_t i = 0; i < 3; ++i) r = std::max(r, map.distance(lhs[i], rhs[i]));
  return r;
}

VerificationReport verify_involution(const TwistedMap& map, std::size_t samples, std::uint64_t seed,
                                     double tol, Execution exec) {
  return run_verification(
      map.name + ".involution", samples, seed, tol,
      [&map](Rng& rng) {
        const Point u = map.sample(rng);
        const Point v = map.sample(rng);
        if (!map.is_generic(u, v)) throw Error(ErrorKind::NonGeneric, "sampled pair not generic");
        return involution_residual(map, u, v);
      },
      exec);
}

VerificationReport verify_braid(const TwistedMap& map, std::size_t samples, std::uint64_t seed,
                                double tol, Execution exec) {
  return run_verification(
      map.name + ".braid", samples, seed, tol,
      [&map](Rng& rng) {
        const Point u = map.sample(rng);
        const Point v = map.sample(rng);
        const Point w = map.sample(rng);
        return braid_residual(map, u, v, w);
      },
      exec);
}

std::vector<Point> act(const TwistedMap& map, const SigmaWord& word, std::vector<Point> tuple) {
  for (std::size_t step = 0; step < word.size(); ++step) {
    const auto g = word[step];
    if (g == 0 || g >= tuple.size())
      throw Error(ErrorKind::SchemaError,
                  "act: generator " + std::to_string(g) + " out of range for tuple of " +
                      std::to_string(tuple.size()),
                  static_cast<int>(step));
    try {
      auto [phi, psi] = map.apply(tuple[g - 1], tuple[g]);
      tuple[g - 1] = std::move(phi);
      tuple[g] = std::move(psi);
    } catch (const Error& e) {
      if (e.step() >= 0) throw;
      throw Error(e.kind(), std::string("act: ") + e.what(), static_cast<int>(step));
    }
  }
  return tuple;
}

PointPair chain_invariants(const TwistedMap& map, const std::vector<Point>& us, const Point& w) {
  if (us.empty()) throw Error(ErrorKind::SizeMismatch, "chain_invariants: empty tuple");
  Point phi_chain = w;
  for (auto it = us.rbegin(); it != us.rend(); ++it) phi_chain = map.apply(*it, phi_chain).first;
  Point psi_chain = w;
  for (const auto& u : us) psi_chain = map.apply(psi_chain, u).second;
  return {phi_chain, psi_chain};
}

}  // namespace twistlab
