#include "twistlab/ybe.hpp"

#include <algorithm>
#include <cmath>

#include "twistlab/error.hpp"

namespace twistlab::ybe {
namespace {

CMatrix identity(std::size_t d) {
  const auto di = static_cast<Eigen::Index>(d);
  return CMatrix::Identity(di, di);
}

double relative_gap(const CMatrix& lhs, const CMatrix& rhs) {
  return linalg::spectral_norm(lhs - rhs) / std::max(1.0, linalg::spectral_norm(lhs));
}

void require_square(const CMatrix& m, std::size_t d, const std::string& what) {
  if (static_cast<std::size_t>(m.rows()) != d || static_cast<std::size_t>(m.cols()) != d)
    throw Error(ErrorKind::DimensionMismatch, what + ": expected a " + std::to_string(d) + " x " +
                                                  std::to_string(d) + " matrix");
}

Point sample_point(const TwistedMap& map, Rng& rng) { return map.sample(rng); }

}  // namespace

CMatrix flip(std::size_t n) {
  const auto ni = static_cast<Eigen::Index>(n);
  CMatrix p = CMatrix::Zero(ni * ni, ni * ni);
  for (Eigen::Index i = 0; i < ni; ++i)
    for (Eigen::Index j = 0; j < ni; ++j) p(j * ni + i, i * ni + j) = 1.0;
  return p;
}

CMatrix embed_pair(const CMatrix& op, std::size_t leg, std::size_t legs, std::size_t n) {
  if (leg + 2 > legs) throw Error(ErrorKind::DimensionMismatch, "embed_pair: leg out of range");
  std::size_t before = 1;
  for (std::size_t i = 0; i < leg; ++i) before *= n;
  std::size_t after = 1;
  for (std::size_t i = leg + 2; i < legs; ++i) after *= n;
  return linalg::kron(identity(before), linalg::kron(op, identity(after)));
}

RMatrix constant_R(const std::string& name, const CMatrix& matrix, const TwistedMap& map) {
  const auto d = static_cast<std::size_t>(matrix.rows());
  std::size_t n = 1;
  while (n * n < d) ++n;
  if (n * n != d || matrix.cols() != matrix.rows())
    throw Error(ErrorKind::DimensionMismatch, "constant_R: matrix must be n^2 x n^2");
  return RMatrix{name, n, [matrix](const Point&, const Point&) { return matrix; }, map};
}

RMatrix builtin_R(const std::string& name, const TwistedMap& map, std::size_t n) {
  if (n < 1) throw Error(ErrorKind::DimensionMismatch, "builtin_R: n must be positive");
  if (name == "relabel_id") return constant_R(name, identity(n * n), map);
  if (name == "relabel_swap") return constant_R(name, flip(n), map);
  throw Error(ErrorKind::UnknownR, "unknown R-matrix '" + name + "'");
}

double inverse_residual(const RMatrix& r, const Point& u, const Point& v) {
  const auto [phi, psi] = r.map.apply(u, v);
  const CMatrix forward = r.evaluate(u, v);
  const CMatrix back = r.evaluate(phi, psi);
  require_square(forward, r.n * r.n, "R(u, v)");
  return linalg::spectral_norm(back * forward - identity(r.n * r.n));
}

double tybe_residual(const RMatrix& r, const Point& u, const Point& v, const Point& w) {
  const auto& mu = r.map.apply;
  const std::size_t n = r.n;
  // Left side: R12(phi(u,v), phi(psi(u,v), w)) R23(psi(u,v), w) R12(u, v).
  const auto [p_uv, s_uv] = mu(u, v);
  const auto [p_sw, s_sw] = mu(s_uv, w);
  const CMatrix lhs = embed_pair(r.evaluate(p_uv, p_sw), 0, 3, n) * embed_pair(r.evaluate(s_uv, w), 1, 3, n) *
                      embed_pair(r.evaluate(u, v), 0, 3, n);
  // Right side: R23(psi(u, phi(v,w)), psi(v,w)) R12(u, phi(v,w)) R23(v, w).
  const auto [p_vw, s_vw] = mu(v, w);
  const auto [p_up, s_up] = mu(u, p_vw);
  (void)p_up;
  const CMatrix rhs = embed_pair(r.evaluate(s_up, s_vw), 1, 3, n) * embed_pair(r.evaluate(u, p_vw), 0, 3, n) *
                      embed_pair(r.evaluate(v, w), 1, 3, n);
  return relative_gap(lhs, rhs);
}

VerificationReport verify_inverse(const RMatrix& r, std::size_t samples, std::uint64_t seed, double tol,
                                  Execution exec) {
  return run_verification(
      r.name + ".inverse", samples, seed, tol,
      [&r](Rng& rng) {
        const Point u = sample_point(r.map, rng);
        const Point v = sample_point(r.map, rng);
        if (!r.map.is_generic(u, v)) throw Error(ErrorKind::NonGeneric, "sampled pair not generic");
        return inverse_residual(r, u, v);
      },
      exec);
}

VerificationReport verify_tybe(const RMatrix& r, std::size_t samples, std::uint64_t seed, double tol,
                               Execution exec) {
  return run_verification(
      r.name + ".tybe", samples, seed, tol,
      [&r](Rng& rng) {
        const Point u = sample_point(r.map, rng);
        const Point v = sample_point(r.map, rng);
        const Point w = sample_point(r.map, rng);
        return tybe_residual(r, u, v, w);
      },
      exec);
}

LOperator constant_L(const std::string& name, const CMatrix& a, std::size_t n, std::size_t w) {
  require_square(a, n * w, "constant_L");
  return LOperator{name, n, w, [a](const Point&) { return a; }};
}

LOperator linear_L(const std::string& name, const CMatrix& a, std::size_t n, std::size_t w) {
  require_square(a, n * w, "linear_L");
  return LOperator{name, n, w, [a](const Point& u) -> CMatrix { return as_scalar(u) * a; }};
}

LOperator diagonal_L(std::size_t n) {
  return LOperator{"diagonal", n, 1, [n](const Point& u) -> CMatrix {
                     const Complex x = as_scalar(u);
                     CMatrix d = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
                     Complex power{1.0, 0.0};
                     for (Eigen::Index i = 0; i < d.rows(); ++i, power *= x) d(i, i) = power;
                     return d;
                   }};
}

double l_residual(const LOperator& l, const RMatrix& r, const Point& u, const Point& v) {
  if (l.n != r.n) throw Error(ErrorKind::DimensionMismatch, "verify_L: L and R act on different V");
  const std::size_t n = l.n;
  const std::size_t w = l.w;
  const CMatrix iw = identity(w);
  const CMatrix in = identity(n);
  const auto [phi, psi] = r.map.apply(u, v);
  const CMatrix luv = l.evaluate(u);
  require_square(luv, n * w, "L(u)");
  // V(u) V(v) W -> V(u) W V(v) -> W V(u) V(v) -> W V(phi) V(psi)
  const CMatrix lhs = linalg::kron(iw, r.evaluate(u, v)) * linalg::kron(luv, in) * linalg::kron(in, l.evaluate(v));
  // V(u) V(v) W -> V(phi) V(psi) W -> V(phi) W V(psi) -> W V(phi) V(psi)
  const CMatrix rhs = linalg::kron(l.evaluate(phi), in) * linalg::kron(in, l.evaluate(psi)) *
                      linalg::kron(r.evaluate(u, v), iw);
  return relative_gap(lhs, rhs);
}

VerificationReport verify_L(const LOperator& l, const RMatrix& r, std::size_t samples, std::uint64_t seed,
                            double tol, Execution exec) {
  if (l.n != r.n) throw Error(ErrorKind::DimensionMismatch, "verify_L: L and R act on different V");
  return run_verification(
      l.name + ".l_operator", samples, seed, tol,
      [&](Rng& rng) {
        const Point u = sample_point(r.map, rng);
        const Point v = sample_point(r.map, rng);
        if (!r.map.is_generic(u, v)) throw Error(ErrorKind::NonGeneric, "sampled pair not generic");
        return l_residual(l, r, u, v);
      },
      exec);
}

LOperator compose_L(const LOperator& a, const LOperator& b) {
  if (a.n != b.n) throw Error(ErrorKind::DimensionMismatch, "compose_L: different auxiliary spaces");
  const std::size_t n = a.n;
  const std::size_t w1 = a.w;
  const std::size_t w2 = b.w;
  return LOperator{a.name + "*" + b.name, n, w1 * w2, [a, b, w1, w2](const Point& u) -> CMatrix {
                     return linalg::kron(identity(w1), b.evaluate(u)) * linalg::kron(a.evaluate(u), identity(w2));
                   }};
}

CMatrix q_operator(const LOperator& l, const Point& u) {
  const CMatrix m = l.evaluate(u);
  require_square(m, l.n * l.w, "L(u)");
  const auto n = static_cast<Eigen::Index>(l.n);
  const auto w = static_cast<Eigen::Index>(l.w);
  CMatrix q = CMatrix::Zero(w, w);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index b = 0; b < w; ++b)
      for (Eigen::Index a = 0; a < w; ++a) q(b, a) += m(b * n + i, i * w + a);
  return q;
}

double q_residual(const LOperator& l, const TwistedMap& map, const Point& u, const Point& v) {
  const auto [phi, psi] = map.apply(u, v);
  return relative_gap(q_operator(l, u) * q_operator(l, v), q_operator(l, phi) * q_operator(l, psi));
}

VerificationReport q_check(const LOperator& l, const TwistedMap& map, std::size_t samples, std::uint64_t seed,
                           double tol, Execution exec) {
  return run_verification(
      l.name + ".q_operator", samples, seed, tol,
      [&](Rng& rng) {
        const Point u = sample_point(map, rng);
        const Point v = sample_point(map, rng);
        if (!map.is_generic(u, v)) throw Error(ErrorKind::NonGeneric, "sampled pair not generic");
        return q_residual(l, map, u, v);
      },
      exec);
}

Scattering scattering(const RMatrix& r, const SigmaWord& word, std::vector<Point> params) {
  const std::size_t legs = params.size();
  if (legs < 1) throw Error(ErrorKind::SizeMismatch, "scattering: no particles");
  std::size_t dim = 1;
  for (std::size_t i = 0; i < legs; ++i) dim *= r.n;
  CMatrix op = identity(dim);
  for (std::size_t step = 0; step < word.size(); ++step) {
    const std::size_t g = word[step];
    if (g == 0 || g >= legs)
      throw Error(ErrorKind::SchemaError, "scattering: generator " + std::to_string(g) + " out of range",
                  static_cast<int>(step));
    try {
      op = embed_pair(r.evaluate(params[g - 1], params[g]), g - 1, legs, r.n) * op;
      auto [phi, psi] = r.map.apply(params[g - 1], params[g]);
      params[g - 1] = std::move(phi);
      params[g] = std::move(psi);
    } catch (const Error& e) {
      if (e.step() >= 0) throw;
      throw Error(e.kind(), std::string("scattering: ") + e.what(), static_cast<int>(step));
    }
  }
  return Scattering{TensorOperator{std::vector<std::size_t>(legs, r.n), std::move(op)}, std::move(params)};
}

double scattering_path_residual(const RMatrix& r, const SigmaWord& a, const SigmaWord& b,
                                const std::vector<Point>& params) {
  const Scattering x = scattering(r, a, params);
  const Scattering y = scattering(r, b, params);
  double d = relative_gap(x.op.matrix, y.op.matrix);
  for (std::size_t i = 0; i < params.size(); ++i) d = std::max(d, r.map.distance(x.params[i], y.params[i]));
  return d;
}

}  // namespace twistlab::ybe
