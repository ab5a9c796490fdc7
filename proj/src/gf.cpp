#include "twistlab/gf.hpp"

#include <algorithm>

#include "twistlab/error.hpp"

namespace twistlab::gf {
namespace {

CMatrix identity(std::size_t d) {
  const auto di = static_cast<Eigen::Index>(d);
  return CMatrix::Identity(di, di);
}

double relative_gap(const CMatrix& lhs, const CMatrix& rhs) {
  return linalg::spectral_norm(lhs - rhs) / std::max(1.0, linalg::spectral_norm(lhs));
}

// Scalar rational map on two coordinates of column-matrix points.
std::pair<Complex, Complex> local_pair(Complex a, Complex b) {
  static const TwistedMap map = builtin_map("scalar_rational");
  const auto [p, q] = map.apply(a, b);
  return {as_scalar(p), as_scalar(q)};
}

GFSystem rational_action(std::string name, std::size_t m, std::size_t n) {
  if (m < 1 || n < 1) throw Error(ErrorKind::DimensionMismatch, "gf system: m and n must be positive");
  GFSystem sys;
  sys.name = std::move(name);
  sys.m = m;
  sys.n = n;
  for (std::size_t i = 1; i < m; ++i)
    sys.g.push_back([i](const Point& p) -> Point {
      CMatrix u = as_matrix(p);
      const auto k = static_cast<Eigen::Index>(i);
      std::tie(u(k - 1, 0), u(k, 0)) = local_pair(u(k - 1, 0), u(k, 0));
      return u;
    });
  sys.f = [m](const Point& a, const Point& b) -> PointPair {
    CMatrix u = as_matrix(a);
    CMatrix v = as_matrix(b);
    std::tie(u(static_cast<Eigen::Index>(m) - 1, 0), v(0, 0)) = local_pair(u(static_cast<Eigen::Index>(m) - 1, 0), v(0, 0));
    return {u, v};
  };
  sys.sample = [m](Rng& rng) -> Point { return rng.complex_normal_matrix(static_cast<Eigen::Index>(m), 1); };
  sys.distance = point_distance;
  return sys;
}

GFSystem constant_operators(GFSystem sys, const CMatrix& g, const CMatrix& f) {
  for (std::size_t i = 1; i < sys.m; ++i) sys.G.push_back([g](const Point&) { return g; });
  sys.F = [f](const Point&, const Point&) { return f; };
  return sys;
}

CMatrix left(const CMatrix& op, std::size_t n) { return linalg::kron(op, identity(n)); }
CMatrix right(const CMatrix& op, std::size_t n) { return linalg::kron(identity(n), op); }

// Operator of one letter at the current points, then the points move.
CMatrix step(const GFSystem& sys, std::size_t letter, Point& u, Point& v) {
  const std::size_t m = sys.m;
  if (letter < m) {
    const CMatrix op = left(sys.G[letter - 1](u), sys.n);
    u = sys.g[letter - 1](u);
    return op;
  }
  if (letter == m) {
    const CMatrix op = sys.F(u, v);
    std::tie(u, v) = sys.f(u, v);
    return op;
  }
  const CMatrix op = right(sys.G[letter - m - 1](v), sys.n);
  v = sys.g[letter - m - 1](v);
  return op;
}

double point_relations(const GFSystem& sys, const Point& u, const Point& v) {
  const std::size_t letters = 2 * sys.m - 1;
  double r = 0.0;
  const auto compare = [&](const SigmaWord& a, const SigmaWord& b) {
    const auto [x1, y1] = act_pair(sys, a, u, v);
    const auto [x2, y2] = act_pair(sys, b, u, v);
    r = std::max({r, sys.distance(x1, x2), sys.distance(y1, y2)});
  };
  for (std::size_t k = 1; k <= letters; ++k) {
    compare({k, k}, {});
    if (k + 1 <= letters) compare({k, k + 1, k}, {k + 1, k, k + 1});
    for (std::size_t j = k + 2; j <= letters; ++j) compare({k, j}, {j, k});
  }
  return r;
}

double operator_relations(const GFSystem& sys, const Point& u, const Point& v) {
  const std::size_t m = sys.m;
  const std::size_t n = sys.n;
  double r = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    const auto& gi = sys.g[i - 1];
    const auto& Gi = sys.G[i - 1];
    r = std::max(r, relative_gap(Gi(gi(u)) * Gi(u), identity(n)));
    if (i + 1 < m) {
      const auto& gj = sys.g[i];
      const auto& Gj = sys.G[i];
      const Point a = gi(u);
      const Point b = gj(a);
      const CMatrix up = Gi(b) * Gj(a) * Gi(u);
      const Point c = gj(u);
      const Point d = gi(c);
      const CMatrix down = Gj(d) * Gi(c) * Gj(u);
      r = std::max(r, relative_gap(up, down));
    }
  }
  const auto [lam, mu] = sys.f(u, v);
  r = std::max(r, relative_gap(sys.F(lam, mu) * sys.F(u, v), identity(n * n)));
  if (m >= 2) {
    // F - G_(m-1) square on the left leg.
    const auto& g = sys.g[m - 2];
    const auto& G = sys.G[m - 2];
    const Point gl = g(lam);
    const CMatrix up = sys.F(gl, mu) * left(G(lam), n) * sys.F(u, v);
    const Point gu = g(u);
    const auto [lam2, mu2] = sys.f(gu, v);
    (void)mu2;
    const CMatrix down = left(G(lam2), n) * sys.F(gu, v) * left(G(u), n);
    r = std::max(r, relative_gap(up, down));
    // F - G_1 square on the right leg.
    const auto& g1 = sys.g[0];
    const auto& G1 = sys.G[0];
    const Point gm = g1(mu);
    const CMatrix up1 = sys.F(lam, gm) * right(G1(mu), n) * sys.F(u, v);
    const Point gv = g1(v);
    const auto [lam3, mu3] = sys.f(u, gv);
    (void)lam3;
    const CMatrix down1 = right(G1(mu3), n) * sys.F(u, gv) * right(G1(v), n);
    r = std::max(r, relative_gap(up1, down1));
  }
  return r;
}

TwistedMap pair_map(const GFSystem& sys) {
  TwistedMap map;
  map.name = sys.name + ".f";
  map.domain = DomainKind::Matrix;
  map.apply = sys.f;
  map.is_generic = [](const Point&, const Point&) { return true; };
  map.sample = sys.sample;
  map.distance = sys.distance;
  return map;
}

}  // namespace

GFSystem trivial_gf_system(std::size_t m, std::size_t n) {
  return constant_operators(rational_action("trivial", m, n), identity(n), identity(n * n));
}

GFSystem sign_gf_system(std::size_t m, std::size_t n) {
  return constant_operators(rational_action("sign", m, n), -identity(n), -identity(n * n));
}

GFSystem perturbed_gf_system(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m < 2) throw Error(ErrorKind::DimensionMismatch, "perturbed gf system: needs m >= 2");
  GFSystem sys = trivial_gf_system(m, n);
  sys.name = "perturbed";
  Rng rng(seed);
  const CMatrix g1 = rng.complex_normal_matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  sys.G[0] = [g1](const Point&) { return g1; };
  return sys;
}

PointPair act_pair(const GFSystem& sys, const SigmaWord& word, Point u, Point v) {
  for (std::size_t k = 0; k < word.size(); ++k) {
    const std::size_t letter = word[k];
    if (letter == 0 || letter >= 2 * sys.m)
      throw Error(ErrorKind::SchemaError, "act_pair: letter out of range", static_cast<int>(k));
    if (letter < sys.m) u = sys.g[letter - 1](u);
    else if (letter == sys.m) std::tie(u, v) = sys.f(u, v);
    else v = sys.g[letter - sys.m - 1](v);
  }
  return {u, v};
}

VerificationReport gf_verify(const GFSystem& sys, std::size_t samples, std::uint64_t seed, double tol,
                             Execution exec) {
  if (sys.g.size() + 1 != sys.m || sys.G.size() + 1 != sys.m)
    throw Error(ErrorKind::DimensionMismatch, "gf_verify: need m - 1 point maps and operators");
  if (sys.m == 1) {
    const ybe::RMatrix r{sys.name + ".F", sys.n, sys.F, pair_map(sys)};
    return run_verification(
        sys.name + ".gf", samples, seed, tol,
        [&r](Rng& rng) {
          const Point u = r.map.sample(rng);
          const Point v = r.map.sample(rng);
          const Point w = r.map.sample(rng);
          return std::max(ybe::inverse_residual(r, u, v), ybe::tybe_residual(r, u, v, w));
        },
        exec);
  }
  return run_verification(
      sys.name + ".gf", samples, seed, tol,
      [&sys](Rng& rng) {
        const Point u = sys.sample(rng);
        const Point v = sys.sample(rng);
        return std::max(point_relations(sys, u, v), operator_relations(sys, u, v));
      },
      exec);
}

SigmaWord gf_word(std::size_t m) {
  SigmaWord word;
  for (std::size_t alpha = 1; alpha <= m; ++alpha) {
    for (std::size_t i = m - alpha + 1; i <= m - 1; ++i) word.push_back(i);
    word.push_back(m);
    // Right letters ascend: s_(m+1) ... s_(2m-alpha). The descending range
    // s_(2m-1) ... s_(m+alpha) only realizes the block swap for m <= 2.
    for (std::size_t j = m + 1; j + alpha <= 2 * m; ++j) word.push_back(j);
  }
  return word;
}

std::pair<TwistedMap, ybe::RMatrix> gf_compose(const GFSystem& sys) {
  if (sys.g.size() + 1 != sys.m || sys.G.size() + 1 != sys.m)
    throw Error(ErrorKind::DimensionMismatch, "gf_compose: need m - 1 point maps and operators");
  const SigmaWord word = gf_word(sys.m);
  // The rightmost factor acts first.
  const auto thread = [sys, word](Point u, Point v, CMatrix* op) {
    CMatrix acc = identity(sys.n * sys.n);
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      const CMatrix factor = step(sys, *it, u, v);
      if (op) acc = factor * acc;
    }
    if (op) *op = std::move(acc);
    return PointPair{std::move(u), std::move(v)};
  };
  TwistedMap map;
  map.name = sys.name + ".mu";
  map.domain = DomainKind::Matrix;
  map.apply = [thread](const Point& u, const Point& v) { return thread(u, v, nullptr); };
  map.is_generic = [](const Point&, const Point&) { return true; };
  map.sample = sys.sample;
  map.distance = sys.distance;
  ybe::RMatrix r;
  r.name = sys.name + ".R";
  r.n = sys.n;
  r.evaluate = [thread](const Point& u, const Point& v) {
    CMatrix op;
    thread(u, v, &op);
    return op;
  };
  r.map = map;
  return {map, r};
}

double shuffle_residual(const GFSystem& sys, const TwistedMap& mu, const Point& u, const Point& v) {
  const auto [x1, y1] = mu.apply(u, v);
  const auto [x2, y2] = act_pair(sys, reduced_word(block_swap(sys.m)), u, v);
  return std::max(sys.distance(x1, x2), sys.distance(y1, y2));
}

}  // namespace twistlab::gf
