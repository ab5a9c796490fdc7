#include <algorithm>
#include <cmath>
#include <string>

#include "twistlab/error.hpp"
#include "twistlab/mtheta.hpp"
#include "twistlab/random.hpp"

namespace twistlab::mtheta {
namespace {

constexpr std::uint64_t kFitSeed = 0x5eed0003;
constexpr std::uint64_t kProbeSeed = 0x5eed0004;
constexpr std::size_t kProbeCount = 20;
constexpr double kProductLimit = 1e-6;
constexpr double kZeroSeparation = 1e-6;
constexpr double kSplitTol = 1e-8;
constexpr double kInterpolationLimit = 1e-7;

std::vector<Complex> sample_cell(const LatticeParams& p, std::uint64_t seed, std::size_t count) {
  Rng rng(mix_seed(seed, p.m * 64 + p.n));
  std::vector<Complex> zs(count);
  for (auto& z : zs) {
    const double s = rng.uniform();
    z = cell_point(p, s, rng.uniform());
  }
  return zs;
}

const std::vector<Complex>& probes(Complex tau, std::size_t m) {
  thread_local Complex cached_tau{};
  thread_local std::size_t cached_m = 0;
  thread_local std::vector<Complex> cached;
  if (cached.empty() || cached_tau != tau || cached_m != m) {
    cached = sample_cell(LatticeParams{tau, m, 1, {}}, kProbeSeed, kProbeCount);
    cached_tau = tau;
    cached_m = m;
  }
  return cached;
}

// Kernel direction of a singular value f(lambda) whose natural size is `scale`.
CVector kernel_vector(const CMatrix& a, double scale, double tol) {
  if (a.rows() == 1) {
    if (!(std::abs(a(0, 0)) <= tol * scale))
      throw Error(ErrorKind::NonGeneric, "kernel vector: point is not a zero of det f");
    return CVector::Ones(1);
  }
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Eigen::Index last = s.size() - 1;
  if (!(s(last) <= tol * scale))
    throw Error(ErrorKind::NonGeneric, "kernel vector: point is not a zero of det f");
  if (!(s(last - 1) > tol * scale))
    throw Error(ErrorKind::NonGeneric, "kernel vector: kernel has dimension above one");
  CVector v = svd.matrixV().col(last);
  v.normalize();
  linalg::fix_phase(v);
  return v;
}

void require_same_lattice(const LatticeParams& a, const LatticeParams& b, const char* where) {
  if (a.tau != b.tau || a.m != b.m)
    throw Error(ErrorKind::SizeMismatch, std::string(where) + ": elements live on different lattices or sizes");
}

// Least-squares x with sum_k x_k B_k(z) R(z) = Y(z) at fixed cell points,
// each point weighted by 1 / |Y(z)|. Returns the worst pointwise relative residual.
template <class Right, class Target>
double fit_linear(const BasisHandle& basis, Right&& right, Target&& target, CVector& x) {
  const LatticeParams& p = basis->params();
  const std::size_t m = p.m;
  const std::size_t dim = basis->dimension();
  const std::size_t points = 4 * p.n + 16;
  const auto rows_per = static_cast<Eigen::Index>(m * m);
  const std::vector<Complex> zs = sample_cell(p, kFitSeed, points);
  CMatrix a(rows_per * static_cast<Eigen::Index>(points), static_cast<Eigen::Index>(dim));
  CVector b(a.rows());
  for (std::size_t q = 0; q < points; ++q) {
    const Complex z = zs[q];
    const CMatrix y = target(z);
    const CMatrix r = right(z);
    const double w = std::max(y.norm(), 1e-300);
    const auto values = basis->evaluate_all(z);
    const Eigen::Index base = static_cast<Eigen::Index>(q) * rows_per;
    for (std::size_t k = 0; k < dim; ++k)
      a.block(base, static_cast<Eigen::Index>(k), rows_per, 1) = (values[k] * r).reshaped<Eigen::RowMajor>() / w;
    b.segment(base, rows_per) = y.reshaped<Eigen::RowMajor>() / w;
  }
  x = a.colPivHouseholderQr().solve(b);
  const CVector res = a * x - b;
  double worst = 0.0;
  for (std::size_t q = 0; q < points; ++q)
    worst = std::max(worst, res.segment(static_cast<Eigen::Index>(q) * rows_per, rows_per).norm());
  return worst;
}

ThetaElement quotient(const ThetaElement& f, const ThetaElement& right, const LatticeParams& params,
                      const ThetaOptions& options) {
  const BasisHandle basis = mtheta_basis(params);
  CVector x;
  const double residual = fit_linear(basis, [&](Complex z) { return right(z); }, [&](Complex z) { return f(z); }, x);
  if (!(residual <= options.fit_tol))
    throw Error(ErrorKind::ResidualTooLarge, "factorize_theta: quotient fit residual " + std::to_string(residual));
  return ThetaElement(basis, x);
}

CVector stacked_values(const ThetaElement& f, const std::vector<Complex>& zs, const ScalarThetaBasis& weight) {
  const auto mm = static_cast<Eigen::Index>(f.params().m * f.params().m);
  CVector out(mm * static_cast<Eigen::Index>(zs.size()));
  for (std::size_t q = 0; q < zs.size(); ++q)
    out.segment(static_cast<Eigen::Index>(q) * mm, mm) = f(zs[q]).reshaped<Eigen::RowMajor>() / weight.magnitude(zs[q]);
  return out;
}

// min over t of |x - e^{it} y| for unit x, y, evaluated without cancellation.
double phase_distance(CVector x, CVector y) {
  x.normalize();
  y.normalize();
  const Complex inner = y.dot(x);
  const Complex phase = std::abs(inner) > 0.0 ? inner / std::abs(inner) : Complex{1.0, 0.0};
  return (x - phase * y).norm();
}

}  // namespace

ThetaElement interpolate(const LatticeParams& params, const std::vector<Complex>& points,
                         const std::vector<CVector>& vectors, const ThetaOptions& options) {
  params.validate();
  const std::size_t m = params.m;
  const std::size_t count = m * params.n;
  if (points.size() != count || vectors.size() != count)
    throw Error(ErrorKind::SizeMismatch, "interpolate: need exactly m n points and vectors");
  for (const auto& v : vectors)
    if (static_cast<std::size_t>(v.size()) != m || !(v.norm() > 0.0))
      throw Error(ErrorKind::SizeMismatch, "interpolate: vectors must be nonzero of length m");
  const double defect = sum_rule_defect(params, points);
  if (!(defect <= options.sum_tol))
    throw Error(ErrorKind::SumRuleViolated,
                "interpolate: points miss the zero-sum rule by " + std::to_string(defect));

  const BasisHandle basis = mtheta_basis(params);
  const std::size_t dim = basis->dimension();
  const auto mi = static_cast<Eigen::Index>(m);
  CMatrix a(static_cast<Eigen::Index>(count) * mi, static_cast<Eigen::Index>(dim));
  for (std::size_t beta = 0; beta < count; ++beta) {
    const auto values = basis->evaluate_all(points[beta]);
    const double w = basis->scalar().magnitude(points[beta]);
    const CVector v = vectors[beta].normalized();
    for (std::size_t k = 0; k < dim; ++k)
      a.block(static_cast<Eigen::Index>(beta) * mi, static_cast<Eigen::Index>(k), mi, 1) = values[k] * v / w;
  }
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = options.rank_tol * std::max(1.0, s(0));
  std::size_t nullity = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) <= cutoff) ++nullity;
  if (nullity != 1)
    throw Error(ErrorKind::NullityMismatch, "interpolate: solution space has dimension " + std::to_string(nullity));
  ThetaElement f(basis, svd.matrixV().col(static_cast<Eigen::Index>(dim) - 1));
  for (std::size_t beta = 0; beta < count; ++beta) {
    const double r = (f(points[beta]) * vectors[beta].normalized()).norm() / f.scale(points[beta]);
    if (!(r <= kInterpolationLimit))
      throw Error(ErrorKind::ResidualTooLarge, "interpolate: f(lambda) v = " + std::to_string(r));
  }
  return f;
}

ThetaElement fit(const LatticeParams& params, const std::function<CMatrix(Complex)>& values,
                 const ThetaOptions& options, double* residual) {
  const BasisHandle basis = mtheta_basis(params);
  const auto m = static_cast<Eigen::Index>(params.m);
  CVector x;
  const double r = fit_linear(basis, [m](Complex) { return CMatrix::Identity(m, m); }, values, x);
  if (residual) *residual = r;
  if (!(r <= options.fit_tol))
    throw Error(ErrorKind::ResidualTooLarge, "fit: projection residual " + std::to_string(r));
  return ThetaElement(basis, x);
}

ThetaElement multiply(const ThetaElement& f, const ThetaElement& g, const ThetaOptions& options, double* residual) {
  require_same_lattice(f.params(), g.params(), "multiply");
  const LatticeParams params{f.params().tau, f.params().m, f.params().n + g.params().n, f.params().c + g.params().c};
  return fit(params, [&](Complex z) -> CMatrix { return f(z) * g(z); }, options, residual);
}

std::vector<ThetaElement> factorize_theta(const ThetaElement& f, const std::vector<std::vector<Complex>>& partition,
                                          const std::vector<Complex>& c_split, const ThetaOptions& options) {
  const LatticeParams& p = f.params();
  const std::size_t n = p.n;
  if (partition.size() != n || c_split.size() != n)
    throw Error(ErrorKind::PartitionInvalid, "factorize_theta: need " + std::to_string(n) + " blocks and characteristics");
  std::vector<Complex> all;
  for (const auto& block : partition) {
    if (block.size() != p.m)
      throw Error(ErrorKind::PartitionInvalid, "factorize_theta: every block needs exactly m zeros");
    all.insert(all.end(), block.begin(), block.end());
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (cell_distance(p, all[i], all[j]) < kZeroSeparation)
        throw Error(ErrorKind::PartitionInvalid, "factorize_theta: blocks are not disjoint");
  Complex total{};
  for (const Complex& c : c_split) total += c;
  if (std::abs(total - p.c) > kSplitTol * std::max(1.0, std::abs(p.c)))
    throw Error(ErrorKind::PartitionInvalid, "factorize_theta: characteristics do not add up to c");
  for (const Complex& z : all) {
    const CMatrix v = f(z);
    const double smallest = v.size() == 1 ? std::abs(v(0, 0)) : linalg::min_singular_value(v);
    if (!(smallest <= options.kernel_tol * f.scale(z)))
      throw Error(ErrorKind::PartitionInvalid, "factorize_theta: partition point is not a zero of det f");
  }
  if (n == 1) return {f};

  std::vector<ThetaElement> out(n, f);
  ThetaElement current = f;
  Complex rest = p.c;
  for (std::size_t i = n - 1; i >= 1; --i) {
    std::vector<CVector> kernels;
    for (const Complex& z : partition[i]) kernels.push_back(kernel_vector(current(z), current.scale(z), options.kernel_tol));
    ThetaElement right = interpolate(LatticeParams{p.tau, p.m, 1, c_split[i]}, partition[i], kernels, options);
    rest = i == 1 ? c_split[0] : rest - c_split[i];
    current = quotient(current, right, LatticeParams{p.tau, p.m, i, rest}, options);
    out[i] = std::move(right);
  }
  out[0] = std::move(current);

  std::vector<const ThetaElement*> parts;
  for (const auto& e : out) parts.push_back(&e);
  const double defect = product_defect({&f}, parts);
  if (!(defect <= kProductLimit))
    throw Error(ErrorKind::ResidualTooLarge, "factorize_theta: product defect " + std::to_string(defect));
  return out;
}

std::vector<ThetaElement> factorize_theta(const ThetaElement& f, const std::vector<std::vector<Complex>>& partition,
                                          const ThetaOptions& options) {
  std::vector<Complex> split;
  Complex rest = f.params().c;
  for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
    Complex sum{};
    for (const Complex& z : partition[i]) sum += z;
    split.push_back(sum - 0.5);
    rest -= split.back();
  }
  split.push_back(rest);
  return factorize_theta(f, partition, split, options);
}

std::pair<ThetaPoint, ThetaPoint> theta_mu(const ThetaPoint& f, const ThetaPoint& g, const ThetaOptions& options) {
  const LatticeParams& pf = f.element.params();
  const LatticeParams& pg = g.element.params();
  require_same_lattice(pf, pg, "theta_mu");
  if (pf.n != 1 || pg.n != 1) throw Error(ErrorKind::SizeMismatch, "theta_mu: factors must have degree 1");
  for (const Complex& a : f.zeros)
    for (const Complex& b : g.zeros)
      if (cell_distance(pf, a, b) < kZeroSeparation)
        throw Error(ErrorKind::SpectraOverlap, "theta_mu: zero sets intersect");
  const ThetaElement h = multiply(f.element, g.element, options);
  auto parts = factorize_theta(h, {g.zeros, f.zeros}, {pg.c, pf.c}, options);
  return {ThetaPoint{std::move(parts[0]), g.zeros}, ThetaPoint{std::move(parts[1]), f.zeros}};
}

std::vector<ThetaPoint> act_ordered_theta(const Permutation& sigma, std::vector<ThetaPoint> factors,
                                          const ThetaOptions& options) {
  if (factors.empty()) throw Error(ErrorKind::SizeMismatch, "act_ordered_theta: empty tuple");
  const std::size_t m = factors.front().element.params().m;
  if (sigma.size() != m * factors.size() || !is_permutation(sigma))
    throw Error(ErrorKind::SizeMismatch, "act_ordered_theta: permutation size must be m N");
  const SigmaWord word = reduced_word(sigma);
  for (std::size_t step = 0; step < word.size(); ++step) {
    const std::size_t pos = word[step] - 1;
    const std::size_t alpha = pos / m;
    try {
      if ((pos + 1) / m == alpha) {
        std::swap(factors[alpha].zeros[pos % m], factors[alpha].zeros[pos % m + 1]);
        continue;
      }
      ThetaPoint& left = factors[alpha];
      ThetaPoint& right = factors[alpha + 1];
      if (m == 1) {
        auto [a, b] = theta_mu(left, right, options);
        left = std::move(a);
        right = std::move(b);
        continue;
      }
      // One zero crosses the boundary; each characteristic follows its zero sum.
      const Complex out = left.zeros.back();
      const Complex in = right.zeros.front();
      std::vector<Complex> zl = left.zeros;
      std::vector<Complex> zr = right.zeros;
      zl.back() = in;
      zr.front() = out;
      const Complex cl = left.element.params().c + in - out;
      const Complex cr = right.element.params().c + out - in;
      const ThetaElement h = multiply(left.element, right.element, options);
      auto parts = factorize_theta(h, {zl, zr}, {cl, cr}, options);
      left = ThetaPoint{std::move(parts[0]), std::move(zl)};
      right = ThetaPoint{std::move(parts[1]), std::move(zr)};
    } catch (const Error& e) {
      throw Error(e.kind(), std::string("act_ordered_theta: ") + e.what(), static_cast<int>(step));
    }
  }
  return factors;
}

double projective_distance(const ThetaElement& a, const ThetaElement& b) {
  const LatticeParams& pa = a.params();
  const LatticeParams& pb = b.params();
  if (pa.tau != pb.tau || pa.m != pb.m || pa.n != pb.n) return std::numeric_limits<double>::infinity();
  const auto& zs = probes(pa.tau, pa.m);
  const ScalarThetaBasis& weight = a.basis()->scalar();
  return phase_distance(stacked_values(a, zs, weight), stacked_values(b, zs, weight));
}

double coefficient_alignment(const ThetaElement& a, const ThetaElement& b) {
  if (a.basis() != b.basis())
    throw Error(ErrorKind::DimensionMismatch, "coefficient_alignment: elements use different bases");
  return std::abs(a.coeffs().dot(b.coeffs())) / (a.coeffs().norm() * b.coeffs().norm());
}

double product_defect(const std::vector<const ThetaElement*>& lhs, const std::vector<const ThetaElement*>& rhs) {
  if (lhs.empty() || rhs.empty()) throw Error(ErrorKind::SizeMismatch, "product_defect: empty product");
  const LatticeParams& p = lhs.front()->params();
  const auto& zs = probes(p.tau, p.m);
  const auto product = [](const std::vector<const ThetaElement*>& fs, Complex z) {
    CMatrix out = (*fs.front())(z);
    for (std::size_t i = 1; i < fs.size(); ++i) out = out * (*fs[i])(z);
    return out;
  };
  std::vector<CMatrix> ps;
  std::vector<CMatrix> qs;
  Complex num{};
  double den = 0.0;
  for (const Complex& z : zs) {
    ps.push_back(product(lhs, z));
    qs.push_back(product(rhs, z));
    const double w = 1.0 / std::max(ps.back().squaredNorm(), 1e-300);
    num += w * (qs.back().conjugate().cwiseProduct(ps.back())).sum();
    den += w * qs.back().squaredNorm();
  }
  const Complex s = den > 0.0 ? num / den : Complex{};
  double worst = 0.0;
  for (std::size_t q = 0; q < zs.size(); ++q)
    worst = std::max(worst, (ps[q] - s * qs[q]).norm() / std::max(ps[q].norm(), 1e-300));
  return worst;
}

namespace {

constexpr double kPointSeparation = 1e-3;

double min_zero_gap(const LatticeParams& p, const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double gap = std::numeric_limits<double>::infinity();
  for (const Complex& x : a)
    for (const Complex& y : b) gap = std::min(gap, cell_distance(p, x, y));
  return gap;
}

double theta_point_distance(const Point& pa, const Point& pb) {
  const ThetaPoint& a = as_theta(pa);
  const ThetaPoint& b = as_theta(pb);
  if (a.zeros.size() != b.zeros.size()) return std::numeric_limits<double>::infinity();
  double d = projective_distance(a.element, b.element);
  d = std::max(d, std::abs(a.element.params().c - b.element.params().c));
  for (std::size_t i = 0; i < a.zeros.size(); ++i)
    d = std::max(d, cell_distance(a.element.params(), a.zeros[i], b.zeros[i]));
  return d;
}

}  // namespace

TwistedMap theta_map(Complex tau, std::size_t m) {
  LatticeParams{tau, m, 1, {}}.validate();
  TwistedMap map;
  map.name = "theta_mu";
  map.domain = DomainKind::Theta;
  map.is_generic = [](const Point& u, const Point& v) {
    const ThetaPoint& f = as_theta(u);
    const ThetaPoint& g = as_theta(v);
    return min_zero_gap(f.element.params(), f.zeros, g.zeros) > kPointSeparation;
  };
  map.apply = [generic = map.is_generic](const Point& u, const Point& v) -> PointPair {
    if (!generic(u, v)) throw Error(ErrorKind::SpectraOverlap, "theta_mu: zero sets too close");
    auto [f1, g1] = theta_mu(as_theta(u), as_theta(v));
    return {std::make_shared<const ThetaPoint>(std::move(f1)), std::make_shared<const ThetaPoint>(std::move(g1))};
  };
  map.sample = [tau, m](Rng& rng) -> Point {
    ThetaElement f = random_element(tau, m, 1, rng);
    try {
      ThetaPoint point = make_theta_point(std::move(f));
      for (std::size_t i = 0; i < point.zeros.size(); ++i)
        for (std::size_t j = i + 1; j < point.zeros.size(); ++j)
          if (cell_distance(point.element.params(), point.zeros[i], point.zeros[j]) <= kPointSeparation)
            throw Error(ErrorKind::NonGeneric, "theta sample: nearly double zero");
      return std::make_shared<const ThetaPoint>(std::move(point));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ZeroCountMismatch || e.kind() == ErrorKind::SumRuleViolated)
        throw Error(ErrorKind::NonGeneric, std::string("theta sample: ") + e.what());
      throw;
    }
  };
  map.distance = theta_point_distance;
  return map;
}

}  // namespace twistlab::mtheta
