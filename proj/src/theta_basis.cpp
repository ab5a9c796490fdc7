#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "twistlab/error.hpp"
#include "twistlab/mtheta.hpp"
#include "twistlab/random.hpp"

namespace twistlab::mtheta {
namespace {

constexpr Complex kTwoPiI{0.0, 2.0 * std::numbers::pi};
// ln(1e-17): terms below this relative size no longer change a double sum.
constexpr double kTailLog = -39.2;
constexpr std::uint64_t kConstraintSeed = 0x5eed0001;
constexpr std::uint64_t kHoldoutSeed = 0x5eed0002;
constexpr double kBasisRankTol = 1e-8;
constexpr double kBasisGapRatio = 1e6;
constexpr double kHoldoutLimit = 1e-6;
constexpr std::size_t kHoldoutPoints = 50;
constexpr std::size_t kCacheLimit = 4096;

Complex root_of_unity(long k, std::size_t m) {
  const long mm = static_cast<long>(m);
  k = ((k % mm) + mm) % mm;
  if ((4 * k) % mm == 0) {
    static const Complex quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return quarter[(4 * k) / mm];
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m));
}

// Both transformation-law residuals of a coefficient table at z, relative to
// the natural size of the space around z.
double table_law_residual(const ScalarThetaBasis& scalar, const LatticeParams& p, const CMatrix& table,
                          Complex z) {
  const std::size_t m = p.m;
  const double md = static_cast<double>(m);
  const Complex z1 = z + 1.0 / md;
  const Complex z2 = z + p.tau / md;
  const CVector f0 = table * scalar.evaluate_all(z);
  const CVector f1 = table * scalar.evaluate_all(z1);
  const CVector f2 = table * scalar.evaluate_all(z2);
  const Complex mult = std::exp(-kTwoPiI * (md * static_cast<double>(p.n) * z - p.c));
  double r1 = 0.0;
  double r2 = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Complex law1 = root_of_unity(static_cast<long>(j) - static_cast<long>(i), m) * f0(i * m + j);
      const Complex law2 = mult * f0(((i + 1) % m) * m + (j + 1) % m);
      r1 += std::norm(f1(i * m + j) - law1);
      r2 += std::norm(f2(i * m + j) - law2);
    }
  const double size = table.norm();
  const double s1 = size * (scalar.magnitude(z1) + scalar.magnitude(z));
  const double s2 = size * (scalar.magnitude(z2) + std::abs(mult) * scalar.magnitude(z));
  return std::max(std::sqrt(r1) / std::max(s1, 1e-300), std::sqrt(r2) / std::max(s2, 1e-300));
}

}  // namespace

void LatticeParams::validate() const {
  if (m < 1 || n < 1 || m * m * n > 64)
    throw Error(ErrorKind::DimensionMismatch,
                "lattice params: m = " + std::to_string(m) + ", n = " + std::to_string(n) +
                    " outside 1 <= m^2 n <= 64");
  if (!(tau.imag() >= kMinImTau))
    throw Error(ErrorKind::ConvergenceFailure, "lattice params: Im tau below 0.3");
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || !std::isfinite(tau.real()))
    throw Error(ErrorKind::SchemaError, "lattice params: non-finite value");
}

Complex LatticeParams::entry_shift() const {
  const double md = static_cast<double>(m);
  return md * c - static_cast<double>(n) * md * (md - 1.0) * tau / 2.0;
}

std::pair<CMatrix, CMatrix> clifford_pair(std::size_t m) {
  if (m < 1) throw Error(ErrorKind::DimensionMismatch, "clifford_pair: m must be positive");
  const auto mi = static_cast<Eigen::Index>(m);
  CMatrix g1 = CMatrix::Zero(mi, mi);
  CMatrix g2 = CMatrix::Zero(mi, mi);
  for (Eigen::Index a = 0; a < mi; ++a) {
    g1(a, a) = root_of_unity(a, m);
    g2((a + 1) % mi, a) = 1.0;
  }
  return {g1, g2};
}

// ---------------------------------------------------------------------------
// Scalar theta functions.
//
// Writing k = alpha + j L, the recursion a_(k+L) = a_k exp(2 pi i (k tau - c1))
// with a_alpha = 1 has the closed form
//   log a_k = 2 pi i (tau (j alpha + L j (j - 1) / 2) - j c1).
// Term magnitudes are a concave parabola in j, so each sum is taken from the
// peak outward until the tail drops below double precision.

namespace {

struct TermWalk {
  Complex sum;
  double peak_log;
  std::size_t terms;
};

TermWalk walk_terms(std::size_t order, Complex shift, Complex tau, std::size_t alpha, Complex z,
                    bool accumulate) {
  const double l = static_cast<double>(order);
  const double a = static_cast<double>(alpha);
  const auto exponent = [&](long j) {
    const double jd = static_cast<double>(j);
    return kTwoPiI * (tau * (jd * a + l * jd * (jd - 1.0) / 2.0) - jd * shift + (a + jd * l) * z);
  };
  const double t = tau.imag();
  const double vertex = (shift.imag() - l * z.imag() - a * t) / (l * t) + 0.5;
  const long j0 = std::lround(vertex);
  const Complex e0 = exponent(j0);
  TermWalk out{accumulate ? std::exp(e0) : Complex{}, e0.real(), 1};
  const double floor_log = e0.real() + kTailLog;
  for (int dir : {1, -1}) {
    for (long j = j0 + dir;; j += dir) {
      const Complex e = exponent(j);
      if (e.real() < floor_log) break;
      if (accumulate) out.sum += std::exp(e);
      if (++out.terms > kMaxThetaTerms)
        throw Error(ErrorKind::ConvergenceFailure, "scalar theta: more than 1024 Fourier terms needed");
    }
  }
  return out;
}

}  // namespace

ScalarThetaBasis::ScalarThetaBasis(std::size_t order, Complex shift, Complex tau)
    : order_(order), shift_(shift), tau_(tau) {
  if (order < 1) throw Error(ErrorKind::DimensionMismatch, "scalar theta basis: order must be positive");
  if (!(tau.imag() >= kMinImTau))
    throw Error(ErrorKind::ConvergenceFailure, "scalar theta basis: Im tau below 0.3");
  for (std::size_t alpha = 0; alpha < order_; ++alpha)
    for (double y : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const Complex z{0.0, y * tau.imag()};
      truncation_ = std::max(truncation_, walk_terms(order_, shift_, tau_, alpha, z, false).terms);
    }
}

Complex ScalarThetaBasis::evaluate(std::size_t alpha, Complex z) const {
  return walk_terms(order_, shift_, tau_, alpha, z, true).sum;
}

CVector ScalarThetaBasis::evaluate_all(Complex z) const {
  CVector out(static_cast<Eigen::Index>(order_));
  for (std::size_t alpha = 0; alpha < order_; ++alpha)
    out(static_cast<Eigen::Index>(alpha)) = evaluate(alpha, z);
  return out;
}

double ScalarThetaBasis::magnitude(Complex z) const {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t alpha = 0; alpha < order_; ++alpha)
    best = std::max(best, walk_terms(order_, shift_, tau_, alpha, z, false).peak_log);
  return std::exp(best);
}

ScalarThetaBasis scalar_theta_basis(std::size_t order, Complex shift, Complex tau) {
  return ScalarThetaBasis(order, shift, tau);
}

// ---------------------------------------------------------------------------
// Matrix theta basis: both laws imposed at sample points on the unknown
// coefficient tables, nullspace by SVD.

MThetaBasis::MThetaBasis(const LatticeParams& params, Execution exec)
    : params_(params),
      scalar_((params.validate(), params.entry_order()), params.entry_shift(), params.tau) {
  const std::size_t m = params.m;
  const std::size_t l = params.entry_order();
  const std::size_t entries = m * m;
  const std::size_t unknowns = entries * l;
  const std::size_t expected = m * m * params.n;
  // Each theta_alpha dominates only a thin band of Im z, so the points cover a
  // full tau period and every band holds several of them.
  const std::size_t points = 4 * l + 8;
  const double md = static_cast<double>(m);
  const auto li = static_cast<Eigen::Index>(l);

  Rng rng(mix_seed(kConstraintSeed, m * 64 + params.n));
  std::vector<Complex> zs(points);
  for (auto& z : zs) {
    const double s = rng.uniform();
    z = cell_point(params, s, md * rng.uniform());
  }

  CMatrix a = CMatrix::Zero(static_cast<Eigen::Index>(2 * entries * points),
                            static_cast<Eigen::Index>(unknowns));
  for_each_index(
      points,
      [&](std::size_t p) {
        const Complex z = zs[p];
        const Complex z1 = z + 1.0 / md;
        const Complex z2 = z + params.tau / md;
        const CVector t0 = scalar_.evaluate_all(z);
        const CVector t1 = scalar_.evaluate_all(z1);
        const CVector t2 = scalar_.evaluate_all(z2);
        const Complex mult = std::exp(-kTwoPiI * (md * static_cast<double>(params.n) * z - params.c));
        const double w1 = scalar_.magnitude(z1) + scalar_.magnitude(z);
        const double w2 = scalar_.magnitude(z2) + std::abs(mult) * scalar_.magnitude(z);
        const auto base = static_cast<Eigen::Index>(2 * entries * p);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) {
            const auto e = static_cast<Eigen::Index>(i * m + j);
            const auto e_next = static_cast<Eigen::Index>(((i + 1) % m) * m + (j + 1) % m);
            const Complex eps = root_of_unity(static_cast<long>(j) - static_cast<long>(i), m);
            const Eigen::Index r1 = base + e;
            const Eigen::Index r2 = base + static_cast<Eigen::Index>(entries) + e;
            a.block(r1, e * li, 1, li) += ((t1 - eps * t0) / w1).transpose();
            a.block(r2, e * li, 1, li) += (t2 / w2).transpose();
            a.block(r2, e_next * li, 1, li) -= (mult * t0 / w2).transpose();
          }
      },
      exec);

  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // Singular values decay smoothly for large entry orders, so the numerical
  // rank is placed at the widest gap below the relative cutoff. The floor of 1
  // only matters when every constraint vanishes (m = 1, where the laws hold for
  // all of Theta).
  const double cutoff = kBasisRankTol * std::max(sv(0), 1.0);
  std::size_t nullity = 0;
  if (sv(0) <= cutoff) {
    nullity = static_cast<std::size_t>(sv.size());
  } else {
    double widest = kBasisGapRatio;
    for (Eigen::Index i = 1; i < sv.size(); ++i) {
      if (sv(i) > cutoff) continue;
      const double gap = sv(i - 1) / std::max(sv(i), std::numeric_limits<double>::min());
      if (gap >= widest) {
        widest = gap;
        nullity = static_cast<std::size_t>(sv.size() - i);
      }
    }
  }
  if (nullity != expected)
    throw Error(ErrorKind::DimensionMismatch,
                "matrix theta basis: nullspace dimension " + std::to_string(nullity) + ", expected " +
                    std::to_string(expected));

  const auto& v = svd.matrixV();
  tables_.reserve(expected);
  for (std::size_t k = 0; k < expected; ++k) {
    CVector col = v.col(static_cast<Eigen::Index>(unknowns - expected + k));
    linalg::fix_phase(col);
    CMatrix table(static_cast<Eigen::Index>(entries), li);
    for (std::size_t e = 0; e < entries; ++e)
      table.row(static_cast<Eigen::Index>(e)) = col.segment(static_cast<Eigen::Index>(e) * li, li).transpose();
    tables_.push_back(std::move(table));
  }

  Rng holdout(mix_seed(kHoldoutSeed, m * 64 + params.n));
  for (std::size_t p = 0; p < kHoldoutPoints; ++p) {
    const double s = holdout.uniform();
    const Complex z = cell_point(params, s, holdout.uniform());
    for (const auto& table : tables_)
      holdout_residual_ = std::max(holdout_residual_, table_law_residual(scalar_, params_, table, z));
  }
  if (!(holdout_residual_ <= kHoldoutLimit))
    throw Error(ErrorKind::ConvergenceFailure,
                "matrix theta basis: holdout residual " + std::to_string(holdout_residual_));
}

CMatrix MThetaBasis::evaluate(std::size_t k, Complex z) const {
  const auto m = static_cast<Eigen::Index>(params_.m);
  const CVector v = tables_.at(k) * scalar_.evaluate_all(z);
  CMatrix out(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = v(i * m + j);
  return out;
}

std::vector<CMatrix> MThetaBasis::evaluate_all(Complex z) const {
  const auto m = static_cast<Eigen::Index>(params_.m);
  const CVector t = scalar_.evaluate_all(z);
  std::vector<CMatrix> out;
  out.reserve(tables_.size());
  for (const auto& table : tables_) {
    const CVector v = table * t;
    CMatrix f(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) f(i, j) = v(i * m + j);
    out.push_back(std::move(f));
  }
  return out;
}

CMatrix MThetaBasis::combine(const CVector& x) const {
  if (static_cast<std::size_t>(x.size()) != tables_.size())
    throw Error(ErrorKind::SizeMismatch, "matrix theta basis: coefficient count differs from dimension");
  CMatrix out = CMatrix::Zero(tables_.front().rows(), tables_.front().cols());
  for (std::size_t k = 0; k < tables_.size(); ++k) out += x(static_cast<Eigen::Index>(k)) * tables_[k];
  return out;
}

BasisHandle mtheta_basis(const LatticeParams& params) {
  using Key = std::tuple<double, double, std::size_t, std::size_t, double, double>;
  static std::mutex mutex;
  static std::map<Key, BasisHandle> cache;
  const Key key{params.tau.real(), params.tau.imag(), params.m, params.n, params.c.real(), params.c.imag()};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  // Built outside the lock; construction is deterministic, so a concurrent
  // duplicate is identical and the first insert wins.
  auto built = std::make_shared<const MThetaBasis>(params);
  std::lock_guard lock(mutex);
  if (cache.size() >= kCacheLimit) cache.clear();
  return cache.emplace(key, std::move(built)).first->second;
}

// ---------------------------------------------------------------------------

ThetaElement::ThetaElement(BasisHandle basis, CVector coeffs) : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (!basis_) throw Error(ErrorKind::SchemaError, "theta element: missing basis");
  if (static_cast<std::size_t>(coeffs_.size()) != basis_->dimension())
    throw Error(ErrorKind::SizeMismatch, "theta element: " + std::to_string(coeffs_.size()) +
                                             " coefficients for a space of dimension " +
                                             std::to_string(basis_->dimension()));
  Eigen::Index lead = 0;
  const double top = coeffs_.cwiseAbs().maxCoeff(&lead);
  if (!(top > 0.0) || !std::isfinite(top)) throw Error(ErrorKind::NonGeneric, "theta element: zero or non-finite");
  coeffs_ /= coeffs_(lead);
  coeffs_(lead) = 1.0;
  table_ = basis_->combine(coeffs_);
}

CMatrix ThetaElement::operator()(Complex z) const {
  const auto m = static_cast<Eigen::Index>(params().m);
  const CVector v = table_ * basis_->scalar().evaluate_all(z);
  CMatrix out(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = v(i * m + j);
  return out;
}

Complex ThetaElement::det(Complex z) const {
  const CMatrix f = (*this)(z);
  return f.size() == 1 ? f(0, 0) : f.determinant();
}

double ThetaElement::scale(Complex z) const { return table_.norm() * basis_->scalar().magnitude(z); }

double ThetaElement::law_residual(Complex z) const {
  return table_law_residual(basis_->scalar(), params(), table_, z);
}

// ---------------------------------------------------------------------------

Complex cell_point(const LatticeParams& params, double s, double t) {
  return (s + t * params.tau) / static_cast<double>(params.m);
}

Complex reduce_to_cell(const LatticeParams& params, Complex z) {
  const double md = static_cast<double>(params.m);
  const Complex w = md * z;
  double t = w.imag() / params.tau.imag();
  double s = w.real() - t * params.tau.real();
  s -= std::floor(s);
  t -= std::floor(t);
  if (s >= 1.0) s = 0.0;
  if (t >= 1.0) t = 0.0;
  return (s + t * params.tau) / md;
}

double lattice_distance(Complex z, Complex tau) {
  const double t = z.imag() / tau.imag();
  const double s = z.real() - t * tau.real();
  const double bs = std::round(s);
  const double bt = std::round(t);
  double best = std::numeric_limits<double>::infinity();
  for (int da = -1; da <= 1; ++da)
    for (int db = -1; db <= 1; ++db) best = std::min(best, std::abs(z - (bs + da) - (bt + db) * tau));
  return best;
}

double cell_distance(const LatticeParams& params, Complex z, Complex w) {
  const double md = static_cast<double>(params.m);
  return lattice_distance(md * (z - w), params.tau) / md;
}

double sum_rule_defect(const LatticeParams& params, const std::vector<Complex>& zeros) {
  const double md = static_cast<double>(params.m);
  Complex total{};
  for (const Complex& z : zeros) total += z;
  const Complex target = md * params.c + md * static_cast<double>(params.n) / 2.0;
  return lattice_distance(md * total - target, params.tau);
}

ThetaElement random_element(Complex tau, std::size_t m, std::size_t n, Rng& rng) {
  LatticeParams params{tau, m, n, {}};
  const double s = rng.uniform();
  params.c = s + rng.uniform() * tau;
  const BasisHandle basis = mtheta_basis(params);
  return ThetaElement(basis, rng.complex_normal_vector(static_cast<Eigen::Index>(basis->dimension())));
}

}  // namespace twistlab::mtheta
