#include "twistlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twistlab/error.hpp"

namespace twistlab::linalg {

bool canonical_less(Complex a, Complex b, double scale) {
  const double tie = kOrderTieTol * std::max(1.0, scale);
  if (std::abs(a.real() - b.real()) > tie) return a.real() < b.real();
  return a.imag() < b.imag();
}

void sort_canonical(Spectrum& values) {
  double scale = 0.0;
  for (const auto& v : values) scale = std::max(scale, std::abs(v));
  // Insertion sort: the tie tolerance makes the comparator non-transitive in
  // corner cases, which std::sort does not tolerate.
  for (std::size_t i = 1; i < values.size(); ++i) {
    for (std::size_t j = i; j > 0 && canonical_less(values[j], values[j - 1], scale); --j) {
      std::swap(values[j], values[j - 1]);
    }
  }
}

double min_gap(const Spectrum& values) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      gap = std::min(gap, std::abs(values[i] - values[j]));
  return gap;
}

double min_separation(const Spectrum& a, const Spectrum& b) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& x : a)
    for (const auto& y : b) gap = std::min(gap, std::abs(x - y));
  return gap;
}

void fix_phase(CVector& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(best)) * (1.0 + 1e-12)) best = i;
  if (v.size() == 0 || std::abs(v(best)) == 0.0) return;
  v *= std::conj(v(best)) / std::abs(v(best));
}

EigenDecomposition eigen(const CMatrix& a, bool ordered, double tol) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::SizeMismatch, "eigen: matrix not square");
  Eigen::ComplexEigenSolver<CMatrix> solver(a, true);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::ConvergenceFailure, "eigen: QR iteration did not converge");

  const auto n = a.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  Spectrum raw(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  double scale = 0.0;
  for (const auto& v : raw) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 1; i < order.size(); ++i)
    for (std::size_t j = i; j > 0 && canonical_less(raw[order[j]], raw[order[j - 1]], scale); --j)
      std::swap(order[j], order[j - 1]);

  EigenDecomposition out;
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values.push_back(raw[static_cast<std::size_t>(src)]);
    CVector col = solver.eigenvectors().col(src);
    col.normalize();
    fix_phase(col);
    out.vectors.col(k) = col;
  }
  if (ordered && min_gap(out.values) < tol * std::max(1.0, a.norm()))
    throw Error(ErrorKind::NonGeneric, "eigen: repeated eigenvalue under ordered-spectrum request");
  return out;
}

Spectrum eigenvalues(const CMatrix& a) {
  Eigen::ComplexEigenSolver<CMatrix> solver(a, false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::ConvergenceFailure, "eigenvalues: QR iteration did not converge");
  Spectrum out(solver.eigenvalues().data(), solver.eigenvalues().data() + a.rows());
  sort_canonical(out);
  return out;
}

CVector nullspace_vector(const CMatrix& a, double tol, double scale) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::SizeMismatch, "nullspace_vector: matrix not square");
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = tol * std::max({s(0), scale, std::numeric_limits<double>::min()});
  Eigen::Index nullity = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) <= cutoff) ++nullity;
  if (nullity != 1)
    throw Error(ErrorKind::RankUnexpected,
                "nullspace_vector: nullity " + std::to_string(nullity) + ", expected 1");
  CVector v = svd.matrixV().col(a.cols() - 1);
  v.normalize();
  fix_phase(v);
  return v;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

double min_singular_value(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

double relative_distance(const CMatrix& a, const CMatrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

double relative_distance(Complex a, Complex b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

CMatrix solve_sylvester(const CMatrix& a, const CMatrix& b, const CMatrix& c, double tol) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || c.rows() != a.rows() || c.cols() != b.rows())
    throw Error(ErrorKind::SizeMismatch, "solve_sylvester: incompatible shapes");
  const double scale = std::max(1.0, a.norm() + b.norm());
  if (min_separation(eigenvalues(a), eigenvalues(b)) < tol * scale)
    throw Error(ErrorKind::SpectraOverlap, "solve_sylvester: spectra of A and B intersect");

  const auto p = a.rows();
  const auto q = b.rows();
  // Column-major vec: vec(A X) = (I (x) A) vec X, vec(X B) = (B^T (x) I) vec X.
  const CMatrix system = kron(CMatrix::Identity(q, q), a) - kron(b.transpose(), CMatrix::Identity(p, p));
  const CVector rhs = Eigen::Map<const CVector>(c.data(), c.size());
  const CVector sol = system.fullPivLu().solve(rhs);
  CMatrix x = Eigen::Map<const CMatrix>(sol.data(), p, q);

  const double residual = (a * x - x * b - c).norm();
  const double bound = 1e-10 * (a.norm() + b.norm()) * std::max(x.norm(), 1e-300);
  if (!(residual <= bound))
    throw Error(ErrorKind::ResidualTooLarge, "solve_sylvester: residual above bound");
  return x;
}

Complex poly_eval(std::span<const Complex> coeffs, Complex t) {
  Complex acc{0.0, 0.0};
  for (const auto& c : coeffs) acc = acc * t + c;
  return acc;
}

static std::pair<Complex, Complex> eval_with_derivative(std::span<const Complex> coeffs, Complex t) {
  Complex p{0.0, 0.0};
  Complex dp{0.0, 0.0};
  for (const auto& c : coeffs) {
    dp = dp * t + p;
    p = p * t + c;
  }
  return {p, dp};
}

Spectrum poly_roots(std::span<const Complex> coeffs) {
  std::size_t first = 0;
  while (first < coeffs.size() && coeffs[first] == Complex{0.0, 0.0}) ++first;
  if (coeffs.size() - first < 2)
    throw Error(ErrorKind::DegreeZero, "poly_roots: polynomial is constant");
  const auto poly = coeffs.subspan(first);
  const auto degree = static_cast<Eigen::Index>(poly.size() - 1);

  CMatrix companion = CMatrix::Zero(degree, degree);
  for (Eigen::Index j = 0; j < degree; ++j) companion(0, j) = -poly[static_cast<std::size_t>(j + 1)] / poly[0];
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;

  Spectrum roots = eigenvalues(companion);
  for (auto& r : roots) {
    for (int it = 0; it < 3; ++it) {
      const auto [p, dp] = eval_with_derivative(poly, r);
      if (dp == Complex{0.0, 0.0}) break;
      const Complex candidate = r - p / dp;
      if (std::abs(poly_eval(poly, candidate)) < std::abs(p)) r = candidate;
      else break;
    }
  }
  sort_canonical(roots);
  return roots;
}

}  // namespace twistlab::linalg
