#include "twistlab/matpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twistlab/error.hpp"

namespace twistlab::matpoly {

namespace {

// Relative gate for every identity the module asserts after the fact.
constexpr double kAssertTol = 1e-8;
// Partition labels are matched to computed roots within this (relative).
constexpr double kMatchTol = 1e-6;

CMatrix identity(std::size_t m) {
  const auto n = static_cast<Eigen::Index>(m);
  return CMatrix::Identity(n, n);
}

double spectrum_scale(const Spectrum& s) {
  double scale = 1.0;
  for (const auto& v : s) scale = std::max(scale, std::abs(v));
  return scale;
}

void check_square(const CMatrix& a, std::size_t m, const char* what) {
  if (static_cast<std::size_t>(a.rows()) != m || static_cast<std::size_t>(a.cols()) != m)
    throw Error(ErrorKind::SizeMismatch, std::string(what) + ": expected " + std::to_string(m) + "x" +
                                             std::to_string(m) + " matrix");
}

}  // namespace

std::vector<CMatrix> MatrixPolynomial::power_coefficients() const {
  const auto d = degree();
  std::vector<CMatrix> power(d + 1);
  power[d] = identity(m);
  for (std::size_t j = 1; j <= d; ++j) power[d - j] = (j % 2 == 0 ? 1.0 : -1.0) * coeffs[j - 1];
  return power;
}

MatrixPolynomial MatrixPolynomial::from_power_coefficients(const std::vector<CMatrix>& power) {
  if (power.empty()) throw Error(ErrorKind::SizeMismatch, "polynomial needs a leading coefficient");
  MatrixPolynomial out;
  out.m = static_cast<std::size_t>(power.back().rows());
  const auto d = power.size() - 1;
  for (std::size_t j = 1; j <= d; ++j) out.coeffs.push_back((j % 2 == 0 ? 1.0 : -1.0) * power[d - j]);
  return out;
}

CMatrix MatrixPolynomial::evaluate(Complex t) const {
  CMatrix acc = identity(m);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const double sign = (j % 2 == 0) ? -1.0 : 1.0;
    acc = acc * t + sign * coeffs[j];
  }
  return acc;
}

Spectrum FactorTuple::labels() const {
  Spectrum out;
  for (const auto& s : spectra) out.insert(out.end(), s.begin(), s.end());
  return out;
}

FactorTuple make_factor_tuple(const std::vector<CMatrix>& factors, double tol) {
  FactorTuple out;
  out.factors = factors;
  for (const auto& b : factors) out.spectra.push_back(linalg::eigen(b, true, tol).values);
  return out;
}

MatrixPolynomial multiply(const std::vector<CMatrix>& factors) {
  if (factors.empty()) throw Error(ErrorKind::SizeMismatch, "multiply: no factors");
  const auto m = static_cast<std::size_t>(factors.front().rows());
  // power[k] is the coefficient of t^k of the running product.
  std::vector<CMatrix> power{identity(m)};
  for (const auto& b : factors) {
    check_square(b, m, "multiply");
    std::vector<CMatrix> next(power.size() + 1, CMatrix::Zero(b.rows(), b.cols()));
    for (std::size_t k = 0; k < power.size(); ++k) {
      next[k + 1] += power[k];
      next[k] -= power[k] * b;
    }
    power = std::move(next);
  }
  return MatrixPolynomial::from_power_coefficients(power);
}

MatrixPolynomial multiply(const FactorTuple& factors) { return multiply(factors.factors); }

double polynomial_distance(const MatrixPolynomial& a, const MatrixPolynomial& b) {
  if (a.m != b.m || a.degree() != b.degree()) return std::numeric_limits<double>::infinity();
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t j = 0; j < a.degree(); ++j) {
    diff += (a.coeffs[j] - b.coeffs[j]).squaredNorm();
    norm += b.coeffs[j].squaredNorm();
  }
  return std::sqrt(diff) / std::max(1.0, std::sqrt(norm));
}

Spectrum spectrum(const MatrixPolynomial& poly, double tol) {
  const auto d = poly.degree();
  if (d == 0) throw Error(ErrorKind::DegreeZero, "spectrum: constant polynomial");
  const auto total = poly.m * d;
  const auto nodes = total + 1;

  // Roots lie inside max_j |a_j|^(1/j) up to a constant; sample on that circle.
  double radius = 1.0;
  for (std::size_t j = 0; j < d; ++j)
    radius = std::max(radius, std::pow(poly.coeffs[j].norm(), 1.0 / static_cast<double>(j + 1)));

  std::vector<Complex> values(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nodes);
    const Complex t = radius * std::polar(1.0, angle);
    values[k] = poly.evaluate(t).partialPivLu().determinant();
  }
  // Inverse DFT recovers c_j r^j for the coefficient c_j of t^j.
  std::vector<Complex> highest_first(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < nodes; ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(j * k % nodes) /
                           static_cast<double>(nodes);
      acc += values[k] * std::polar(1.0, angle);
    }
    acc /= static_cast<double>(nodes);
    acc /= std::pow(radius, static_cast<double>(j));
    highest_first[total - j] = acc;
  }
  highest_first[0] = 1.0;  // det of a monic matrix polynomial is monic
  Spectrum roots = linalg::poly_roots(highest_first);
  if (linalg::min_gap(roots) < tol * spectrum_scale(roots))
    throw Error(ErrorKind::NonGeneric, "spectrum: repeated root of det P(t)");
  return roots;
}

PairSwap transpose_pair(const CMatrix& a1, const CMatrix& a2, double tol) {
  const auto m = static_cast<std::size_t>(a1.rows());
  check_square(a1, m, "transpose_pair");
  check_square(a2, m, "transpose_pair");
  PairSwap out;
  out.lambda = linalg::solve_sylvester(a2, a1, identity(m), tol);
  Eigen::JacobiSVD<CMatrix> svd(out.lambda);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= tol * s(0))
    throw Error(ErrorKind::SingularLambda, "transpose_pair: Lambda is not invertible");
  const CMatrix lambda_inv = out.lambda.inverse();
  out.b1 = a1 + lambda_inv;
  out.b2 = a2 - lambda_inv;

  const double product_scale = std::max(1.0, a1.norm() * a2.norm());
  if ((out.b1 * out.b2 - a1 * a2).norm() > kAssertTol * product_scale)
    throw Error(ErrorKind::ResidualTooLarge, "transpose_pair: b1 b2 != a1 a2");
  auto spectrum_moved = [&](const CMatrix& b, const CMatrix& a) {
    for (const auto& lam : linalg::eigenvalues(a)) {
      const CMatrix shifted = b - lam * identity(m);
      if (linalg::min_singular_value(shifted) > kAssertTol * std::max(1.0, b.norm() + std::abs(lam)))
        return false;
    }
    return true;
  };
  if (!spectrum_moved(out.b1, a2) || !spectrum_moved(out.b2, a1))
    throw Error(ErrorKind::ResidualTooLarge, "transpose_pair: spectra not exchanged");
  return out;
}

namespace {

void validate_partition(const MatrixPolynomial& poly, const Partition& partition, double tol) {
  if (partition.size() != poly.degree())
    throw Error(ErrorKind::PartitionInvalid, "partition has " + std::to_string(partition.size()) +
                                                 " blocks, polynomial degree is " +
                                                 std::to_string(poly.degree()));
  Spectrum labels;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    if (partition[i].size() != poly.m)
      throw Error(ErrorKind::PartitionInvalid, "block " + std::to_string(i) + " has " +
                                                   std::to_string(partition[i].size()) +
                                                   " eigenvalues, expected " + std::to_string(poly.m));
    labels.insert(labels.end(), partition[i].begin(), partition[i].end());
  }
  const double scale = spectrum_scale(labels);
  if (linalg::min_gap(labels) < tol * scale)
    throw Error(ErrorKind::PartitionInvalid, "partition blocks are not disjoint");

  const Spectrum roots = spectrum(poly, tol);
  std::vector<bool> used(roots.size(), false);
  for (const auto& lam : labels) {
    std::size_t best = roots.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < roots.size(); ++k) {
      const double dist = std::abs(roots[k] - lam);
      if (!used[k] && dist < best_dist) {
        best = k;
        best_dist = dist;
      }
    }
    if (best == roots.size() || best_dist > kMatchTol * scale)
      throw Error(ErrorKind::PartitionInvalid, "partition value is not a root of det P(t)");
    used[best] = true;
  }
}

}  // namespace

FactorTuple factorize(const MatrixPolynomial& poly, const Partition& partition, double tol) {
  if (poly.degree() == 0) throw Error(ErrorKind::DegreeZero, "factorize: constant polynomial");
  validate_partition(poly, partition, tol);
  const auto d = poly.degree();
  const auto m = static_cast<Eigen::Index>(poly.m);

  FactorTuple out;
  out.factors.resize(d);
  out.spectra = partition;

  std::vector<CMatrix> power = poly.power_coefficients();
  MatrixPolynomial current = poly;
  for (std::size_t i = d; i-- > 1;) {
    CMatrix kernels(m, m);
    const std::vector<CMatrix> coeffs = current.power_coefficients();
    for (Eigen::Index k = 0; k < m; ++k) {
      const Complex t = partition[i][static_cast<std::size_t>(k)];
      double size = 0.0;
      for (std::size_t j = coeffs.size(); j-- > 0;) size = size * std::abs(t) + coeffs[j].norm();
      kernels.col(k) = linalg::nullspace_vector(current.evaluate(t), tol, size);
    }
    if (linalg::min_singular_value(kernels) < tol)
      throw Error(ErrorKind::NonGeneric, "factorize: kernel vectors of block " + std::to_string(i) +
                                             " are linearly dependent");
    CMatrix diag = CMatrix::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) diag(k, k) = partition[i][static_cast<std::size_t>(k)];
    const CMatrix b = kernels * diag * kernels.inverse();

    // Right division P(t) = Q(t) (t - b); the remainder is P evaluated at b from the right.
    const auto k_deg = power.size() - 1;
    std::vector<CMatrix> quotient(k_deg);
    quotient[k_deg - 1] = power[k_deg];
    for (std::size_t j = k_deg - 1; j >= 1; --j) quotient[j - 1] = power[j] + quotient[j] * b;
    const CMatrix remainder = power[0] + quotient[0] * b;
    double scale = 0.0;
    double b_pow = 1.0;
    for (const auto& p : power) {
      scale += p.norm() * b_pow;
      b_pow *= b.norm();
    }
    if (remainder.norm() > kAssertTol * std::max(1.0, scale))
      throw Error(ErrorKind::ResidualTooLarge, "factorize: right division leaves a remainder");

    out.factors[i] = b;
    power = std::move(quotient);
    current = MatrixPolynomial::from_power_coefficients(power);
  }
  out.factors[0] = current.coeffs[0];

  if (polynomial_distance(multiply(out.factors), poly) > kAssertTol)
    throw Error(ErrorKind::ResidualTooLarge, "factorize: product does not reproduce the polynomial");
  return out;
}

FactorTuple elementary_step(std::size_t j, FactorTuple factors, double tol) {
  if (factors.size() == 0) throw Error(ErrorKind::SizeMismatch, "elementary_step: empty tuple");
  const auto m = factors.spectra.front().size();
  const auto total = m * factors.size();
  if (j == 0 || j >= total)
    throw Error(ErrorKind::SchemaError, "elementary_step: generator out of range");
  const auto p = j - 1;
  const auto block = p / m;
  if ((p + 1) / m == block) {
    std::swap(factors.spectra[block][p % m], factors.spectra[block][p % m + 1]);
    return factors;
  }
  Spectrum left = factors.spectra[block];
  Spectrum right = factors.spectra[block + 1];
  std::swap(left.back(), right.front());
  const auto product = multiply({factors.factors[block], factors.factors[block + 1]});
  const auto refactored = factorize(product, {left, right}, tol);
  factors.factors[block] = refactored.factors[0];
  factors.factors[block + 1] = refactored.factors[1];
  factors.spectra[block] = std::move(left);
  factors.spectra[block + 1] = std::move(right);
  return factors;
}

FactorTuple act_ordered(const Permutation& sigma, FactorTuple factors, double tol) {
  if (factors.size() == 0) return factors;
  const auto total = factors.spectra.front().size() * factors.size();
  if (sigma.size() != total || !is_permutation(sigma))
    throw Error(ErrorKind::SchemaError, "act_ordered: sigma must permute " + std::to_string(total) + " labels");
  const auto word = reduced_word(sigma);
  for (std::size_t step = 0; step < word.size(); ++step) {
    try {
      factors = elementary_step(word[step], std::move(factors), tol);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string("act_ordered: ") + e.what(), static_cast<int>(step));
    }
  }
  return factors;
}

TwistedMap pair_map(std::size_t m) {
  if (m == 0) throw Error(ErrorKind::SizeMismatch, "pair_map: m must be positive");
  TwistedMap map;
  map.name = "matpoly";
  map.domain = DomainKind::OrderedMatrix;
  map.is_generic = [](const Point& a, const Point& b) {
    const auto& x = as_ordered(a);
    const auto& y = as_ordered(b);
    const double scale = std::max(spectrum_scale(x.spectrum), spectrum_scale(y.spectrum));
    return linalg::min_separation(x.spectrum, y.spectrum) >= linalg::kGenericTol * scale;
  };
  map.apply = [](const Point& a, const Point& b) -> PointPair {
    const auto& x = as_ordered(a);
    const auto& y = as_ordered(b);
    auto swapped = transpose_pair(x.matrix, y.matrix);
    return {OrderedMatrix{std::move(swapped.b1), y.spectrum},
            OrderedMatrix{std::move(swapped.b2), x.spectrum}};
  };
  const auto dim = static_cast<Eigen::Index>(m);
  map.sample = [dim](Rng& rng) -> Point {
    CMatrix b = rng.complex_normal_matrix(dim, dim);
    auto spectrum = linalg::eigen(b, true).values;
    return OrderedMatrix{std::move(b), std::move(spectrum)};
  };
  map.distance = point_distance;
  return map;
}

}  // namespace twistlab::matpoly
