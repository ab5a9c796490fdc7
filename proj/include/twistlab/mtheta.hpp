#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "twistlab/linalg.hpp"
#include "twistlab/parallel.hpp"
#include "twistlab/permutation.hpp"
#include "twistlab/transpositions.hpp"

namespace twistlab::mtheta {

/// Lattice Gamma = Z + tau Z, matrix size m, degree n and characteristic c of
/// the space of holomorphic f: C -> Mat_m with
///   f(z + 1/m)   = g1^-1 f(z) g1
///   f(z + tau/m) = exp(-2 pi i (m n z - c)) g2^-1 f(z) g2.
struct LatticeParams {
  Complex tau{0.0, 1.0};
  std::size_t m = 1;
  std::size_t n = 1;
  Complex c{0.0, 0.0};

  /// Throws DimensionMismatch for m or n out of range, ConvergenceFailure for Im tau < 0.3.
  void validate() const;
  /// Characteristic of the scalar theta space holding the matrix entries:
  /// c1 = m c - n m (m - 1) tau / 2.
  Complex entry_shift() const;
  std::size_t entry_order() const { return m * m * n; }
  bool operator==(const LatticeParams&) const = default;
};

inline constexpr double kMinImTau = 0.3;
inline constexpr std::size_t kMaxThetaTerms = 1024;

/// g1 = diag(eps^0, ..., eps^(m-1)) and the cyclic shift g2 e_a = e_(a+1),
/// eps = exp(2 pi i / m).
std::pair<CMatrix, CMatrix> clifford_pair(std::size_t m);

/// Basis theta_0..theta_(L-1) of the scalar space
///   th(z + 1) = th(z),  th(z + tau) = exp(-2 pi i (L z - c1)) th(z),
/// with Fourier coefficients a_(k+L) = a_k exp(2 pi i k tau) exp(-2 pi i c1)
/// and a_alpha = 1.
class ScalarThetaBasis {
 public:
  ScalarThetaBasis(std::size_t order, Complex shift, Complex tau);

  std::size_t order() const { return order_; }
  Complex shift() const { return shift_; }
  Complex tau() const { return tau_; }
  /// Largest number of Fourier terms any basis function needs on the strip
  /// |Im z| <= 2 Im tau to reach double precision.
  std::size_t truncation() const { return truncation_; }

  Complex evaluate(std::size_t alpha, Complex z) const;
  CVector evaluate_all(Complex z) const;
  /// Largest single Fourier term over the basis at z: the natural size of the
  /// space there, which unlike the functions themselves never vanishes.
  double magnitude(Complex z) const;

 private:
  std::size_t order_;
  Complex shift_;
  Complex tau_;
  std::size_t truncation_ = 0;
};

ScalarThetaBasis scalar_theta_basis(std::size_t order, Complex shift, Complex tau);

/// Orthonormal basis of the matrix theta space. Element k is stored as an
/// (m^2 x L) coefficient table over the scalar basis; row i*m + j holds entry (i, j).
class MThetaBasis {
 public:
  explicit MThetaBasis(const LatticeParams& params, Execution exec = Execution::Parallel);

  const LatticeParams& params() const { return params_; }
  const ScalarThetaBasis& scalar() const { return scalar_; }
  std::size_t dimension() const { return tables_.size(); }
  const CMatrix& table(std::size_t k) const { return tables_[k]; }

  CMatrix evaluate(std::size_t k, Complex z) const;
  /// All basis elements at z, sharing one scalar evaluation.
  std::vector<CMatrix> evaluate_all(Complex z) const;
  /// Coefficient table of sum_k x_k B_k.
  CMatrix combine(const CVector& x) const;
  /// Worst relative residual of both transformation laws over the holdout points.
  double holdout_residual() const { return holdout_residual_; }

 private:
  LatticeParams params_;
  ScalarThetaBasis scalar_;
  std::vector<CMatrix> tables_;
  double holdout_residual_ = 0.0;
};

using BasisHandle = std::shared_ptr<const MThetaBasis>;

/// Cached basis for `params`; DimensionMismatch unless the nullspace has
/// dimension m^2 n.
BasisHandle mtheta_basis(const LatticeParams& params);

/// Element of a matrix theta space, projectively normalized (largest
/// coefficient equal to 1).
class ThetaElement {
 public:
  ThetaElement(BasisHandle basis, CVector coeffs);

  const LatticeParams& params() const { return basis_->params(); }
  const BasisHandle& basis() const { return basis_; }
  const CVector& coeffs() const { return coeffs_; }

  CMatrix operator()(Complex z) const;
  Complex det(Complex z) const;
  /// Natural size of f near z: |coefficient table| times the scalar magnitude.
  double scale(Complex z) const;
  /// Worst relative residual of the two transformation laws at z.
  double law_residual(Complex z) const;

 private:
  BasisHandle basis_;
  CVector coeffs_;
  CMatrix table_;
};

/// Points of the fundamental cell {s/m + t tau/m : s, t in [0, 1)}.
Complex cell_point(const LatticeParams& params, double s, double t);
/// Representative of z modulo (1/m) Gamma in the fundamental cell.
Complex reduce_to_cell(const LatticeParams& params, Complex z);
/// Distance from z to the nearest point of the lattice Z + tau Z.
double lattice_distance(Complex z, Complex tau);
/// Distance between z and w modulo (1/m) Gamma.
double cell_distance(const LatticeParams& params, Complex z, Complex w);

/// Defect of the zero-sum rule: distance of m * sum(zeros) - (m c + m n / 2)
/// to the lattice Gamma.
double sum_rule_defect(const LatticeParams& params, const std::vector<Complex>& zeros);

struct ZeroOptions {
  std::size_t grid = 48;
  double newton_step = 1e-6;
  double dedup = 1e-4;
  double sum_tol = 1e-6;
  Execution exec = Execution::Parallel;
};

/// Zeros of det f modulo (1/m) Gamma, in the fundamental cell, canonical order.
std::vector<Complex> det_zeros(const ThetaElement& f, const ZeroOptions& options = {});

/// Normalized |det f| on a grid x grid lattice of the fundamental cell, row
/// index t (tau direction), column index s. The weight removes the
/// quasi-periodic growth so the field is doubly periodic.
std::vector<double> scan_det_grid(const ThetaElement& f, std::size_t grid,
                                  Execution exec = Execution::Parallel);

struct ThetaOptions {
  double rank_tol = 1e-8;
  double fit_tol = 1e-6;
  double sum_tol = 1e-6;
  double kernel_tol = linalg::kGenericTol;
};

/// Unique (projective) element with f(points[b]) vectors[b] = 0.
ThetaElement interpolate(const LatticeParams& params, const std::vector<Complex>& points,
                         const std::vector<CVector>& vectors, const ThetaOptions& options = {});

/// Least-squares projection of z -> values(z) onto the space of `params`.
/// Throws ResidualTooLarge above options.fit_tol; reports the residual.
ThetaElement fit(const LatticeParams& params, const std::function<CMatrix(Complex)>& values,
                 const ThetaOptions& options = {}, double* residual = nullptr);

/// Pointwise product fitted into the space of degree n_f + n_g and characteristic c_f + c_g.
ThetaElement multiply(const ThetaElement& f, const ThetaElement& g, const ThetaOptions& options = {},
                      double* residual = nullptr);

/// Factorization f = f_1 ... f_n (projective) with S(f_i) = partition[i] and
/// characteristics c_split[i].
std::vector<ThetaElement> factorize_theta(const ThetaElement& f,
                                          const std::vector<std::vector<Complex>>& partition,
                                          const std::vector<Complex>& c_split,
                                          const ThetaOptions& options = {});

/// Same, with c_i = sum(partition[i]) - 1/2 for i < n and the remainder for the last factor.
std::vector<ThetaElement> factorize_theta(const ThetaElement& f,
                                          const std::vector<std::vector<Complex>>& partition,
                                          const ThetaOptions& options = {});

/// A degree-1 element with its ordered zero set.
struct ThetaPoint {
  ThetaElement element;
  std::vector<Complex> zeros;
};

ThetaPoint make_theta_point(ThetaElement element, const ZeroOptions& options = {});

/// (f, g) -> (f1, g1) with f g = f1 g1, S(f1) = S(g), S(g1) = S(f). The
/// characteristics travel with the zero sets: c(f1) = c(g), c(g1) = c(f).
std::pair<ThetaPoint, ThetaPoint> theta_mu(const ThetaPoint& f, const ThetaPoint& g,
                                           const ThetaOptions& options = {});

/// Action of sigma in S_{mN} on ordered degree-1 factors.
std::vector<ThetaPoint> act_ordered_theta(const Permutation& sigma, std::vector<ThetaPoint> factors,
                                          const ThetaOptions& options = {});

/// Projective distance of two elements measured on fixed probe points:
/// min over phases of |f/|f| - e^{i t} g/|g|| on the stacked values.
double projective_distance(const ThetaElement& a, const ThetaElement& b);
/// |<x, y>| / (|x| |y|) for elements over the same basis.
double coefficient_alignment(const ThetaElement& a, const ThetaElement& b);

/// Max over probes of |f(z) g(z) - s h(z)| / |f(z) g(z)| with the best-fit scalar s.
double product_defect(const std::vector<const ThetaElement*>& lhs,
                      const std::vector<const ThetaElement*>& rhs);

/// Random degree-1 element with random characteristic c = s + t tau.
ThetaElement random_element(Complex tau, std::size_t m, std::size_t n, Rng& rng);

/// theta_mu as a twisted map on degree-1 points of the given lattice and size.
TwistedMap theta_map(Complex tau, std::size_t m);

}  // namespace twistlab::mtheta
