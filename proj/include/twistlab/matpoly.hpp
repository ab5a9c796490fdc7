#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "twistlab/linalg.hpp"
#include "twistlab/permutation.hpp"
#include "twistlab/transpositions.hpp"

namespace twistlab::matpoly {

/// Monic matrix polynomial t^d - a1 t^(d-1) + a2 t^(d-2) - ... + (-1)^d ad,
/// stored as the list (a1, ..., ad).
struct MatrixPolynomial {
  std::size_t m = 0;
  std::vector<CMatrix> coeffs;

  std::size_t degree() const { return coeffs.size(); }
  CMatrix evaluate(Complex t) const;
  /// Coefficients P_k of t^k, k = 0..d (P_d = identity).
  std::vector<CMatrix> power_coefficients() const;
  static MatrixPolynomial from_power_coefficients(const std::vector<CMatrix>& power);
};

/// Ordered linear factors (t - b1) ... (t - bN), each with an ordered spectrum.
struct FactorTuple {
  std::vector<CMatrix> factors;
  std::vector<Spectrum> spectra;

  std::size_t size() const { return factors.size(); }
  /// Concatenation of the ordered spectra (length m N).
  Spectrum labels() const;
};

/// Disjoint eigenvalue blocks A1..Ad, each of size m.
using Partition = std::vector<Spectrum>;

/// Factors with their canonical ordered spectra; NonGeneric on repeated eigenvalues.
FactorTuple make_factor_tuple(const std::vector<CMatrix>& factors, double tol = linalg::kGenericTol);

MatrixPolynomial multiply(const std::vector<CMatrix>& factors);
MatrixPolynomial multiply(const FactorTuple& factors);

/// Roots of det P(t) from evaluation at md+1 scaled roots of unity and
/// interpolation; NonGeneric if two roots are closer than tol * scale.
Spectrum spectrum(const MatrixPolynomial& poly, double tol = linalg::kGenericTol);

struct PairSwap {
  CMatrix b1;
  CMatrix b2;
  CMatrix lambda;
};

/// (t - a1)(t - a2) = (t - b1)(t - b2) with S(b1) = S(a2), S(b2) = S(a1):
/// b1 = a1 + L^-1, b2 = a2 - L^-1 where a2 L - L a1 = 1.
PairSwap transpose_pair(const CMatrix& a1, const CMatrix& a2, double tol = linalg::kGenericTol);

/// Unique factorization with S(b_i) = A_i, peeled from the right.
FactorTuple factorize(const MatrixPolynomial& poly, const Partition& partition,
                      double tol = linalg::kGenericTol);

/// Action of sigma in S_{mN} on ordered factor tuples through adjacent
/// transpositions of the concatenated ordered spectra.
FactorTuple act_ordered(const Permutation& sigma, FactorTuple factors, double tol = linalg::kGenericTol);

/// One elementary step: swap spectrum labels j and j+1 (one-based) of the
/// concatenated ordered spectra, refactorizing at block boundaries.
FactorTuple elementary_step(std::size_t j, FactorTuple factors, double tol = linalg::kGenericTol);

/// The pair transposition as a twisted map on ordered m x m matrices.
TwistedMap pair_map(std::size_t m);

/// Relative distance between two polynomials of equal shape.
double polynomial_distance(const MatrixPolynomial& a, const MatrixPolynomial& b);

}  // namespace twistlab::matpoly
