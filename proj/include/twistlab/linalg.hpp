#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace twistlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Ordered list of eigenvalues or roots. Canonical order is lexicographic in
/// (real, imaginary) unless a caller has permuted it on purpose.
using Spectrum = std::vector<Complex>;

namespace linalg {

/// Relative genericity gate. Eigenvalue gaps, spectral separations and rank
/// decisions are measured against this times a norm scale.
inline constexpr double kGenericTol = 1e-7;

// Real parts closer than this (relative) are treated as ties and ordered by
// their imaginary parts, so conjugate pairs with round-off in Re sort stably.
inline constexpr double kOrderTieTol = 1e-9;

bool canonical_less(Complex a, Complex b, double scale = 1.0);
void sort_canonical(Spectrum& values);

/// Smallest pairwise distance inside `values` (infinity for fewer than two).
double min_gap(const Spectrum& values);
/// Smallest distance between an element of `a` and an element of `b`.
double min_separation(const Spectrum& a, const Spectrum& b);

struct EigenDecomposition {
  Spectrum values;
  CMatrix vectors;  // unit columns, largest entry real positive
};

/// Eigen-decomposition in canonical order. With `ordered` set, eigenvalues
/// closer than tol * max(1, |A|) raise NonGeneric.
EigenDecomposition eigen(const CMatrix& a, bool ordered = true,
                         double tol = kGenericTol);

Spectrum eigenvalues(const CMatrix& a);

/// Unit vector spanning the numerical kernel of a square matrix whose
/// nullity at `tol` is exactly one. The cutoff is relative to the larger of
/// `scale` and the largest singular value, so a caller can pass the natural
/// size of a matrix that is tiny as a whole (a 1x1 value at a root).
CVector nullspace_vector(const CMatrix& a, double tol = kGenericTol, double scale = 0.0);

/// Solves A X - X B = C through the dense Kronecker system over vec(X).
CMatrix solve_sylvester(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                        double tol = kGenericTol);

/// Roots of sum_k coeffs[k] t^(d-k) (highest degree first) via the companion
/// matrix, polished by Newton and returned in canonical order.
Spectrum poly_roots(std::span<const Complex> coeffs);

Complex poly_eval(std::span<const Complex> coeffs, Complex t);

CMatrix kron(const CMatrix& a, const CMatrix& b);
double spectral_norm(const CMatrix& a);
double min_singular_value(const CMatrix& a);

/// |a - b|_F / max(1, |b|_F).
double relative_distance(const CMatrix& a, const CMatrix& b);
double relative_distance(Complex a, Complex b);

/// Rescales v so its largest-magnitude entry is real and positive.
void fix_phase(CVector& v);

}  // namespace linalg
}  // namespace twistlab
