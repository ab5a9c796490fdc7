#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "twistlab/linalg.hpp"
#include "twistlab/parallel.hpp"
#include "twistlab/permutation.hpp"
#include "twistlab/transpositions.hpp"
#include "twistlab/verification.hpp"

namespace twistlab::ybe {

/// Dense operator on a tensor product. The first leg is the slowest index:
/// e_i (x) e_j sits at position i * legs[1] + j.
struct TensorOperator {
  std::vector<std::size_t> legs;
  CMatrix matrix;
};

/// R(u, v): V(u) (x) V(v) -> V(phi(u, v)) (x) V(psi(u, v)) for a twisted map.
struct RMatrix {
  std::string name;
  std::size_t n = 0;
  std::function<CMatrix(const Point&, const Point&)> evaluate;
  TwistedMap map;
};

/// L(u): V(u) (x) W -> W (x) V(u). Input index i * w + a, output index b * n + alpha.
struct LOperator {
  std::string name;
  std::size_t n = 0;
  std::size_t w = 0;
  std::function<CMatrix(const Point&)> evaluate;
};

/// Flip P(e_i (x) e_j) = e_j (x) e_i on C^n (x) C^n.
CMatrix flip(std::size_t n);

/// Places a two-leg operator on legs (leg, leg + 1) of V^(x legs), zero-based leg.
CMatrix embed_pair(const CMatrix& op, std::size_t leg, std::size_t legs, std::size_t n);

/// relabel_id (identity) or relabel_swap (flip) over `map`; otherwise UnknownR.
RMatrix builtin_R(const std::string& name, const TwistedMap& map, std::size_t n);
/// Point-independent R given by a fixed n^2 x n^2 matrix.
RMatrix constant_R(const std::string& name, const CMatrix& matrix, const TwistedMap& map);

double inverse_residual(const RMatrix& r, const Point& u, const Point& v);
double tybe_residual(const RMatrix& r, const Point& u, const Point& v, const Point& w);

VerificationReport verify_inverse(const RMatrix& r, std::size_t samples, std::uint64_t seed, double tol,
                                  Execution exec = Execution::Parallel);
VerificationReport verify_tybe(const RMatrix& r, std::size_t samples, std::uint64_t seed, double tol,
                               Execution exec = Execution::Parallel);

/// L(u) = A for all u. A maps V (x) W -> W (x) V.
LOperator constant_L(const std::string& name, const CMatrix& a, std::size_t n, std::size_t w);
/// L(u) = u A on scalar points.
LOperator linear_L(const std::string& name, const CMatrix& a, std::size_t n, std::size_t w);
/// L(u) = diag(1, u, ..., u^(n-1)) with w = 1, on scalar points.
LOperator diagonal_L(std::size_t n);

double l_residual(const LOperator& l, const RMatrix& r, const Point& u, const Point& v);
VerificationReport verify_L(const LOperator& l, const RMatrix& r, std::size_t samples, std::uint64_t seed,
                            double tol, Execution exec = Execution::Parallel);

/// (1_W1 (x) L_b(u)) (L_a(u) (x) 1_W2) on V (x) W1 (x) W2.
LOperator compose_L(const LOperator& a, const LOperator& b);

/// Q(u) = sum_i L^i_i(u), an operator on W.
CMatrix q_operator(const LOperator& l, const Point& u);
double q_residual(const LOperator& l, const TwistedMap& map, const Point& u, const Point& v);
VerificationReport q_check(const LOperator& l, const TwistedMap& map, std::size_t samples, std::uint64_t seed,
                           double tol, Execution exec = Execution::Parallel);

struct Scattering {
  TensorOperator op;
  std::vector<Point> params;
};

/// Accumulates R on legs (i, i + 1) letter by letter while the parameters
/// move by sigma_i.
Scattering scattering(const RMatrix& r, const SigmaWord& word, std::vector<Point> params);

/// Largest discrepancy (operator and parameters) between two words on the same parameters.
double scattering_path_residual(const RMatrix& r, const SigmaWord& a, const SigmaWord& b,
                                const std::vector<Point>& params);

}  // namespace twistlab::ybe
