#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "twistlab/transpositions.hpp"
#include "twistlab/verification.hpp"
#include "twistlab/ybe.hpp"

namespace twistlab::gf {

/// A local S_m action on U (point maps g_1..g_(m-1)), the pair map f on U x U
/// for the transposition (m, m + 1) of S_2m, and operator families
///   G_i(u): V(u) -> V(g_i(u)),  F(u, v): V(u) (x) V(v) -> V(lambda) (x) V(mu).
struct GFSystem {
  std::string name;
  std::size_t m = 1;
  std::size_t n = 1;
  std::vector<std::function<Point(const Point&)>> g;       // g[i - 1] = g_i
  std::function<PointPair(const Point&, const Point&)> f;  // (lambda, mu)
  std::vector<std::function<CMatrix(const Point&)>> G;     // G[i - 1] = G_i
  std::function<CMatrix(const Point&, const Point&)> F;
  std::function<Point(Rng&)> sample;
  std::function<double(const Point&, const Point&)> distance;
};

/// U = C^m (column matrices) with g_i acting by the scalar rational map on
/// coordinates (i, i + 1) and f on (u_m, v_1). G_i and F are identities on C^n.
GFSystem trivial_gf_system(std::size_t m, std::size_t n = 2);
/// Same action with G_i = -1 and F = -1.
GFSystem sign_gf_system(std::size_t m, std::size_t n = 2);
/// Trivial system with G_1 replaced by a fixed random constant.
GFSystem perturbed_gf_system(std::size_t m, std::size_t n, std::uint64_t seed);

/// Checks point relations (involutions, braids, far commutation) and the
/// operator identities: both inverse compositions, the G braid square and the
/// two F-G squares. For m = 1 it checks R = F against f instead.
VerificationReport gf_verify(const GFSystem& sys, std::size_t samples, std::uint64_t seed, double tol,
                             Execution exec = Execution::Parallel);

/// Reduced word on 2m letters for the factor sequence P_1 ... P_m, where
///   P_alpha = s_(m-alpha+1) ... s_(m-1) s_m s_(m+1) ... s_(2m-alpha),
/// s_i = g_i x id for i < m, s_m = f, s_(m+j) = id x g_j.
SigmaWord gf_word(std::size_t m);

/// The twisted map of the block swap (i, m + i) of S_2m and the R-matrix of
/// the ordered m^2-factor product, arguments threaded from the right.
std::pair<TwistedMap, ybe::RMatrix> gf_compose(const GFSystem& sys);

/// Applies letters of S_2m to (u, v) left to right: s_i = g_i x id for i < m,
/// s_m = f, s_(m+j) = id x g_j.
PointPair act_pair(const GFSystem& sys, const SigmaWord& word, Point u, Point v);

/// Distance between mu(u, v) and the action of a reduced word of the block swap.
double shuffle_residual(const GFSystem& sys, const TwistedMap& mu, const Point& u, const Point& v);

}  // namespace twistlab::gf
