#include <gtest/gtest.h>

#include "support.hpp"
#include "twistlab/matpoly.hpp"
#include "twistlab/permutation.hpp"
#include "twistlab/transpositions.hpp"

namespace twistlab {
namespace {

using testing::error_kind;

TEST(BuiltinMap, ScalarRationalAtTwoThree) {
  const auto map = builtin_map("scalar_rational");
  const auto [phi, psi] = map.apply(Complex(2.0), Complex(3.0));
  EXPECT_NEAR(std::abs(as_scalar(phi) - 5.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(as_scalar(psi) - 1.2), 0.0, 1e-15);
}

TEST(BuiltinMap, MatrixRationalOneByOneAgreesWithScalar) {
  const auto scalar = builtin_map("scalar_rational");
  const auto matrix = builtin_map("matrix_rational", MapParams{1});
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Complex u = rng.complex_normal();
    const Complex v = rng.complex_normal();
    CMatrix mu(1, 1), mv(1, 1);
    mu << u;
    mv << v;
    const auto [p, q] = scalar.apply(u, v);
    const auto [pm, qm] = matrix.apply(mu, mv);
    EXPECT_LT(std::abs(as_matrix(pm)(0, 0) - as_scalar(p)), 1e-12 * std::max(1.0, std::abs(as_scalar(p))));
    EXPECT_LT(std::abs(as_matrix(qm)(0, 0) - as_scalar(q)), 1e-12 * std::max(1.0, std::abs(as_scalar(q))));
  }
}

TEST(BuiltinMap, QSwapIdentityIsPlainSwap) {
  const auto map = builtin_map("q_swap");
  const auto [a, b] = map.apply(Complex(1.5, 2.0), Complex(-3.0, 0.5));
  EXPECT_EQ(as_scalar(a), Complex(-3.0, 0.5));
  EXPECT_EQ(as_scalar(b), Complex(1.5, 2.0));
}

TEST(BuiltinMap, UnknownName) {
  EXPECT_EQ(error_kind([] { builtin_map("nope"); }), ErrorKind::UnknownMap);
}

TEST(BuiltinMap, ScalarRationalPreservesProduct) {
  const auto map = builtin_map("scalar_rational");
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const Complex u = rng.complex_normal();
    const Complex v = rng.complex_normal();
    const auto [p, q] = map.apply(u, v);
    EXPECT_LT(std::abs(as_scalar(p) * as_scalar(q) - u * v), 1e-12 * std::max(1.0, std::abs(u * v)));
  }
}

TEST(BuiltinMap, MatrixRationalIdentities) {
  const auto map = builtin_map("matrix_rational", MapParams{3});
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const CMatrix u = rng.complex_normal_matrix(3, 3);
    const CMatrix v = rng.complex_normal_matrix(3, 3);
    const auto [p, q] = map.apply(u, v);
    const CMatrix& phi = as_matrix(p);
    const CMatrix& psi = as_matrix(q);
    EXPECT_LT(linalg::relative_distance(phi * psi, u * v), 1e-9);
    EXPECT_LT(linalg::relative_distance(CMatrix::Identity(3, 3) - phi + phi * psi, u), 1e-9);
  }
}

TEST(Verify, ScalarRationalInvolution) {
  const auto r = verify_involution(builtin_map("scalar_rational"), 200, 7, 1e-10);
  EXPECT_TRUE(r.passed()) << r.max_residual;
  EXPECT_EQ(r.samples, 200u);
}

TEST(Verify, MatrixRationalInvolution) {
  EXPECT_TRUE(verify_involution(builtin_map("matrix_rational", MapParams{2}), 100, 1, 1e-10).passed());
}

TEST(Verify, QSwapShiftInvolution) {
  MapParams p;
  p.q_shift = 1.0;
  EXPECT_TRUE(verify_involution(builtin_map("q_swap", p), 100, 1, 1e-12).passed());
}

TEST(Verify, ScalarRationalBraidAtFixedTriple) {
  EXPECT_LT(braid_residual(builtin_map("scalar_rational"), Complex(2.0), Complex(3.0), Complex(5.0)), 1e-10);
}

TEST(Verify, QSwapScaledBraid) {
  MapParams p;
  p.q_scale = 2.0;
  EXPECT_TRUE(verify_braid(builtin_map("q_swap", p), 100, 2, 1e-12).passed());
}

TEST(Verify, PairMapBraid) {
  EXPECT_TRUE(verify_braid(matpoly::pair_map(2), 100, 3, 1e-8).passed());
}

TEST(Verify, ReportsFailuresForBrokenMap) {
  // phi = u + v, psi = u v is not an involution.
  TwistedMap map = builtin_map("scalar_rational");
  map.name = "broken";
  map.apply = [](const Point& a, const Point& b) -> PointPair {
    return {as_scalar(a) + as_scalar(b), as_scalar(a) * as_scalar(b)};
  };
  const auto r = verify_involution(map, 20, 1, 1e-8);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.failures.size(), 20u);
}

TEST(Verify, ParallelMatchesSerial) {
  const auto map = builtin_map("matrix_rational", MapParams{3});
  const auto a = verify_braid(map, 64, 99, 1e-8, Execution::Parallel);
  const auto b = verify_braid(map, 64, 99, 1e-8, Execution::Serial);
  EXPECT_EQ(a.max_residual, b.max_residual);
  EXPECT_EQ(a.argmax_sample, b.argmax_sample);
  EXPECT_EQ(a.redraws, b.redraws);
}

TEST(Act, EmptyAndSquareWords) {
  const auto map = builtin_map("scalar_rational");
  const std::vector<Point> tuple{Complex(0.3, 1.0), Complex(-1.2, 0.4), Complex(2.0, -0.5)};
  const auto same = act(map, {}, tuple);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(as_scalar(same[i]), as_scalar(tuple[i]));
  const auto back = act(map, {1, 1}, tuple);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(point_distance(back[i], tuple[i]), 1e-10);
}

TEST(Act, BraidWordsAgree) {
  const auto map = builtin_map("scalar_rational");
  Rng rng(8);
  const std::vector<Point> tuple{rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
  const auto x = act(map, {1, 2, 1}, tuple);
  const auto y = act(map, {2, 1, 2}, tuple);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(point_distance(x[i], y[i]), 1e-10);
}

TEST(Act, FarCommutation) {
  const auto map = builtin_map("matrix_rational", MapParams{2});
  Rng rng(10);
  std::vector<Point> tuple;
  for (int i = 0; i < 4; ++i) tuple.push_back(map.sample(rng));
  const auto x = act(map, {1, 3}, tuple);
  const auto y = act(map, {3, 1}, tuple);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LT(point_distance(x[i], y[i]), 1e-12);
}

TEST(Act, IdentityWordsReturnInput) {
  const auto map = builtin_map("matrix_rational", MapParams{2});
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> tuple;
    for (int i = 0; i < 4; ++i) tuple.push_back(map.sample(rng));
    SigmaWord word;
    for (int k = 0; k < 6; ++k) word.push_back(1 + rng.next() % 3);
    SigmaWord full = word;
    full.insert(full.end(), word.rbegin(), word.rend());
    ASSERT_EQ(word_permutation(full, 4), identity_permutation(4));
    const auto out = act(map, full, tuple);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_LT(point_distance(out[i], tuple[i]), 1e-8);
  }
}

TEST(Act, NonGenericReportsStep) {
  const auto map = builtin_map("scalar_rational");
  // 1 - u + u v = 0 at u = 2, v = 1/2.
  const std::vector<Point> tuple{Complex(5.0), Complex(2.0), Complex(0.5)};
  try {
    act(map, {2}, tuple);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonGeneric);
    EXPECT_EQ(e.step(), 0);
  }
}

TEST(ChainInvariants, SingleParticle) {
  const auto map = builtin_map("scalar_rational");
  const Complex u(0.7, -0.2), w(1.3, 0.4);
  const auto [a, b] = chain_invariants(map, {u}, w);
  EXPECT_EQ(as_scalar(a), as_scalar(map.apply(u, w).first));
  EXPECT_EQ(as_scalar(b), as_scalar(map.apply(w, u).second));
}

TEST(ChainInvariants, InvariantUnderAction) {
  const auto map = builtin_map("scalar_rational");
  Rng rng(13);
  const std::vector<Point> us{rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
  const Point w = rng.complex_normal();
  const auto base = chain_invariants(map, us, w);
  for (const SigmaWord& word : {SigmaWord{1}, SigmaWord{2}, SigmaWord{1, 2, 1}}) {
    const auto moved = chain_invariants(map, act(map, word, us), w);
    EXPECT_LT(point_distance(base.first, moved.first), 1e-9);
    EXPECT_LT(point_distance(base.second, moved.second), 1e-9);
  }
}

TEST(ChainInvariants, PlainSwapReturnsW) {
  const auto map = builtin_map("q_swap");
  const Complex w(0.25, 3.0);
  const auto [a, b] = chain_invariants(map, {Complex(1.0), Complex(2.0)}, w);
  EXPECT_EQ(as_scalar(a), w);
  EXPECT_EQ(as_scalar(b), w);
}

TEST(Permutation, ReducedWordRealizesPermutation) {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    Permutation p = identity_permutation(6);
    for (std::size_t i = 5; i > 0; --i) std::swap(p[i], p[rng.next() % (i + 1)]);
    EXPECT_EQ(word_permutation(reduced_word(p), 6), p);
  }
  EXPECT_EQ(block_swap(2), (Permutation{2, 3, 0, 1}));
}

}  // namespace
}  // namespace twistlab
