#include <gtest/gtest.h>

#include "support.hpp"
#include "twistlab/gf.hpp"

namespace twistlab::gf {
namespace {

using testing::max_abs;

TEST(GFVerify, TrivialAndSignSystemsPass) {
  for (std::size_t m : {2u, 3u, 4u}) {
    EXPECT_TRUE(gf_verify(trivial_gf_system(m), 50, 1, 1e-9).passed()) << m;
    EXPECT_TRUE(gf_verify(sign_gf_system(m), 50, 1, 1e-9).passed()) << m;
  }
}

TEST(GFVerify, SingleBlockDelegatesToTybe) {
  EXPECT_TRUE(gf_verify(trivial_gf_system(1), 20, 1, 1e-9).passed());
}

TEST(GFVerify, PerturbedGIsReported) {
  for (std::size_t m : {2u, 3u}) {
    const auto r = gf_verify(perturbed_gf_system(m, 2, 5), 20, 1, 1e-9);
    EXPECT_FALSE(r.passed()) << m;
    EXPECT_GT(r.max_residual, 1e-3);
  }
}

TEST(GFWord, RealizesBlockSwap) {
  for (std::size_t m = 1; m <= 5; ++m) {
    const SigmaWord w = gf_word(m);
    EXPECT_EQ(w.size(), m * m);
    EXPECT_EQ(word_permutation(w, 2 * m), block_swap(m)) << m;
  }
  EXPECT_EQ(gf_word(2), (SigmaWord{2, 3, 1, 2}));
}

TEST(GFCompose, SingleBlockIsF) {
  const auto sys = sign_gf_system(1, 2);
  const auto [mu, r] = gf_compose(sys);
  Rng rng(71);
  const Point u = sys.sample(rng);
  const Point v = sys.sample(rng);
  const auto [a, b] = mu.apply(u, v);
  const auto [c, d] = sys.f(u, v);
  EXPECT_EQ(max_abs(as_matrix(a) - as_matrix(c)), 0.0);
  EXPECT_EQ(max_abs(as_matrix(b) - as_matrix(d)), 0.0);
  EXPECT_EQ(max_abs(r.evaluate(u, v) - sys.F(u, v)), 0.0);
}

TEST(GFCompose, TrivialSystemGivesIdentityR) {
  const auto sys = trivial_gf_system(2, 2);
  const auto [mu, r] = gf_compose(sys);
  Rng rng(72);
  const Point u = sys.sample(rng);
  const Point v = sys.sample(rng);
  EXPECT_EQ(max_abs(r.evaluate(u, v) - CMatrix::Identity(4, 4)), 0.0);
  EXPECT_TRUE(ybe::verify_tybe(r, 50, 1, 1e-9).passed());
}

TEST(GFCompose, SignOfProductCountsFactors) {
  for (std::size_t m : {2u, 3u}) {
    const auto sys = sign_gf_system(m, 2);
    const auto [mu, r] = gf_compose(sys);
    Rng rng(73);
    const double sign = (m * m) % 2 == 0 ? 1.0 : -1.0;
    EXPECT_LT(max_abs(r.evaluate(sys.sample(rng), sys.sample(rng)) - sign * CMatrix::Identity(4, 4)), 1e-15);
    EXPECT_TRUE(ybe::verify_inverse(r, 30, 1, 1e-9).passed());
    EXPECT_TRUE(ybe::verify_tybe(r, 30, 1, 1e-9).passed());
  }
}

TEST(GFCompose, MuMatchesShuffleWordAction) {
  for (std::size_t m : {2u, 3u, 4u}) {
    const auto sys = trivial_gf_system(m);
    const auto [mu, r] = gf_compose(sys);
    Rng rng(74);
    for (int i = 0; i < 50; ++i) {
      const Point u = sys.sample(rng);
      const Point v = sys.sample(rng);
      EXPECT_LT(shuffle_residual(sys, mu, u, v), 1e-8) << m;
    }
  }
}

TEST(GFCompose, MuIsTwistedTransposition) {
  const auto [mu, r] = gf_compose(trivial_gf_system(3));
  EXPECT_TRUE(verify_involution(mu, 50, 1, 1e-9).passed());
  EXPECT_TRUE(verify_braid(mu, 50, 1, 1e-8).passed());
}

TEST(ActPair, RepeatedLetterIsIdentity) {
  const auto sys = trivial_gf_system(2);
  CMatrix u(2, 1), v(2, 1);
  u << 0.5, Complex(0.0, 1.0);
  v << -1.0, 2.0;
  const auto [a, b] = act_pair(sys, {2, 2}, u, v);
  EXPECT_LT(max_abs(as_matrix(a) - u), 1e-14);
  EXPECT_LT(max_abs(as_matrix(b) - v), 1e-14);
}

}  // namespace
}  // namespace twistlab::gf
