#include <gtest/gtest.h>

#include "support.hpp"
#include "twistlab/linalg.hpp"

namespace twistlab {
namespace {

using testing::diag;
using testing::error_kind;
using testing::mat2;
using testing::max_abs;

TEST(Eigen, RepeatedEigenvalueIsNonGeneric) {
  EXPECT_EQ(error_kind([] { linalg::eigen(CMatrix::Identity(2, 2)); }), ErrorKind::NonGeneric);
  EXPECT_NO_THROW(linalg::eigen(CMatrix::Identity(2, 2), false));
}

TEST(Eigen, DiagonalGivesStandardBasis) {
  const auto e = linalg::eigen(diag({2.0, 1.0}));
  ASSERT_EQ(e.values.size(), 2u);
  EXPECT_EQ(e.values[0], Complex(1.0));
  EXPECT_EQ(e.values[1], Complex(2.0));
  EXPECT_LT(max_abs(e.vectors - mat2(0.0, 1.0, 1.0, 0.0)), 1e-15);
}

TEST(Eigen, RandomResidualAndReconstruction) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = rng.complex_normal_matrix(3, 3);
    const auto e = linalg::eigen(a);
    CMatrix lambda = CMatrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) lambda(i, i) = e.values[static_cast<std::size_t>(i)];
    EXPECT_LT((a * e.vectors - e.vectors * lambda).norm() / a.norm(), 1e-10);
    EXPECT_LT((e.vectors * lambda * e.vectors.inverse() - a).norm() / a.norm(), 1e-9);
    for (std::size_t i = 1; i < e.values.size(); ++i)
      EXPECT_FALSE(linalg::canonical_less(e.values[i], e.values[i - 1]));
  }
}

TEST(Nullspace, SimpleKernels) {
  const CVector v = linalg::nullspace_vector(diag({0.0, 1.0}));
  EXPECT_LT((v - CVector::Unit(2, 0)).norm(), 1e-15);
  EXPECT_EQ(error_kind([] { linalg::nullspace_vector(diag({1.0, 2.0})); }), ErrorKind::RankUnexpected);
}

TEST(Nullspace, QuadraticPencilAtRoot) {
  Rng rng(9);
  const CMatrix a1 = rng.complex_normal_matrix(2, 2);
  const CMatrix a2 = rng.complex_normal_matrix(2, 2);
  // det(t^2 - a1 t + a2) from its values at five nodes, then one root.
  std::vector<Complex> nodes{0.0, 1.0, -1.0, Complex(0, 1), 2.0};
  Eigen::MatrixXcd vander(5, 5);
  CVector rhs(5);
  for (int i = 0; i < 5; ++i) {
    const Complex t = nodes[static_cast<std::size_t>(i)];
    for (int k = 0; k < 5; ++k) vander(i, k) = std::pow(t, 4 - k);
    rhs(i) = (t * t * CMatrix::Identity(2, 2) - a1 * t + a2).determinant();
  }
  const CVector coeffs = vander.fullPivLu().solve(rhs);
  const auto roots = linalg::poly_roots(std::span<const Complex>(coeffs.data(), 5));
  const Complex lambda = roots.front();
  const CMatrix m = lambda * lambda * CMatrix::Identity(2, 2) - a1 * lambda + a2;
  const CVector v = linalg::nullspace_vector(m);
  EXPECT_NEAR(v.norm(), 1.0, 1e-14);
  EXPECT_LT((m * v).norm(), 1e-8);
}

TEST(Sylvester, ScalarCase) {
  CMatrix a(1, 1), b(1, 1), c(1, 1);
  a << 3.0;
  b << 1.0;
  c << 1.0;
  EXPECT_NEAR(std::abs(linalg::solve_sylvester(a, b, c)(0, 0) - 0.5), 0.0, 1e-15);
}

TEST(Sylvester, TriangularWorkedSystem) {
  const CMatrix a = mat2(3.0, 1.0, 0.0, 4.0);
  const CMatrix b = diag({1.0, 2.0});
  const CMatrix c = CMatrix::Identity(2, 2);
  const CMatrix lambda = linalg::solve_sylvester(a, b, c);
  // Hand elimination of the 4x4 system.
  EXPECT_LT(max_abs(lambda - mat2(0.5, -0.5, 0.0, 0.5)), 1e-14);
  EXPECT_LT(max_abs(a * lambda - lambda * b - c), 1e-14);
}

TEST(Sylvester, OverlapRejected) {
  const CMatrix a = diag({1.0, 2.0});
  EXPECT_EQ(error_kind([&] { linalg::solve_sylvester(a, a, CMatrix::Identity(2, 2)); }), ErrorKind::SpectraOverlap);
}

TEST(Sylvester, RandomResidualBound) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = rng.complex_normal_matrix(3, 3);
    const CMatrix b = rng.complex_normal_matrix(3, 3);
    const CMatrix c = rng.complex_normal_matrix(3, 3);
    const CMatrix x = linalg::solve_sylvester(a, b, c);
    EXPECT_LE((a * x - x * b - c).norm(), 1e-10 * (a.norm() + b.norm()) * x.norm());
  }
}

TEST(PolyRoots, Quadratics) {
  const std::vector<Complex> p{1.0, -3.0, 2.0};
  const auto r = linalg::poly_roots(p);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(std::abs(r[0] - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r[1] - 2.0), 0.0, 1e-14);

  const std::vector<Complex> q{1.0, 0.0, 1.0};
  const auto s = linalg::poly_roots(q);
  EXPECT_NEAR(std::abs(s[0] - Complex(0, -1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s[1] - Complex(0, 1)), 0.0, 1e-14);
}

TEST(PolyRoots, ConstantIsDegreeZero) {
  const std::vector<Complex> p{5.0};
  EXPECT_EQ(error_kind([&] { linalg::poly_roots(p); }), ErrorKind::DegreeZero);
}

TEST(PolyRoots, WorkedDeterminant) {
  // det of t^2 - [[4,1],[0,6]] t + [[3,1],[0,8]] = (t^2 - 4t + 3)(t^2 - 6t + 8).
  const std::vector<Complex> p{1.0, -10.0, 35.0, -50.0, 24.0};
  const auto r = linalg::poly_roots(p);
  EXPECT_LT(testing::spectrum_distance(r, {1.0, 2.0, 3.0, 4.0}), 1e-10);
}

TEST(PolyRoots, RecoversRandomRootsUpToDegree12) {
  Rng rng(21);
  for (std::size_t degree : {3u, 7u, 12u}) {
    std::vector<Complex> roots;
    for (std::size_t i = 0; i < degree; ++i) roots.push_back(rng.complex_normal());
    std::vector<Complex> coeffs{1.0};
    for (const Complex& r : roots) {
      coeffs.push_back(0.0);
      for (std::size_t k = coeffs.size() - 1; k > 0; --k) coeffs[k] -= r * coeffs[k - 1];
    }
    double scale = 1.0;
    for (const Complex& r : roots) scale = std::max(scale, std::abs(r));
    EXPECT_LT(testing::spectrum_distance(linalg::poly_roots(coeffs), roots) / scale, 1e-7) << degree;
  }
}

TEST(Kron, LegOrder) {
  const CMatrix a = mat2(1.0, 2.0, 3.0, 4.0);
  const CMatrix k = linalg::kron(a, CMatrix::Identity(2, 2));
  EXPECT_EQ(k(2, 0), Complex(3.0));
  EXPECT_EQ(k(3, 1), Complex(3.0));
  EXPECT_EQ(k(1, 0), Complex(0.0));
}

}  // namespace
}  // namespace twistlab
