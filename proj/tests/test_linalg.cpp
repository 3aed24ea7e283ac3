#include <gtest/gtest.h>

#include <cmath>

#include "qcc/linalg.hpp"
#include "support.hpp"

using namespace qcc;
using namespace qcc::testing;

namespace {

CMatrix diag(std::initializer_list<double> v) {
  CMatrix d = CMatrix::Zero(v.size(), v.size());
  int i = 0;
  for (double x : v) {
    d(i, i) = x;
    ++i;
  }
  return d;
}

CMatrix pauli_x() {
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

double power_iteration_norm(const CMatrix& h) {
  // Power iteration on h², started from a fixed vector.
  const CMatrix h2 = h * h;
  CVector v = CVector::Ones(h.rows());
  double lambda = 0.0;
  for (int it = 0; it < 5000; ++it) {
    CVector w = h2 * v;
    lambda = w.norm() / v.norm();
    v = w / w.norm();
  }
  return std::sqrt(lambda);
}

}  // namespace

TEST(Eigh, DiagonalInput) {
  const auto s = eigh(diag({1, 3}));
  EXPECT_NEAR(s.values(0), 3.0, 1e-15);
  EXPECT_NEAR(s.values(1), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.vectors(1, 0)), 1.0, 1e-15);
}

TEST(Eigh, PauliX) {
  const auto s = eigh(pauli_x());
  EXPECT_NEAR(s.values(0), 1.0, 1e-15);
  EXPECT_NEAR(s.values(1), -1.0, 1e-15);
}

TEST(Eigh, RejectsNonHermitian) {
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = 1.0;
  EXPECT_THROW(eigh(x), InputError);
}

TEST(Eigh, ReconstructsRandomHermitian) {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const CMatrix h = random_hermitian(rng, draw_int(rng, 1, 6));
    EXPECT_LT(max_abs(eigh(h).reconstruct() - h), 1e-10);
  }
}

TEST(Eigh, Deterministic) {
  Rng rng(3);
  const CMatrix h = random_hermitian(rng, 5);
  const auto a = eigh(h), b = eigh(h);
  EXPECT_EQ(max_abs(a.vectors - b.vectors), 0.0);
}

TEST(PositivePart, Examples) {
  EXPECT_LT(max_abs(positive_part(diag({3, -1})) - diag({3, 0})), 1e-15);
  Rng rng(5);
  const CMatrix p = random_psd(rng, 3);
  EXPECT_LT(max_abs(positive_part(p) - p), 1e-12);
}

TEST(PositivePart, TraceAndOrderProperties) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const CMatrix h = random_hermitian(rng, draw_int(rng, 1, 6));
    const CMatrix p = positive_part(h);
    const auto s = eigh(h);
    double expect = 0.0;
    for (Eigen::Index i = 0; i < s.values.size(); ++i) expect += std::max(s.values(i), 0.0);
    EXPECT_NEAR(trace_re(p), expect, 1e-10);
    EXPECT_GE(min_eigenvalue(p), -1e-10);
    EXPECT_GE(min_eigenvalue(hermitize(p - h)), -1e-10);
    EXPECT_LT(max_abs(p - p.adjoint()), 1e-12);
  }
}

TEST(PseudoInverse, Examples) {
  EXPECT_LT(max_abs(pseudo_inverse(diag({2, 0})) - diag({0.5, 0})), 1e-15);
  EXPECT_LT(max_abs(pseudo_inverse(identity(3)) - identity(3)), 1e-14);
}

TEST(PseudoInverse, MatchesInverseAndMoorePenrose) {
  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    const int d = draw_int(rng, 1, 5);
    const CMatrix p = random_psd(rng, d) + 0.1 * identity(d);
    EXPECT_LT(max_abs(pseudo_inverse(p) - p.inverse()), 1e-9);
    const CMatrix low = random_psd(rng, d, std::max(1, d - 2));
    const CMatrix pi = pseudo_inverse(low);
    EXPECT_LT(max_abs(low * pi * low - low), 1e-10 * (1 + max_abs(low)));
    EXPECT_LT(max_abs(pi - pi.adjoint()), 1e-12);
  }
}

TEST(FracPower, Examples) {
  EXPECT_LT(max_abs(frac_power(diag({4, 9}), 0.5) - diag({2, 3})), 1e-14);
  EXPECT_LT(max_abs(frac_power(diag({4, 0}), -0.5) - diag({0.5, 0})), 1e-14);
  EXPECT_LT(max_abs(frac_power(diag({4, 0}), 0.0) - diag({1, 0})), 1e-14);
  Rng rng(1);
  const CMatrix p = random_psd(rng, 4);
  EXPECT_LT(max_abs(frac_power(p, 1.0) - p), 1e-11);
}

TEST(FracPower, Composition) {
  Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    const int d = draw_int(rng, 1, 5);
    const CMatrix p = random_psd(rng, d) + 0.05 * identity(d);
    const double a = draw_real(rng, -1.5, 2.0), b = draw_real(rng, -1.5, 2.0);
    const CMatrix lhs = frac_power(frac_power(p, a), b);
    const CMatrix rhs = frac_power(p, a * b);
    EXPECT_LT(max_abs(lhs - rhs), 1e-9 * (1 + max_abs(rhs)));
  }
}

TEST(PartialTrace, ProductState) {
  Rng rng(2);
  const CMatrix rho = random_density(rng, 2), sigma = 3.0 * random_density(rng, 3);
  const CMatrix x = kron(rho, sigma);
  EXPECT_LT(max_abs(partial_trace(x, {2, 3}, {0}) - 3.0 * rho), 1e-13);
  EXPECT_LT(max_abs(partial_trace(x, {2, 3}, {1}) - sigma), 1e-13);
}

TEST(PartialTrace, MaximallyEntangledMarginal) {
  for (int d = 2; d <= 4; ++d) {
    CVector psi = CVector::Zero(d * d);
    for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    const CMatrix phi = psi * psi.adjoint();
    EXPECT_LT(max_abs(partial_trace(phi, {d, d}, {0}) - identity(d) / static_cast<double>(d)), 1e-14);
  }
}

TEST(PartialTrace, MatchesIndexOracle) {
  Rng rng(17);
  for (int t = 0; t < 40; ++t) {
    const int n = draw_int(rng, 1, 3);
    std::vector<int> dims;
    for (int k = 0; k < n; ++k) dims.push_back(draw_int(rng, 1, 3));
    std::vector<int> keep;
    for (int k = 0; k < n; ++k)
      if (draw_int(rng, 0, 1)) keep.push_back(k);
    const SubsystemShape shape(dims);
    const CMatrix x = random_hermitian(rng, shape.total());
    const CMatrix got = partial_trace(x, shape, std::span<const int>(keep));
    EXPECT_LT(max_abs(got - naive_partial_trace(x, dims, keep)), 1e-12);
    EXPECT_NEAR(got.trace().real(), x.trace().real(), 1e-12);
    EXPECT_LT(max_abs(got - got.adjoint()), 1e-12);
  }
}

TEST(PartialTrace, Linear) {
  Rng rng(19);
  const CMatrix a = random_hermitian(rng, 6), b = random_hermitian(rng, 6);
  const double w = 0.3;
  const CMatrix lhs = partial_trace(w * a + (1 - w) * b, {2, 3}, {1});
  const CMatrix rhs = w * partial_trace(a, {2, 3}, {1}) + (1 - w) * partial_trace(b, {2, 3}, {1});
  EXPECT_LT(max_abs(lhs - rhs), 1e-13);
}

TEST(PartialTrace, RejectsBadShape) {
  EXPECT_THROW(partial_trace(identity(5), {2, 3}, {0}), InputError);
}

TEST(Permute, SwapOfProduct) {
  Rng rng(23);
  const CMatrix a = random_hermitian(rng, 2), b = random_hermitian(rng, 3), c = random_hermitian(rng, 2);
  const CMatrix x = kron(kron(a, b), c);
  EXPECT_LT(max_abs(permute_subsystems(x, {2, 3, 2}, {2, 0, 1}) - kron(kron(c, a), b)), 1e-14);
  EXPECT_THROW(permute_subsystems(x, {2, 3, 2}, {0, 0, 1}), InputError);
}

TEST(LocalOps, EmbedAndConjugate) {
  Rng rng(29);
  const SubsystemShape shape{2, 3, 2};
  const CMatrix op = gaussian_matrix(rng, 3, 3);
  const CMatrix x = random_hermitian(rng, 12);
  const CMatrix full = kron(kron(identity(2), op), identity(2));
  EXPECT_LT(max_abs(embed(op, 1, shape) - full), 1e-15);
  EXPECT_LT(max_abs(apply_local_left(op, 1, shape, x) - full * x), 1e-12);
  EXPECT_LT(max_abs(conjugate_local(op, 1, shape, x) - full * x * full.adjoint()), 1e-11);
}

TEST(Pinching, Examples) {
  Rng rng(31);
  const CMatrix rho = random_density(rng, 2);
  const auto p1 = pinching(identity(2), rho);
  EXPECT_EQ(p1.blocks, 1);
  EXPECT_LT(max_abs(p1.op - rho), 1e-14);
  const auto p2 = pinching(diag({1, 2}), rho);
  EXPECT_EQ(p2.blocks, 2);
  CMatrix expect = rho;
  expect(0, 1) = expect(1, 0) = 0.0;
  EXPECT_LT(max_abs(p2.op - expect), 1e-14);
}

TEST(Pinching, InequalityHolds) {
  Rng rng(37);
  for (int t = 0; t < 50; ++t) {
    const int d = draw_int(rng, 1, 5);
    CMatrix sigma = random_hermitian(rng, d);
    if (t % 3 == 0) sigma = diag({1, 1, 2, 2, 3}).topLeftCorner(d, d);
    const CMatrix rho = random_psd(rng, d);
    const auto p = pinching(sigma, rho);
    EXPECT_GE(min_eigenvalue(hermitize(p.blocks * p.op - rho)), -1e-9);
    EXPECT_LT(max_abs(p.op - p.op.adjoint()), 1e-12);
  }
}

TEST(EigenGroups, MergesNearDegenerate) {
  const auto g = eigen_groups(diag({1.0, 1.0 + 1e-12, 0.5}));
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].dim(), 2);
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(diag({1, -2})), 2.0, 1e-15);
  EXPECT_NEAR(operator_norm(identity(4)), 1.0, 1e-15);
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    const CMatrix h = random_hermitian(rng, draw_int(rng, 2, 5));
    EXPECT_NEAR(operator_norm(h), power_iteration_norm(h), 1e-8);
  }
}

TEST(PsdOrder, Examples) {
  Rng rng(43);
  EXPECT_TRUE(psd_order_leq(CMatrix::Zero(3, 3), random_psd(rng, 3), 1e-12));
  EXPECT_FALSE(psd_order_leq(diag({2, 0}), diag({1, 1}), 1e-9));
}

TEST(Dephase, KeepsBlockDiagonal) {
  Rng rng(47);
  const CMatrix x = random_hermitian(rng, 6);
  const CMatrix d = dephase(x, 1, {2, 3});
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const bool same = (i % 3) == (j % 3);
      EXPECT_EQ(d(i, j), same ? x(i, j) : cplx(0.0));
    }
}
