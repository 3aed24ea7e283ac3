#include <gtest/gtest.h>

#include <cmath>

#include "qcc/divergence.hpp"
#include "qcc/programs.hpp"
#include "support.hpp"

using namespace qcc;
using namespace qcc::testing;

namespace {

const double kLog2 = std::log(2.0);

double scalar_renyi(const CMatrix& p, const CMatrix& q, double alpha) {
  double s = 0.0;
  for (int i = 0; i < p.rows(); ++i) {
    const double a = p(i, i).real(), b = q(i, i).real();
    if (a > 0) s += std::pow(a, alpha) * std::pow(b, 1.0 - alpha);
  }
  return std::log(s) / (alpha - 1.0);
}

double binary_entropy(double p) {
  auto h = [](double x) { return x > 0 ? -x * std::log(x) : 0.0; };
  return h(p) + h(1 - p);
}

/// Mutual information of amplitude damping on diag(1−p, p), maximized over p by a fine grid
/// followed by golden-section refinement.
double amplitude_damping_capacity(double g) {
  auto f = [g](double p) { return binary_entropy(p) + binary_entropy((1 - g) * p) - binary_entropy(g * p); };
  double best = 0.0, arg = 0.0;
  for (int i = 1; i < 2000; ++i) {
    const double p = i / 2000.0;
    if (f(p) > best) best = f(p), arg = p;
  }
  double lo = std::max(0.0, arg - 1e-3), hi = std::min(1.0, arg + 1e-3);
  const double phi = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 100; ++it) {
    const double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
    if (f(a) < f(b)) lo = a;
    else hi = b;
  }
  return f(0.5 * (lo + hi));
}

CMatrix diag2(double a, double b) {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = a;
  d(1, 1) = b;
  return d;
}

}  // namespace

TEST(Sandwiched, SelfDivergenceIsZero) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const int d = draw_int(rng, 1, 4);
    const CMatrix rho = random_density(rng, d, draw_int(rng, 1, d));
    for (double a : {1.1, 1.5, 2.0, 5.0}) EXPECT_NEAR(sandwiched(rho, rho, a), 0.0, 1e-10);
  }
}

TEST(Sandwiched, PureAgainstMaximallyMixed) {
  for (double a : {1.01, 1.5, 2.0, 10.0, 50.0}) EXPECT_NEAR(sandwiched(diag2(1, 0), diag2(0.5, 0.5), a), kLog2, 1e-12);
}

TEST(Sandwiched, CommutingMatchesScalarRenyi) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const int d = draw_int(rng, 2, 4);
    const CMatrix p = random_diagonal_state(rng, d, true), q = random_diagonal_state(rng, d);
    for (double a : {1.2, 2.0, 3.5}) EXPECT_NEAR(sandwiched(p, q, a), scalar_renyi(p, q, a), 1e-9);
  }
}

TEST(Sandwiched, SupportViolationIsInfinite) {
  EXPECT_TRUE(std::isinf(sandwiched(diag2(0.5, 0.5), diag2(1, 0), 2.0)));
  EXPECT_TRUE(std::isinf(umegaki(diag2(0.5, 0.5), diag2(1, 0))));
  EXPECT_TRUE(std::isinf(max_divergence(diag2(0.5, 0.5), diag2(1, 0))));
}

TEST(Sandwiched, RejectsOrdersAtMostOne) {
  EXPECT_THROW(sandwiched(diag2(1, 0), diag2(0.5, 0.5), 0.9), InputError);
  EXPECT_THROW(RenyiOrder::of(0.5), InputError);
}

TEST(Sandwiched, MonotoneInOrder) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const int d = draw_int(rng, 2, 4);
    const CMatrix rho = random_density(rng, d), sigma = random_density(rng, d);
    double prev = umegaki(rho, sigma);
    for (double a : {1.1, 1.5, 2.0, 5.0}) {
      const double v = sandwiched(rho, sigma, a);
      EXPECT_GE(v, prev - 1e-10);
      prev = v;
    }
    EXPECT_GE(max_divergence(rho, sigma), prev - 1e-10);
  }
}

TEST(Sandwiched, AdditiveUnderTensor) {
  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    const CMatrix r1 = random_density(rng, 2), s1 = random_density(rng, 2);
    const CMatrix r2 = random_density(rng, 3), s2 = random_density(rng, 3);
    for (double a : {1.3, 2.0, 4.0}) {
      EXPECT_NEAR(sandwiched(kron(r1, r2), kron(s1, s2), a), sandwiched(r1, s1, a) + sandwiched(r2, s2, a), 1e-9);
    }
  }
}

TEST(Sandwiched, DataProcessing) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const int a = draw_int(rng, 2, 3), b = draw_int(rng, 2, 3);
    const auto ch = zoo::random_cptp(rng(), a, b);
    const CMatrix rho = random_density(rng, a), sigma = random_density(rng, a);
    for (double al : {1.5, 3.0})
      EXPECT_LE(sandwiched(qcc::apply(ch, rho), qcc::apply(ch, sigma), al), sandwiched(rho, sigma, al) + 1e-8);
  }
}

TEST(Umegaki, Examples) {
  Rng rng(6);
  const CMatrix rho = random_density(rng, 3);
  EXPECT_NEAR(umegaki(rho, rho), 0.0, 1e-12);
  EXPECT_NEAR(umegaki(diag2(1, 0), diag2(0.5, 0.5)), kLog2, 1e-12);
  for (int t = 0; t < 10; ++t) {
    const CMatrix r = random_density(rng, 2), s = random_density(rng, 2);
    EXPECT_NEAR(sandwiched(r, s, 1.0001), umegaki(r, s), 1e-3);
  }
  EXPECT_NEAR(sandwiched(rho, rho, RenyiOrder::one()), 0.0, 1e-12);
}

TEST(MaxDivergence, CommutingIsLogMaxRatio) {
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    const CMatrix p = random_diagonal_state(rng, 3, true), q = random_diagonal_state(rng, 3);
    double best = -1e300;
    for (int i = 0; i < 3; ++i)
      if (p(i, i).real() > 0) best = std::max(best, std::log(p(i, i).real() / q(i, i).real()));
    EXPECT_NEAR(max_divergence(p, q), best, 1e-10);
    EXPECT_NEAR(sandwiched(p, q, RenyiOrder::infinity()), best, 1e-10);
  }
}

TEST(MutualInfo, ReplacerIsZero) {
  const auto J = choi_of(zoo::replacer(2, diag2(0.3, 0.7)));
  for (double a : {1.5, 2.0}) EXPECT_NEAR(channel_mutual_info(J, RenyiOrder::of(a)).value, 0.0, 1e-8);
  EXPECT_NEAR(channel_mutual_info(J, RenyiOrder::one()).value, 0.0, 1e-8);
}

TEST(MutualInfo, QubitIdentityMatchesGrid) {
  // Grid over diagonal ρ and σ; by unitary covariance the optimum is diagonal.
  const auto J = choi_of(zoo::identity(2));
  double best = -1.0;
  for (int i = 1; i < 40; ++i) {
    const double p = i / 40.0;
    const CMatrix rho = diag2(p, 1 - p), r = frac_power(rho, 0.5);
    const CMatrix joint = kron(r, identity(2)) * J.op * kron(r, identity(2));
    double inner = 1e300;
    for (int j = 1; j < 40; ++j) {
      const double s = j / 40.0;
      inner = std::min(inner, sandwiched(joint, kron(rho, diag2(s, 1 - s)), 2.0));
    }
    best = std::max(best, inner);
  }
  EXPECT_NEAR(best, 2 * kLog2, 1e-12);
  const auto r = channel_mutual_info(J, RenyiOrder::of(2.0));
  EXPECT_NEAR(r.value, 2 * kLog2, 1e-7);
  EXPECT_NEAR(channel_objective(J, r.rho, r.sigma, 2.0), r.value, 1e-8);
}

TEST(MutualInfo, AmplitudeDampingAtOrderOne) {
  for (double g : {0.2, 0.6}) {
    const auto J = choi_of(zoo::amplitude_damping(g));
    EXPECT_NEAR(channel_mutual_info(J, RenyiOrder::one()).value, amplitude_damping_capacity(g), 1e-6) << g;
  }
}

TEST(MutualInfo, AdditiveForDepolarizing) {
  const auto ch = zoo::depolarizing(2, 0.5);
  const double one = channel_mutual_info(choi_of(ch), RenyiOrder::of(2.0)).value;
  const double two = channel_mutual_info(choi_of(power(ch, 2)), RenyiOrder::of(2.0)).value;
  EXPECT_NEAR(two, 2 * one, 1e-4);
}

TEST(MutualInfo, InvariantsOnRandomChannels) {
  for (int seed : {31, 32}) {
    const auto J = choi_of(zoo::random_cptp(seed, 2, 2));
    double prev = channel_mutual_info(J, RenyiOrder::one()).value;
    EXPECT_GE(prev, -1e-9);
    EXPECT_NEAR(channel_mutual_info(J, RenyiOrder::of(1.001)).value, prev, 1e-2);
    for (double a : {1.5, 2.0, 3.0}) {
      const auto r = channel_mutual_info(J, RenyiOrder::of(a));
      EXPECT_GE(r.value, prev - 1e-6);
      EXPECT_NEAR(channel_objective(J, r.rho, r.sigma, a), r.value, 1e-8);
      EXPECT_NEAR(trace_re(r.rho), 1.0, 1e-10);
      EXPECT_NEAR(trace_re(r.sigma), 1.0, 1e-10);
      prev = r.value;
    }
  }
}

TEST(Exponent, ZeroRateAndReplacer) {
  const auto Jr = choi_of(zoo::replacer(2, diag2(0.5, 0.5)));
  const ScExponent rep(Jr, exponent_alpha_grid());
  for (double r : {0.0, 0.3, 1.0, 2.5}) EXPECT_NEAR(rep(r), r, 1e-3);
  const ScExponent rnd(choi_of(zoo::random_cptp(41, 2, 2)), exponent_alpha_grid());
  EXPECT_EQ(rnd(0.0), 0.0);
}

TEST(Exponent, QubitIdentityIsShiftedRate) {
  const ScExponent e(choi_of(zoo::identity(2)), exponent_alpha_grid());
  EXPECT_NEAR(e(2 * kLog2 + 0.1), 0.1, 1e-3);
  EXPECT_NEAR(e(kLog2), 0.0, 1e-12);
}

TEST(Exponent, NondecreasingAndConvex) {
  const ScExponent e(choi_of(zoo::random_cptp(42, 2, 2)), exponent_alpha_grid());
  std::vector<double> v;
  for (int i = 0; i <= 10; ++i) v.push_back(e(0.25 * i));
  for (int i = 1; i <= 10; ++i) EXPECT_GE(v[i], v[i - 1] - 1e-12);
  for (int i = 1; i < 10; ++i) EXPECT_GE(v[i - 1] + v[i + 1] - 2 * v[i], -1e-9);
  for (double x : v) EXPECT_GE(x, 0.0);
}

TEST(Converse, Examples) {
  const auto Jr = choi_of(zoo::replacer(2, diag2(0.5, 0.5)));
  const auto rep = converse_bound_check(Jr, 4, {1.0});
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_NEAR(rep.rows[0].bound, 0.5, 1e-6);
  EXPECT_NEAR(rep.mc, 0.25, 1e-7);
  EXPECT_TRUE(rep.pass);
  const auto id = converse_bound_check(choi_of(zoo::identity(2)), 2, {0.5, 1.0, 2.0});
  for (const auto& row : id.rows) EXPECT_GE(row.bound, 1.0);
  EXPECT_TRUE(id.pass);
}

TEST(Converse, RandomQubitChannels) {
  for (int seed : {51, 52}) {
    const auto J = choi_of(zoo::random_cptp(seed, 2, 2));
    for (int M : {2, 8}) EXPECT_TRUE(converse_bound_check(J, M, {0.5, 1.0, 2.0}).pass);
  }
}
