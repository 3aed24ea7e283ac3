#include <gtest/gtest.h>

#include <cmath>

#include "qcc/harness.hpp"
#include "qcc/rounding.hpp"
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

ChoiMatrix trine_choi() { return choi_of(measurement_channel(zoo::trine())); }

}  // namespace

TEST(Lift, SaturatedMarginalOnlyRescales) {
  // An NS solution at size M−1 is MC-feasible with Tr_R Λ_pre = I, so the lift adds nothing.
  const auto J = choi_of(zoo::random_cptp(2, 2, 2));
  for (int M : {2, 3, 5}) {
    const auto ns = ns_success(J, M - 1);
    const auto lift = mc_to_ns_lift(ns, M, J);
    EXPECT_LT(max_abs(lift.ns.lambda - ns.lambda * (M - 1.0) / M), 1e-9);
    EXPECT_NEAR(lift.ns.value, ns.value * (M - 1.0) / M, 1e-9);
  }
}

TEST(Lift, ReplacerMatchesClosedForm) {
  const auto J = choi_of(zoo::replacer(2, diag({0.4, 0.6})));
  for (int M : {2, 3, 5}) {
    const auto lift = mc_to_ns_lift(mc_success(J, M - 1), M, J);
    EXPECT_NEAR(lift.ns.value, 1.0 / M, 1e-7);
  }
}

TEST(Lift, RandomChannelSandwich) {
  for (int seed : {3, 4, 5}) {
    const auto J = choi_of(zoo::random_cptp(seed, 2, 2));
    const auto mc3 = mc_success(J, 3);
    const auto lift = mc_to_ns_lift(mc3, 4, J);
    EXPECT_GE(lift.ns.value, 0.75 * mc3.value - 1e-9);
    EXPECT_LE(lift.ns.value, ns_success(J, 4).value + 1e-7);
    EXPECT_GE(lift.dominance_min_eig, -1e-9);
    EXPECT_LT(lift.marginal_error, 1e-9);
    EXPECT_TRUE(check_feasible(lift.ns).feasible);
  }
}

TEST(Lift, RejectsInfeasibleOrMismatchedInput) {
  const auto J = choi_of(zoo::random_cptp(6, 2, 2));
  auto mc = mc_success(J, 2);
  EXPECT_THROW(mc_to_ns_lift(mc, 4, J), InputError);
  mc.lambda *= 3.0;
  EXPECT_THROW(mc_to_ns_lift(mc, 3, J), InputError);
}

TEST(Sequential, SingleCandidateIsExact) {
  const auto J = trine_choi();
  const auto ns = ns_success(J, 3);
  const auto r = qc_sequential_protocol(J, ns, 1);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.avg_success, ns.value, 1e-9);
}

TEST(Sequential, TwoByTwoIsThreeQuarters) {
  const auto J = choi_of(measurement_channel(zoo::random_povm(7, 2, 3)));
  const auto ns = ns_success(J, 2);
  const auto r = qc_sequential_protocol(J, ns, 2);
  EXPECT_TRUE(r.pass) << r.diagnostic;
  EXPECT_NEAR(r.avg_success, 0.75 * ns.value, 1e-9);
  EXPECT_NEAR(r.per_message[1], 0.5 * ns.value, 1e-9);
}

TEST(Sequential, EqualSizesBeatOneMinusInverseE) {
  const auto J = choi_of(zoo::classical({{0.8, 0.2}, {0.3, 0.7}}));
  for (int M = 2; M <= 6; ++M) {
    const auto ns = ns_success(J, M);
    const auto r = qc_sequential_protocol(J, ns, M);
    EXPECT_TRUE(r.pass);
    EXPECT_GE(r.avg_success, (1 - std::exp(-1.0)) * ns.value);
  }
}

TEST(Sequential, ReportInvariants) {
  const auto J = trine_choi();
  const auto r = qc_sequential_protocol(J, ns_success(J, 4), 3);
  double mean = 0.0;
  for (double x : r.per_message) mean += x / 3.0;
  EXPECT_NEAR(r.avg_success, mean, 1e-12);
  EXPECT_NEAR(r.avg_success + r.avg_error, 1.0, 1e-12);
}

TEST(Sequential, RefusesQuantumOutput) {
  const auto J = choi_of(zoo::amplitude_damping(0.3));
  EXPECT_THROW(qc_sequential_protocol(J, ns_success(J, 2), 2), InputError);
}

TEST(SquareRoot, BoundArithmetic) {
  EXPECT_NEAR(hn_error_bound(0.1, 100, 10, 1.0), 0.56, 1e-14);
  EXPECT_THROW(hn_error_bound(0.1, 100, 10, 0.0), InputError);
}

TEST(SquareRoot, SingleCandidateIsSupportProjector) {
  for (int seed : {8, 9}) {
    const auto J = choi_of(zoo::random_cptp(seed, 2, 2));
    const auto ns = ns_success(J, 3);
    const auto r = hn_protocol(J, ns, 1);
    EXPECT_TRUE(r.pass);
    EXPECT_GE(r.avg_success, ns.value - 1e-8);
  }
}

TEST(SquareRoot, QubitIdentityAcrossTradeoffs) {
  const auto J = choi_of(zoo::identity(2));
  const auto ns = ns_success(J, 8);
  for (double c : {0.25, 0.5, 1.0, 2.0}) {
    const auto r = hn_protocol(J, ns, 2, c);
    EXPECT_TRUE(r.pass) << c;
    EXPECT_LE(r.avg_error, hn_error_bound(1 - ns.value, 8, 2, c) + 1e-8);
  }
}

TEST(SquareRoot, GuardRejectsLargeInstances) {
  const auto J = choi_of(zoo::identity(3));
  EXPECT_THROW(hn_protocol(J, ns_success(J, 2), 8), InputError);
}

TEST(SquareRoot, OperatorInequality) {
  EXPECT_TRUE(hn_inequality_check(CMatrix::Zero(3, 3), CMatrix(identity(3) * 0.4), 0.7).pass);
  EXPECT_TRUE(hn_inequality_check(identity(2), CMatrix::Zero(2, 2), 1.0).pass);
  Rng rng(10);
  for (int t = 0; t < 200; ++t) {
    const int d = draw_int(rng, 2, 6);
    const auto s = eigh(random_hermitian(rng, d));
    Spectrum clipped = s;
    for (Eigen::Index i = 0; i < d; ++i) clipped.values(i) = draw_real(rng, 0.0, 1.0);
    const CMatrix A = hermitize(clipped.reconstruct());
    const CMatrix B = random_psd(rng, d, draw_int(rng, 1, d)) * draw_real(rng, 0.0, 2.0);
    const double c = std::exp(draw_real(rng, -2.0, 2.0));
    const auto r = hn_inequality_check(A, B, c);
    EXPECT_TRUE(r.pass) << "min eig " << r.min_eig;
  }
}

TEST(Flattening, Examples) {
  const auto f1 = flattening(identity(2) / 2.0);
  EXPECT_EQ(f1.v, 1);
  EXPECT_NEAR(f1.weights[0], 1.0, 1e-14);
  EXPECT_EQ(f1.dims[0], 2);
  const auto f2 = flattening(diag({0.5, 0.25, 0.25}));
  ASSERT_EQ(f2.v, 2);
  EXPECT_NEAR(f2.weights[0], 0.5, 1e-14);
  EXPECT_NEAR(f2.weights[1], 0.5, 1e-14);
  EXPECT_EQ(f2.dims[0], 1);
  EXPECT_EQ(f2.dims[1], 2);
}

TEST(Flattening, ReconstructsRandomStates) {
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    const int d = draw_int(rng, 1, 4);
    const CMatrix rho = random_density(rng, d, draw_int(rng, 1, d));
    const auto f = flattening(rho);
    CMatrix rebuilt = CMatrix::Zero(d, d);
    double total = 0.0;
    for (int j = 0; j < f.v; ++j) {
      rebuilt += f.weights[j] / f.dims[j] * f.projectors[j];
      total += f.weights[j];
      for (int k = 0; k < f.v; ++k)
        if (k != j) EXPECT_LT(max_abs(f.projectors[j] * f.projectors[k]), 1e-10);
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
    EXPECT_LT(max_abs(rebuilt - rho), 1e-9);
  }
}

TEST(OneDesign, TwirlIsTraceTimesMaximallyMixed) {
  EXPECT_EQ(pauli_one_design(1).size(), 1u);
  Rng rng(12);
  for (int d = 1; d <= 4; ++d) {
    const auto design = pauli_one_design(d);
    ASSERT_EQ(static_cast<int>(design.size()), d * d);
    for (int t = 0; t < 5; ++t) {
      const CMatrix x = gaussian_matrix(rng, d, d);
      CMatrix avg = CMatrix::Zero(d, d);
      for (const auto& u : design) {
        EXPECT_LT(max_abs(u * u.adjoint() - identity(d)), 1e-10);
        avg += u * x * u.adjoint() / static_cast<double>(d * d);
      }
      EXPECT_LT(max_abs(avg - x.trace() * identity(d) / static_cast<double>(d)), 1e-10);
    }
  }
}

TEST(Multiplicative, Prefactor) {
  EXPECT_NEAR(multiplicative_prefactor(1, 2, 2, 2), 1.0 / (2.0 * std::log(16.0 * std::exp(1.0))), 1e-15);
  EXPECT_NEAR(multiplicative_prefactor(1, 2, 2, 2), 0.13253, 1e-5);
}

TEST(Multiplicative, ReplacerSuccessIsOneOverZM) {
  const auto ch = zoo::replacer(2, diag({0.3, 0.7}));
  const auto J = choi_of(ch);
  const int M = 3;
  const auto ns = ns_success_fixed(J, M, identity(2) / 2.0);
  const MultiplicativeCode code(J, ns);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto sample = code.draw(M, s);
    double Z = 0.0;
    const auto succ = code.closed_form_success(sample, &Z);
    for (double x : succ) EXPECT_NEAR(x, 1.0 / (Z * M), 1e-7);
  }
}

TEST(Multiplicative, ClosedFormMatchesSimulation) {
  Rng rng(13);
  for (int t = 0; t < 4; ++t) {
    const auto ch = zoo::random_cptp(rng(), 2, draw_int(rng, 2, 3));
    const auto J = choi_of(ch);
    const CMatrix rho = t % 2 ? random_density(rng, 2) : CMatrix(identity(2) / 2.0);
    const int M = draw_int(rng, 2, 4);
    MultiplicativeOptions o;
    o.samples = 12;
    o.seed = 100 + t;
    const auto r = multiplicative_protocol(ch, J, ns_success_fixed(J, M, rho), o);
    EXPECT_TRUE(r.pass) << r.diagnostic;
    EXPECT_FALSE(r.hypothesis_ok);
    EXPECT_LE(r.max_residual, 1e-8);
    EXPECT_NEAR(r.avg_success + r.avg_error, 1.0, 1e-12);
  }
}

TEST(Multiplicative, DesignAverageBound) {
  const auto J = choi_of(zoo::random_cptp(14, 2, 2));
  Rng rng(15);
  for (const CMatrix& rho : {CMatrix(identity(2) / 2.0), random_density(rng, 2)}) {
    const int M = 4;
    const MultiplicativeCode code(J, ns_success_fixed(J, M, rho));
    const CMatrix avg = code.design_average();
    EXPECT_LE(max_eigenvalue(avg), static_cast<double>(code.v()) / M + 1e-8);
  }
}

TEST(Multiplicative, DeterministicForSeed) {
  const auto ch = zoo::random_cptp(16, 2, 2);
  const auto J = choi_of(ch);
  const auto ns = ns_success_fixed(J, 3, identity(2) / 2.0);
  MultiplicativeOptions o;
  o.samples = 8;
  o.seed = 77;
  const auto a = multiplicative_protocol(ch, J, ns, o), b = multiplicative_protocol(ch, J, ns, o);
  EXPECT_EQ(a.avg_success, b.avg_success);
  EXPECT_EQ(a.per_message, b.per_message);
}

TEST(Chernoff, DeterministicFamilyNeverExceeds) {
  ChernoffFamily f;
  f.mean = diag({0.5, 0.2});
  f.L = 1.0;
  f.terms = 4;
  f.sample = [m = f.mean](Rng&) { return m; };
  const auto r = matrix_chernoff_check(f, 0.1, 200, 1);
  EXPECT_EQ(r.frequency, 0.0);
  EXPECT_TRUE(r.pass);
  const auto z = matrix_chernoff_check(f, 0.0, 50, 1);
  EXPECT_NEAR(z.bound, 2.0, 1e-14);
  EXPECT_TRUE(z.pass);
}

TEST(Chernoff, RejectsOutOfRangeSamples) {
  ChernoffFamily f;
  f.mean = identity(2);
  f.L = 0.5;
  f.sample = [](Rng&) { return CMatrix(identity(2)); };
  EXPECT_THROW(matrix_chernoff_check(f, 0.5, 10, 1), InputError);
}

TEST(Chernoff, BernoulliProjectorsRespectBound) {
  // X = P with probability q on a random rank-1 projector family.
  Rng gen(17);
  std::vector<CMatrix> projectors;
  CMatrix mean = CMatrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) {
    CVector v = gaussian_matrix(gen, 3, 1);
    v.normalize();
    projectors.push_back(v * v.adjoint());
    mean += projectors.back() / 3.0;
  }
  ChernoffFamily f;
  f.mean = mean;
  f.L = 1.0;
  f.terms = 12;
  f.sample = [projectors](Rng& rng) { return projectors[std::uniform_int_distribution<int>(0, 2)(rng)]; };
  for (double delta : {0.2, 0.5, 1.0}) {
    const auto r = matrix_chernoff_check(f, delta, 2000, 5);
    EXPECT_TRUE(r.pass) << delta << " " << r.frequency << " " << r.bound;
  }
}

TEST(Chernoff, DecoderFamilyAtUnionThreshold) {
  const auto J = choi_of(zoo::random_cptp(18, 2, 2));
  const int M = 8;
  const MultiplicativeCode code(J, ns_success_fixed(J, M, identity(2) / 2.0));
  const auto f = multiplicative_family(code, M);
  EXPECT_LE(f.L, 1.0 + 1e-9);
  const double mu = max_eigenvalue(static_cast<double>(M) * f.mean);
  const auto r = matrix_chernoff_check(f, event_delta(code, M, mu), 2000, 9);
  EXPECT_TRUE(r.pass);
}

TEST(Seeds, DerivedStreamsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(5, 3), derive_seed(5, 3));
}

TEST(Ordering, SimulatedCodesStayBelowTheRelaxations) {
  // Every simulated protocol is an entanglement-assisted code with M' messages.
  const auto corpus = build_corpus({"trine", "bsc(0.1)", "amplitude_damping(0.2)", "depolarizing(2,0.25)"}, 2, 19);
  for (const auto& e : corpus) {
    const auto J = choi_of(e.channel);
    const auto ns4 = ns_success(J, 4);
    for (int Mp : {2, 3}) {
      const double ns = ns_success(J, Mp).value, mc = mc_success(J, Mp).value;
      EXPECT_LE(ns, mc + 1e-6);
      EXPECT_LE(hn_protocol(J, ns4, Mp).avg_success, ns + 1e-6) << e.channel.name;
      if (e.classical_output) EXPECT_LE(qc_sequential_protocol(J, ns4, Mp).avg_success, ns + 1e-6);
      MultiplicativeOptions o;
      o.samples = 8;
      const CMatrix flat = identity(J.dim_in) / static_cast<double>(J.dim_in);
      const auto mult = multiplicative_protocol(e.channel, J, ns_success_fixed(J, Mp, flat), o);
      EXPECT_LE(mult.avg_success, ns + 1e-6) << e.channel.name;
    }
  }
}
