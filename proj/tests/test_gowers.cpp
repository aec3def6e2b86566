#include <gtest/gtest.h>

#include "addcomb/errors.hpp"
#include "addcomb/gowers.hpp"
#include "oracles.hpp"

using namespace addcomb;

namespace {

CyclicFunction cubic_phase(std::size_t n) {
  std::vector<Complex> v(n);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t c = (((x * x) % n) * x) % n;
    v[x] = oracle::e(static_cast<double>(c) / static_cast<double>(n));
  }
  return CyclicFunction(std::move(v));
}

double cubic_closed_form(double n) { return std::pow((1 / n) * (1 + (n - 1) / n), 0.125); }

}  // namespace

TEST(Derivative, QuadraticPhaseBecomesLinear) {
  const std::size_t n = 101;
  const CyclicFunction f = oracle::quadratic_phase(n, 3);
  const std::int64_t h = 5;
  const CyclicFunction d = derivative(f, h);
  for (std::size_t x = 0; x < n; ++x) {
    const double t = static_cast<double>((3 * (2 * h * static_cast<std::int64_t>(x) + h * h)) % 101) / 101;
    EXPECT_NEAR(std::abs(d[x] - oracle::e(t)), 0, 1e-9);
  }
}

TEST(Derivative, MatchesElementwiseOracle) {
  Rng rng(21);
  const CyclicFunction f = oracle::random_complex(50, rng);
  const CyclicFunction d = derivative(f, 7);
  for (std::size_t x = 0; x < 50; ++x) EXPECT_EQ(d[x], f[(x + 7) % 50] * std::conj(f[x]));
}

TEST(U2, GaussPhase) {
  EXPECT_NEAR(u2_norm(oracle::quadratic_phase(101, 1)).value, std::pow(101.0, -0.25), 1e-6);
  EXPECT_NEAR(u2_norm(oracle::quadratic_phase(101, 1)).value, 0.31544, 1e-5);
}

TEST(U2, ConstantOne) {
  EXPECT_NEAR(u2_norm(CyclicFunction::constant(17, 1.0)).value, 1.0, 1e-12);
  EXPECT_NEAR(u2_norm(CyclicFunction::constant(17, 1.0), U2Method::Direct).value, 1.0, 1e-12);
}

TEST(U2, DirectEqualsSpectralOnSigns) {
  Rng rng(22);
  const CyclicFunction f = oracle::random_sign(256, rng);
  const double d = u2_norm(f, U2Method::Direct).value;
  const double s = u2_norm(f, U2Method::Spectral).value;
  EXPECT_NEAR(d, s, 1e-8 * s);
}

TEST(U2, DirectEqualsSpectralOnRandom) {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const CyclicFunction f = oracle::random_bounded(1 + rng.next() % 120, rng);
    const double d = u2_norm(f, U2Method::Direct).value;
    const double s = u2_norm(f, U2Method::Spectral).value;
    EXPECT_NEAR(d, s, 1e-8 * std::max(s, 1e-12));
  }
}

TEST(U2, MatchesRawQuadrupleSum) {
  Rng rng(24);
  for (std::size_t n : {1u, 2u, 7u, 16u, 25u}) {
    const CyclicFunction f = oracle::random_complex(n, rng);
    EXPECT_NEAR(u2_fourth_power_direct(f), oracle::u2_fourth_raw(f), 1e-10) << n;
    EXPECT_NEAR(u2_fourth_power(dft(f)), oracle::u2_fourth_raw(f), 1e-10) << n;
  }
}

TEST(U2, ShiftInvariant) {
  Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const CyclicFunction f = oracle::random_bounded(64, rng);
    EXPECT_NEAR(u2_norm(shift(f, trial * 7 + 1)).value, u2_norm(f).value, 1e-10);
  }
}

TEST(U3, QuadraticPhaseIsOne) {
  for (std::size_t n : {101u, 211u}) {
    EXPECT_NEAR(u3_norm(oracle::quadratic_phase(n, 1)).value, 1.0, 1e-9);
  }
}

TEST(U3, ConstantOne) { EXPECT_NEAR(u3_norm(CyclicFunction::constant(31, 1.0)).value, 1.0, 1e-12); }

TEST(U3, MatchesRawOctupleSum) {
  Rng rng(26);
  for (std::size_t n : {1u, 5u, 12u, 17u}) {
    const CyclicFunction f = oracle::random_complex(n, rng);
    const double raw = oracle::u3_eighth_raw(f);
    EXPECT_NEAR(std::pow(u3_norm(f).value, 8), raw, 1e-10 * std::max(1.0, raw)) << n;
  }
}

TEST(U3, CubicClosedFormAgainstOctupleOracle) {
  const CyclicFunction f = cubic_phase(61);
  const double raw = std::pow(oracle::u3_eighth_raw(f), 0.125);
  EXPECT_NEAR(raw, cubic_closed_form(61), 1e-9);
  EXPECT_NEAR(u3_norm(f).value, cubic_closed_form(61), 1e-9);
}

TEST(U3, CubicPhaseAt1009) {
  EXPECT_NEAR(u3_norm(cubic_phase(1009)).value, cubic_closed_form(1009), 1e-6 * cubic_closed_form(1009));
  EXPECT_NEAR(cubic_closed_form(1009), 0.4594, 1e-4);
}

TEST(NormAxioms, Homogeneity) {
  Rng rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    const CyclicFunction f = oracle::random_bounded(40, rng);
    const Complex c = std::polar(0.1 + 2 * rng.uniform(), rng.uniform() * 6.28);
    const CyclicFunction g = scale(f, c);
    EXPECT_NEAR(u2_norm(g).value, std::abs(c) * u2_norm(f).value, 1e-10);
    EXPECT_NEAR(u3_norm(g).value, std::abs(c) * u3_norm(f).value, 1e-10);
  }
}

TEST(NormAxioms, TriangleInequality) {
  Rng rng(28);
  for (int trial = 0; trial < 100; ++trial) {
    const CyclicFunction f = oracle::random_bounded(32, rng);
    const CyclicFunction g = oracle::random_bounded(32, rng);
    const CyclicFunction s = add(f, g);
    EXPECT_LE(u2_norm(s).value, u2_norm(f).value + u2_norm(g).value + 1e-9);
    EXPECT_LE(u3_norm(s).value, u3_norm(f).value + u3_norm(g).value + 1e-9);
  }
}

TEST(NormAxioms, Monotonicity) {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const CyclicFunction f = oracle::random_bounded(1 + rng.next() % 64, rng);
    const double u2 = u2_norm(f).value;
    const double u3 = u3_norm(f).value;
    EXPECT_LE(u2, u3 + 1e-9);
    EXPECT_LE(u3, 1 + 1e-9);
  }
}

TEST(ApForm, AllOnes) {
  const std::vector<CyclicFunction> three(3, CyclicFunction::constant(20, 1.0));
  const std::vector<CyclicFunction> four(4, CyclicFunction::constant(20, 1.0));
  EXPECT_NEAR(std::abs(ap_form(three, CountMethod::Naive).value - 1.0), 0, 1e-12);
  EXPECT_NEAR(std::abs(ap_form(three, CountMethod::Spectral).value - 1.0), 0, 1e-12);
  EXPECT_NEAR(std::abs(ap_form(four, CountMethod::Naive).value - 1.0), 0, 1e-12);
}

TEST(ApForm, QuadraticQuadrupleIsOne) {
  const CyclicFunction f = oracle::quadratic_phase(101, 1);
  const CyclicFunction fb = conjugate(f);
  const CyclicFunction f3 = pointwise_mul(pointwise_mul(f, f), f);
  const std::vector<CyclicFunction> ops{f, conjugate(f3), f3, fb};
  EXPECT_NEAR(std::abs(ap_form(ops, CountMethod::Naive).value - 1.0), 0, 1e-9);
}

TEST(ApForm, SpectralMatchesNaiveOnIndicator) {
  Rng rng(30);
  const CyclicFunction f = oracle::random_indicator(37, 0.4, rng);
  const std::vector<CyclicFunction> ops(3, f);
  const Complex n = ap_form(ops, CountMethod::Naive).value;
  EXPECT_NEAR(std::abs(n - ap_form(ops, CountMethod::Spectral).value), 0, 1e-9);
  EXPECT_NEAR(std::abs(n - oracle::lambda_naive(ops)), 0, 1e-12);
}

TEST(ApForm, SpectralIdentityGate) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.next() % 40;
    const std::vector<CyclicFunction> ops{oracle::random_complex(n, rng), oracle::random_complex(n, rng),
                                          oracle::random_complex(n, rng)};
    const Complex want = oracle::lambda_naive(ops);
    EXPECT_NEAR(std::abs(ap_form(ops, CountMethod::Spectral).value - want), 0, 1e-9) << n;
    EXPECT_NEAR(std::abs(ap_form(ops, CountMethod::Naive).value - want), 0, 1e-12) << n;
  }
}

TEST(ApForm, FourTermNaiveMatchesOracle) {
  Rng rng(32);
  const std::vector<CyclicFunction> ops{oracle::random_complex(23, rng), oracle::random_complex(23, rng),
                                        oracle::random_complex(23, rng), oracle::random_complex(23, rng)};
  EXPECT_NEAR(std::abs(ap_form(ops, CountMethod::Naive).value - oracle::lambda_naive(ops)), 0, 1e-12);
}

TEST(ApForm, RejectsBadArity) {
  const std::vector<CyclicFunction> two(2, CyclicFunction::constant(5, 1.0));
  EXPECT_THROW(ap_form(two, CountMethod::Naive), InvalidArgument);
  const std::vector<CyclicFunction> four(4, CyclicFunction::constant(5, 1.0));
  EXPECT_THROW(ap_form(four, CountMethod::Spectral), InvalidArgument);
}

TEST(Gvn, PurePhaseOperand) {
  std::vector<Complex> v(64);
  for (std::size_t x = 0; x < 64; ++x) v[x] = oracle::e(5.0 * static_cast<double>(x) / 64);
  const std::vector<CyclicFunction> ops{CyclicFunction::constant(64, 1.0), CyclicFunction::constant(64, 1.0),
                                        CyclicFunction(v)};
  const GvnReport r = verify_gvn(ops);
  EXPECT_NEAR(r.lhs, 0, 1e-12);
  EXPECT_NEAR(r.rhs, 1.0, 1e-12);
  EXPECT_TRUE(r.holds);
}

TEST(Gvn, RandomTriplesAndQuadruples) {
  Rng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<CyclicFunction> ops{oracle::random_bounded(64, rng), oracle::random_bounded(64, rng),
                                          oracle::random_bounded(64, rng)};
    const GvnReport r = verify_gvn(ops);
    EXPECT_TRUE(r.holds);
    EXPECT_GE(r.rhs - r.lhs, -1e-9);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<CyclicFunction> ops{oracle::random_bounded(64, rng), oracle::random_bounded(64, rng),
                                          oracle::random_bounded(64, rng), oracle::random_bounded(64, rng)};
    const GvnReport r = verify_gvn(ops);
    EXPECT_TRUE(r.holds);
    EXPECT_GE(r.rhs - r.lhs, -1e-9);
  }
}

TEST(Gvn, QuadraticQuadrupleIsTight) {
  const CyclicFunction f = oracle::quadratic_phase(61, 2);
  const CyclicFunction f3 = pointwise_mul(pointwise_mul(f, f), f);
  const std::vector<CyclicFunction> ops{f, conjugate(f3), f3, conjugate(f)};
  const GvnReport r = verify_gvn(ops);
  EXPECT_NEAR(r.lhs, 1.0, 1e-9);
  EXPECT_NEAR(r.rhs, 1.0, 1e-9);
  EXPECT_TRUE(r.holds);
}

TEST(Gvn, RejectsUnboundedOperand) {
  const std::vector<CyclicFunction> ops{CyclicFunction::constant(8, 2.0), CyclicFunction::constant(8, 1.0),
                                        CyclicFunction::constant(8, 1.0)};
  EXPECT_THROW(verify_gvn(ops), ContractViolation);
}
