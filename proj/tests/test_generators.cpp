#include <gtest/gtest.h>

#include "addcomb/errors.hpp"
#include "addcomb/generators.hpp"
#include "addcomb/gowers.hpp"
#include "oracles.hpp"

using namespace addcomb;

namespace {

std::vector<std::int64_t> gen(const std::string& spec, std::size_t L) {
  return generate_set(GeneratorSpec::parse(spec), L);
}

double frac(double x) { return x - std::floor(x); }

}  // namespace

TEST(Generators, LinearQuasiSmallCase) {
  const auto A = gen("linear_quasi:alpha=1.4142135623730951,delta=0.5", 10);
  std::vector<std::int64_t> brute;
  for (int n = 1; n <= 10; ++n)
    if (frac(std::sqrt(2.0) * n) <= 0.5) brute.push_back(n);
  EXPECT_EQ(A, brute);
  EXPECT_EQ(A, (std::vector<std::int64_t>{1, 3, 5, 6, 8, 10}));
}

TEST(Generators, FullDensityGivesWholeInterval) {
  std::vector<std::int64_t> all(50);
  for (std::size_t i = 0; i < 50; ++i) all[i] = static_cast<std::int64_t>(i + 1);
  EXPECT_EQ(gen("random:delta=1,seed=4", 50), all);
  EXPECT_EQ(gen("quadratic_quasi:delta=1", 50), all);
}

TEST(Generators, BracketQuadraticDefinition) {
  const auto A = gen("bracket_quadratic:delta=0.3", 2000);
  std::vector<std::int64_t> brute;
  const double a = std::sqrt(2.0), b = std::sqrt(3.0);
  for (int n = 1; n <= 2000; ++n)
    if (frac(std::floor(a * n) * b * n) <= 0.3) brute.push_back(n);
  EXPECT_EQ(A, brute);
}

TEST(Generators, RandomSubsetOfIsSubset) {
  const auto base = gen("linear_quasi:delta=0.4", 5000);
  const auto sub = gen("random_subset_of:delta=0.5,seed=9|linear_quasi:delta=0.4", 5000);
  EXPECT_TRUE(std::includes(base.begin(), base.end(), sub.begin(), sub.end()));
  EXPECT_NEAR(static_cast<double>(sub.size()) / static_cast<double>(base.size()), 0.5, 0.05);
}

TEST(Generators, Determinism) {
  for (const char* spec : {"random:delta=0.3,seed=17", "random_subset_of:delta=0.3,seed=2|random:delta=0.5,seed=3",
                           "bracket_quadratic:delta=0.2"}) {
    EXPECT_EQ(gen(spec, 3000), gen(spec, 3000)) << spec;
  }
  EXPECT_NE(gen("random:delta=0.3,seed=1", 3000), gen("random:delta=0.3,seed=2", 3000));
}

TEST(Generators, DensitySanity) {
  for (double delta : {0.1, 0.3, 0.7}) {
    for (const char* kind : {"linear_quasi", "quadratic_quasi"}) {
      const auto A = gen(std::string(kind) + ":delta=" + std::to_string(delta), 20000);
      EXPECT_NEAR(static_cast<double>(A.size()) / 20000, delta, 0.05) << kind << " " << delta;
    }
  }
}

TEST(Generators, PhaseFunctions) {
  const CyclicFunction one = generate_function(GeneratorSpec::parse("quadratic_phase:xi=0"), 31);
  for (std::size_t x = 0; x < 31; ++x) EXPECT_NEAR(std::abs(one[x] - Complex(1.0)), 0, 1e-12);
  const CyclicFunction frozen = generate_function(GeneratorSpec::parse("skew_shift:alpha=0,x0=0,y0=0"), 64);
  for (std::size_t x = 0; x < 64; ++x) EXPECT_NEAR(std::abs(frozen[x] - Complex(1.0)), 0, 1e-12);
  const CyclicFunction q = generate_function(GeneratorSpec::parse("quadratic_phase:xi=3"), 101);
  const CyclicFunction want = oracle::quadratic_phase(101, 3);
  for (std::size_t x = 0; x < 101; ++x) EXPECT_NEAR(std::abs(q[x] - want[x]), 0, 1e-9);
  const CyclicFunction p = generate_function(GeneratorSpec::parse("polynomial_phase:coeffs=0;0;0;1"), 61);
  for (std::size_t x = 0; x < 61; ++x) {
    EXPECT_NEAR(std::abs(p[x] - oracle::e(static_cast<double>((x * x * x) % 61) / 61)), 0, 1e-9);
  }
}

TEST(Generators, SkewShiftIsUnimodularWithSmallU2) {
  const CyclicFunction f = generate_function(GeneratorSpec::parse("skew_shift:alpha=1.4142135623730951"), 4096);
  for (std::size_t x = 0; x < 4096; ++x) EXPECT_NEAR(std::abs(f[x]), 1.0, 1e-12);
  const double u2 = u2_norm(f).value;
  const double u3 = u3_norm(f).value;
  EXPECT_LT(u2, 0.5);
  EXPECT_GT(u3, u2);
  RecordProperty("skew_shift_u2", std::to_string(u2));
  RecordProperty("skew_shift_u3", std::to_string(u3));
}

TEST(Generators, SetIndicatorFunction) {
  const auto A = gen("linear_quasi:delta=0.3", 100);
  const CyclicFunction f = generate_function(GeneratorSpec::parse("linear_quasi:delta=0.3"), 100);
  EXPECT_NEAR(mean(f).real(), static_cast<double>(A.size()) / 100, 1e-15);
}

TEST(Generators, GaussPhaseNorms) {
  for (std::size_t n : {101u, 1009u}) {
    const CyclicFunction f = generate_function(GeneratorSpec::parse("quadratic_phase:xi=1"), n);
    const double want = std::pow(static_cast<double>(n), -0.25);
    EXPECT_NEAR(u2_norm(f).value, want, 1e-6 * want);
    EXPECT_NEAR(u3_norm(f).value, 1.0, 1e-9);
  }
}

TEST(Generators, ParseAndValidate) {
  EXPECT_THROW(GeneratorSpec::parse("nonsense:delta=0.2"), InvalidArgument);
  EXPECT_THROW(GeneratorSpec::parse("linear_quasi:xi=2"), InvalidArgument);
  EXPECT_THROW(GeneratorSpec::parse("linear_quasi:delta=abc"), InvalidArgument);
  EXPECT_THROW(GeneratorSpec::parse("random_subset_of:delta=0.5,seed=1"), InvalidArgument);
  EXPECT_THROW(GeneratorSpec::parse("polynomial_phase"), InvalidArgument);
  EXPECT_THROW(gen("linear_quasi:delta=1.5", 10), InvalidArgument);
  EXPECT_THROW(gen("linear_quasi:delta=0", 10), InvalidArgument);
  EXPECT_THROW(gen("random:delta=0.5", 10), InvalidArgument);
  const GeneratorSpec seeded = GeneratorSpec::parse("random:delta=0.5").with_default_seed(5);
  EXPECT_EQ(generate_set(seeded, 100), gen("random:delta=0.5,seed=5", 100));
  const GeneratorSpec round = GeneratorSpec::parse(GeneratorSpec::parse("skew_shift:alpha=0.25,x0=0.5").describe());
  EXPECT_EQ(round.alpha, 0.25);
  EXPECT_EQ(round.x0, 0.5);
}
