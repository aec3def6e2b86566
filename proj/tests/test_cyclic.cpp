#include <gtest/gtest.h>

#include <sstream>

#include "addcomb/cyclic.hpp"
#include "addcomb/errors.hpp"
#include "addcomb/fft.hpp"
#include "oracles.hpp"

using namespace addcomb;

namespace {

double relative_l2(std::span<const Complex> a, std::span<const Complex> b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den == 0 ? std::sqrt(num) : std::sqrt(num / den);
}

}  // namespace

TEST(Dft, ConstantHasOnlyZeroFrequency) {
  const Spectrum s = dft(CyclicFunction::constant(8, 1.0));
  EXPECT_NEAR(std::abs(s[0] - Complex(1.0)), 0, 1e-15);
  for (std::size_t xi = 1; xi < 8; ++xi) EXPECT_NEAR(std::abs(s[xi]), 0, 1e-15);
}

TEST(Dft, CharacterIsDelta) {
  std::vector<Complex> v(16);
  for (std::size_t x = 0; x < 16; ++x) v[x] = oracle::e(3.0 * static_cast<double>(x) / 16);
  const Spectrum s = dft(CyclicFunction(v));
  for (std::size_t xi = 0; xi < 16; ++xi) EXPECT_NEAR(std::abs(s[xi]), xi == 3 ? 1.0 : 0.0, 1e-12);
}

TEST(Dft, MatchesDirectTransformForAllSmallModuli) {
  Rng rng(11);
  for (std::size_t n = 1; n <= 64; ++n) {
    const CyclicFunction f = oracle::random_complex(n, rng);
    EXPECT_LT(relative_l2(dft(f).coefficients(), oracle::direct_dft(f)), 1e-9) << "N=" << n;
  }
}

TEST(Dft, MatchesDirectTransformForRandomLargerModuli) {
  Rng rng(12);
  const std::vector<std::size_t> sizes{97, 100, 127, 128, 200, 211, 243, 256, 331, 360,
                                       401, 500, 509, 512, 625, 701, 768, 997, 1000, 1021};
  for (std::size_t n : sizes) {
    const CyclicFunction f = oracle::random_complex(n, rng);
    EXPECT_LT(relative_l2(dft(f).coefficients(), oracle::direct_dft(f)), 1e-9) << "N=" << n;
  }
}

TEST(Dft, Parseval) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.next() % 300;
    const CyclicFunction f = oracle::random_complex(n, rng);
    const Spectrum s = dft(f);
    double spectral = 0;
    for (const Complex& c : s.coefficients()) spectral += std::norm(c);
    const double l2 = l2_norm(f);
    EXPECT_NEAR(spectral, l2 * l2, 1e-9 * l2 * l2) << "N=" << n;
  }
}

TEST(Dft, ParsevalAtHundred) {
  Rng rng(14);
  const CyclicFunction f = oracle::random_complex(100, rng);
  const auto direct = oracle::direct_dft(f);
  double spectral = 0;
  for (const Complex& c : direct) spectral += std::norm(c);
  const double l2 = l2_norm(f);
  EXPECT_NEAR(spectral, l2 * l2, 1e-9 * l2 * l2);
}

TEST(Idft, RoundTrip) {
  Rng rng(15);
  const CyclicFunction f = oracle::random_complex(97, rng);
  EXPECT_LT(relative_l2(idft(dft(f)).values(), f.values()), 1e-9);
}

TEST(Idft, ZeroSpectrumGivesZero) {
  const CyclicFunction f = idft(Spectrum(std::vector<Complex>(10)));
  EXPECT_EQ(f.max_abs(), 0.0);
}

TEST(Idft, SingleCoefficientIsCharacter) {
  std::vector<Complex> c(32);
  c[5] = 1;
  const CyclicFunction f = idft(Spectrum(c));
  for (std::size_t x = 0; x < 32; ++x) {
    EXPECT_NEAR(std::abs(f[x] - oracle::e(5.0 * static_cast<double>(x) / 32)), 0, 1e-12);
  }
}

TEST(Shift, IndexRule) {
  std::vector<Complex> v(4);
  v[0] = 1;
  const CyclicFunction g = shift(CyclicFunction(v), 1);
  EXPECT_EQ(g[3], Complex(1.0));
  EXPECT_EQ(g[0], Complex(0.0));
  EXPECT_EQ(g[1], Complex(0.0));
  EXPECT_EQ(g[2], Complex(0.0));
}

TEST(Shift, Unitary) {
  Rng rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.next() % 200;
    const CyclicFunction f = oracle::random_complex(n, rng);
    const auto r = static_cast<std::int64_t>(rng.next() % 1000) - 500;
    EXPECT_NEAR(l2_norm(shift(f, r)), l2_norm(f), 1e-12);
  }
}

TEST(Embedding, AllOnes) {
  const std::vector<double> ones(10, 1.0);
  const CyclicFunction f = embed_interval(ones, IntervalEmbedding(10, 30));
  EXPECT_EQ(f.modulus(), 30u);
  std::size_t count = 0;
  for (std::size_t x = 0; x < 30; ++x) count += f[x] == Complex(1.0);
  EXPECT_EQ(count, 10u);
  EXPECT_NEAR(mean(f).real(), 1.0 / 3.0, 1e-15);
}

TEST(Embedding, EmptySupport) {
  const std::vector<double> zeros(10, 0.0);
  EXPECT_EQ(embed_interval(zeros, IntervalEmbedding(10, 30)).max_abs(), 0.0);
}

TEST(Embedding, ProgressionCountMatchesIntegers) {
  const std::vector<double> ones(3, 1.0);
  const IntervalEmbedding emb = IntervalEmbedding::for_progressions(3, 3);
  EXPECT_EQ(emb.ambient_modulus(), 18u);
  const CyclicFunction f = embed_interval(ones, emb);
  std::size_t cyclic = 0;
  for (std::size_t a = 0; a < 18; ++a)
    for (std::size_t d = 0; d < 18; ++d)
      cyclic += std::abs(f[a] * f[(a + d) % 18] * f[(a + 2 * d) % 18]) > 0;
  std::size_t integer = 0;
  for (int x = 1; x <= 3; ++x)
    for (int r = -3; r <= 3; ++r) integer += x + 2 * r >= 1 && x + 2 * r <= 3;
  EXPECT_EQ(cyclic, integer);
  EXPECT_EQ(integer, 5u);
}

TEST(Embedding, RejectsTooSmallAmbient) {
  EXPECT_THROW(IntervalEmbedding(10, 15), InvalidArgument);
}

TEST(Basics, MeansAndNorms) {
  EXPECT_EQ(mean(CyclicFunction::constant(7, 1.0)), Complex(1.0));
  std::vector<Complex> phase(50);
  for (std::size_t x = 0; x < 50; ++x) phase[x] = oracle::e(7.0 * static_cast<double>(x) / 50);
  EXPECT_NEAR(l2_norm(CyclicFunction(phase)), 1.0, 1e-12);
  std::vector<std::int64_t> A;
  for (int i = 0; i < 25; ++i) A.push_back(4 * i);
  EXPECT_NEAR(mean(CyclicFunction::indicator(100, A)).real(), 0.25, 1e-15);
}

TEST(Basics, RejectsNonFinite) {
  EXPECT_THROW(CyclicFunction({Complex(std::nan(""), 0)}), InvalidArgument);
  EXPECT_THROW(CyclicFunction(std::vector<Complex>{}), InvalidArgument);
}

TEST(Csv, RoundTrip) {
  Rng rng(17);
  const CyclicFunction f = oracle::random_complex(33, rng);
  std::stringstream io;
  write_csv(io, f);
  EXPECT_EQ(io.str().substr(0, 13), "index,re,im\n0");
  const CyclicFunction g = read_function_csv(io);
  ASSERT_EQ(g.modulus(), f.modulus());
  for (std::size_t x = 0; x < 33; ++x) EXPECT_EQ(g[x], f[x]);
}

TEST(Csv, SpectrumRoundTrip) {
  Rng rng(18);
  const Spectrum s = dft(oracle::random_complex(20, rng));
  std::stringstream io;
  write_csv(io, s);
  EXPECT_EQ(io.str().substr(0, 11), "freq,re,im\n");
  const Spectrum t = read_spectrum_csv(io);
  for (std::size_t xi = 0; xi < 20; ++xi) EXPECT_EQ(t[xi], s[xi]);
}

TEST(Csv, MissingHeaderRejected) {
  std::stringstream io("0,1,0\n");
  EXPECT_THROW(read_function_csv(io), InvalidArgument);
}
