#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace addcomb {

using Complex = std::complex<double>;

// Least nonnegative residue of a modulo n (n > 0).
std::int64_t mod(std::int64_t a, std::int64_t n);

// A complex-valued function on Z/NZ, indexed by residues 0..N-1.
// Invariant: N >= 1 and every value is finite.
class CyclicFunction {
 public:
  explicit CyclicFunction(std::vector<Complex> values);

  static CyclicFunction zeros(std::size_t modulus);
  static CyclicFunction constant(std::size_t modulus, Complex c);
  static CyclicFunction from_real(std::span<const double> values);
  // 1_A for A given as integers, reduced mod `modulus`.
  static CyclicFunction indicator(std::size_t modulus, std::span<const std::int64_t> members);

  std::size_t modulus() const noexcept { return values_.size(); }
  std::span<const Complex> values() const noexcept { return values_; }
  const Complex& operator[](std::size_t x) const { return values_[x]; }
  // Value at the residue class of an arbitrary integer.
  Complex at(std::int64_t x) const;

  double max_abs() const;
  bool is_real(double tol = 1e-12) const;
  std::vector<double> real_part() const;

 private:
  std::vector<Complex> values_;
};

// Fourier coefficients f^(xi) = E_x f(x) e(-x xi / N), xi = 0..N-1.
class Spectrum {
 public:
  explicit Spectrum(std::vector<Complex> coefficients);

  std::size_t modulus() const noexcept { return coeffs_.size(); }
  std::span<const Complex> coefficients() const noexcept { return coeffs_; }
  const Complex& operator[](std::size_t xi) const { return coeffs_[xi]; }
  Complex at(std::int64_t xi) const;

 private:
  std::vector<Complex> coeffs_;
};

// Places an interval [1, L] inside Z/MZ. With padding_factor >= 2k every
// k-term progression of the embedded support with nonzero entries is a
// genuine integer progression.
class IntervalEmbedding {
 public:
  IntervalEmbedding(std::size_t interval_length, std::size_t ambient_modulus,
                    std::size_t padding_factor = 2);

  // padding_factor = 2k and M = 2kL.
  static IntervalEmbedding for_progressions(std::size_t interval_length, int k);

  std::size_t interval_length() const noexcept { return length_; }
  std::size_t ambient_modulus() const noexcept { return modulus_; }
  std::size_t padding_factor() const noexcept { return padding_; }

 private:
  std::size_t length_;
  std::size_t modulus_;
  std::size_t padding_;
};

Spectrum dft(const CyclicFunction& f);
CyclicFunction idft(const Spectrum& s);

// result[x] = f[(x + r) mod N]
CyclicFunction shift(const CyclicFunction& f, std::int64_t r);

// values[i] is the value at integer i + 1; residues 1..L receive them.
CyclicFunction embed_interval(std::span<const Complex> values, const IntervalEmbedding& emb);
CyclicFunction embed_interval(std::span<const double> values, const IntervalEmbedding& emb);

Complex mean(const CyclicFunction& f);
double l2_norm(const CyclicFunction& f);
CyclicFunction pointwise_mul(const CyclicFunction& f, const CyclicFunction& g);
CyclicFunction conjugate(const CyclicFunction& f);
CyclicFunction add(const CyclicFunction& f, const CyclicFunction& g);
CyclicFunction sub(const CyclicFunction& f, const CyclicFunction& g);
CyclicFunction scale(const CyclicFunction& f, Complex c);

// CSV with a mandatory header: `index,re,im` for functions, `freq,re,im`
// for spectra. Values are written with round-trip precision.
void write_csv(std::ostream& out, const CyclicFunction& f);
void write_csv(std::ostream& out, const Spectrum& s);
CyclicFunction read_function_csv(std::istream& in);
Spectrum read_spectrum_csv(std::istream& in);

}  // namespace addcomb
