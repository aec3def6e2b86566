#include "addcomb/cyclic.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "addcomb/errors.hpp"
#include "addcomb/fft.hpp"
#include "addcomb/parallel.hpp"

namespace addcomb {
namespace {

void check_values(std::span<const Complex> values, const char* what) {
  if (values.empty()) throw InvalidArgument(std::string(what) + ": modulus must be positive");
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InvalidArgument(std::string(what) + ": non-finite value");
    }
  }
}

void require_same_modulus(const CyclicFunction& f, const CyclicFunction& g, const char* op) {
  if (f.modulus() != g.modulus()) {
    throw InvalidArgument(std::string(op) + ": mismatched moduli " + std::to_string(f.modulus()) +
                          " and " + std::to_string(g.modulus()));
  }
}

void write_rows(std::ostream& out, const char* header, std::span<const Complex> values) {
  out << header << '\n';
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) {
    line.str("");
    line << i << ',' << values[i].real() << ',' << values[i].imag() << '\n';
    out << line.str();
  }
}

std::vector<Complex> read_rows(std::istream& in, const std::string& expected_header) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) {
    throw InvalidArgument("csv: expected header '" + expected_header + "', got '" + line + "'");
  }
  std::vector<Complex> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string idx, re, im;
    if (!std::getline(fields, idx, ',') || !std::getline(fields, re, ',') ||
        !std::getline(fields, im, ',')) {
      throw InvalidArgument("csv: malformed row " + std::to_string(row + 1));
    }
    try {
      if (std::stoull(idx) != row) {
        throw InvalidArgument("csv: indices must be 0..N-1 in order (row " +
                              std::to_string(row + 1) + ")");
      }
      values.emplace_back(std::stod(re), std::stod(im));
    } catch (const std::logic_error&) {
      throw InvalidArgument("csv: unparsable number in row " + std::to_string(row + 1));
    }
    ++row;
  }
  return values;
}

}  // namespace

std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

CyclicFunction::CyclicFunction(std::vector<Complex> values) : values_(std::move(values)) {
  check_values(values_, "CyclicFunction");
}

CyclicFunction CyclicFunction::zeros(std::size_t modulus) {
  return CyclicFunction(std::vector<Complex>(modulus));
}

CyclicFunction CyclicFunction::constant(std::size_t modulus, Complex c) {
  return CyclicFunction(std::vector<Complex>(modulus, c));
}

CyclicFunction CyclicFunction::from_real(std::span<const double> values) {
  return CyclicFunction(std::vector<Complex>(values.begin(), values.end()));
}

CyclicFunction CyclicFunction::indicator(std::size_t modulus,
                                         std::span<const std::int64_t> members) {
  std::vector<Complex> v(modulus);
  const auto n = static_cast<std::int64_t>(modulus);
  for (std::int64_t a : members) v[static_cast<std::size_t>(mod(a, n))] = 1.0;
  return CyclicFunction(std::move(v));
}

Complex CyclicFunction::at(std::int64_t x) const {
  return values_[static_cast<std::size_t>(mod(x, static_cast<std::int64_t>(values_.size())))];
}

double CyclicFunction::max_abs() const {
  double m = 0.0;
  for (const Complex& v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool CyclicFunction::is_real(double tol) const {
  for (const Complex& v : values_) {
    if (std::abs(v.imag()) > tol) return false;
  }
  return true;
}

std::vector<double> CyclicFunction::real_part() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = values_[i].real();
  return out;
}

Spectrum::Spectrum(std::vector<Complex> coefficients) : coeffs_(std::move(coefficients)) {
  check_values(coeffs_, "Spectrum");
}

Complex Spectrum::at(std::int64_t xi) const {
  return coeffs_[static_cast<std::size_t>(mod(xi, static_cast<std::int64_t>(coeffs_.size())))];
}

IntervalEmbedding::IntervalEmbedding(std::size_t interval_length, std::size_t ambient_modulus,
                                     std::size_t padding_factor)
    : length_(interval_length), modulus_(ambient_modulus), padding_(padding_factor) {
  if (length_ == 0) throw InvalidArgument("IntervalEmbedding: interval length must be positive");
  if (padding_ < 2) throw InvalidArgument("IntervalEmbedding: padding factor must be >= 2");
  if (modulus_ < 2 * length_) {
    throw InvalidArgument("IntervalEmbedding: ambient modulus " + std::to_string(modulus_) +
                          " < 2L = " + std::to_string(2 * length_));
  }
  if (modulus_ < padding_ * length_) {
    throw InvalidArgument("IntervalEmbedding: ambient modulus below padding_factor * L");
  }
}

IntervalEmbedding IntervalEmbedding::for_progressions(std::size_t interval_length, int k) {
  if (k < 2) throw InvalidArgument("IntervalEmbedding: progression length must be >= 2");
  const auto pad = static_cast<std::size_t>(2 * k);
  return IntervalEmbedding(interval_length, pad * interval_length, pad);
}

Spectrum dft(const CyclicFunction& f) {
  const std::size_t n = f.modulus();
  std::vector<Complex> out(n);
  fft::forward(f.values(), out);
  const double inv = 1.0 / static_cast<double>(n);
  for (Complex& c : out) c *= inv;
  return Spectrum(std::move(out));
}

CyclicFunction idft(const Spectrum& s) {
  std::vector<Complex> out(s.modulus());
  fft::inverse(s.coefficients(), out);
  return CyclicFunction(std::move(out));
}

CyclicFunction shift(const CyclicFunction& f, std::int64_t r) {
  const auto n = static_cast<std::int64_t>(f.modulus());
  const auto offset = static_cast<std::size_t>(mod(r, n));
  std::vector<Complex> out(f.modulus());
  for (std::size_t x = 0; x < f.modulus(); ++x) {
    std::size_t src = x + offset;
    if (src >= f.modulus()) src -= f.modulus();
    out[x] = f[src];
  }
  return CyclicFunction(std::move(out));
}

CyclicFunction embed_interval(std::span<const Complex> values, const IntervalEmbedding& emb) {
  if (values.size() != emb.interval_length()) {
    throw InvalidArgument("embed_interval: got " + std::to_string(values.size()) +
                          " values for an interval of length " +
                          std::to_string(emb.interval_length()));
  }
  std::vector<Complex> out(emb.ambient_modulus());
  for (std::size_t i = 0; i < values.size(); ++i) out[i + 1] = values[i];
  return CyclicFunction(std::move(out));
}

CyclicFunction embed_interval(std::span<const double> values, const IntervalEmbedding& emb) {
  std::vector<Complex> c(values.begin(), values.end());
  return embed_interval(std::span<const Complex>(c), emb);
}

Complex mean(const CyclicFunction& f) {
  std::vector<double> re(f.modulus()), im(f.modulus());
  for (std::size_t i = 0; i < f.modulus(); ++i) {
    re[i] = f[i].real();
    im[i] = f[i].imag();
  }
  const double n = static_cast<double>(f.modulus());
  return {pairwise_sum(re) / n, pairwise_sum(im) / n};
}

double l2_norm(const CyclicFunction& f) {
  std::vector<double> sq(f.modulus());
  for (std::size_t i = 0; i < f.modulus(); ++i) sq[i] = std::norm(f[i]);
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(f.modulus()));
}

CyclicFunction pointwise_mul(const CyclicFunction& f, const CyclicFunction& g) {
  require_same_modulus(f, g, "pointwise_mul");
  std::vector<Complex> out(f.modulus());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] * g[i];
  return CyclicFunction(std::move(out));
}

CyclicFunction conjugate(const CyclicFunction& f) {
  std::vector<Complex> out(f.modulus());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::conj(f[i]);
  return CyclicFunction(std::move(out));
}

CyclicFunction add(const CyclicFunction& f, const CyclicFunction& g) {
  require_same_modulus(f, g, "add");
  std::vector<Complex> out(f.modulus());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] + g[i];
  return CyclicFunction(std::move(out));
}

CyclicFunction sub(const CyclicFunction& f, const CyclicFunction& g) {
  require_same_modulus(f, g, "sub");
  std::vector<Complex> out(f.modulus());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] - g[i];
  return CyclicFunction(std::move(out));
}

CyclicFunction scale(const CyclicFunction& f, Complex c) {
  std::vector<Complex> out(f.modulus());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * f[i];
  return CyclicFunction(std::move(out));
}

void write_csv(std::ostream& out, const CyclicFunction& f) {
  write_rows(out, "index,re,im", f.values());
}

void write_csv(std::ostream& out, const Spectrum& s) {
  write_rows(out, "freq,re,im", s.coefficients());
}

CyclicFunction read_function_csv(std::istream& in) {
  return CyclicFunction(read_rows(in, "index,re,im"));
}

Spectrum read_spectrum_csv(std::istream& in) { return Spectrum(read_rows(in, "freq,re,im")); }

}  // namespace addcomb
