#include "addcomb/gowers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "addcomb/errors.hpp"
#include "addcomb/fft.hpp"
#include "addcomb/parallel.hpp"

namespace addcomb {
namespace {

using Clock = std::chrono::steady_clock;

void require_common_modulus(std::span<const CyclicFunction> fs, const char* op) {
  for (const CyclicFunction& f : fs) {
    if (f.modulus() != fs.front().modulus()) {
      throw InvalidArgument(std::string(op) + ": operands have mismatched moduli");
    }
  }
}

Complex ap_naive(std::span<const CyclicFunction> fs) {
  const std::size_t n = fs.front().modulus();
  const std::size_t k = fs.size();
  std::vector<double> re(n), im(n);
  parallel_for(n, [&](std::size_t r) {
    Complex acc = 0.0;
    std::vector<std::size_t> idx(k);
    for (std::size_t j = 0; j < k; ++j) idx[j] = (j * r) % n;
    for (std::size_t x = 0; x < n; ++x) {
      Complex term = fs[0][idx[0]];
      for (std::size_t j = 1; j < k; ++j) term *= fs[j][idx[j]];
      acc += term;
      for (std::size_t j = 0; j < k; ++j) {
        if (++idx[j] == n) idx[j] = 0;
      }
    }
    re[r] = acc.real();
    im[r] = acc.imag();
  });
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  return {pairwise_sum(re) / nn, pairwise_sum(im) / nn};
}

Complex ap3_spectral(std::span<const CyclicFunction> fs) {
  const Spectrum s0 = dft(fs[0]);
  const Spectrum s1 = dft(fs[1]);
  const Spectrum s2 = dft(fs[2]);
  const std::size_t n = s0.modulus();
  std::vector<double> re(n), im(n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t twice = (2 * c) % n;
    const std::size_t minus_twice = twice == 0 ? 0 : n - twice;
    const Complex term = s0[c] * s1[minus_twice] * s2[c];
    re[c] = term.real();
    im[c] = term.imag();
  }
  return {pairwise_sum(re), pairwise_sum(im)};
}

}  // namespace

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::U2Direct: return "U2_direct";
    case NormKind::U2Spectral: return "U2_spectral";
    case NormKind::U3: return "U3";
  }
  return "unknown";
}

std::string to_string(CountMethod method) {
  return method == CountMethod::Naive ? "naive" : "spectral";
}

CyclicFunction derivative(const CyclicFunction& f, std::int64_t h) {
  const auto n = static_cast<std::int64_t>(f.modulus());
  const auto offset = static_cast<std::size_t>(mod(h, n));
  std::vector<Complex> out(f.modulus());
  for (std::size_t x = 0; x < f.modulus(); ++x) {
    std::size_t src = x + offset;
    if (src >= f.modulus()) src -= f.modulus();
    out[x] = f[src] * std::conj(f[x]);
  }
  return CyclicFunction(std::move(out));
}

double u2_fourth_power_direct(const CyclicFunction& f) {
  const std::size_t n = f.modulus();
  std::vector<double> per_shift(n);
  parallel_for(n, [&](std::size_t s) {
    Complex acc = 0.0;
    std::size_t src = s;
    for (std::size_t x = 0; x < n; ++x) {
      acc += f[src] * std::conj(f[x]);
      if (++src == n) src = 0;
    }
    per_shift[s] = std::norm(acc / static_cast<double>(n));
  });
  return pairwise_sum(per_shift) / static_cast<double>(n);
}

double u2_fourth_power(const Spectrum& s) {
  std::vector<double> q(s.modulus());
  for (std::size_t i = 0; i < s.modulus(); ++i) {
    const double a = std::norm(s[i]);
    q[i] = a * a;
  }
  return pairwise_sum(q);
}

NormReport u2_norm(const CyclicFunction& f, U2Method method) {
  const auto start = Clock::now();
  const double fourth =
      method == U2Method::Direct ? u2_fourth_power_direct(f) : u2_fourth_power(dft(f));
  return NormReport{method == U2Method::Direct ? NormKind::U2Direct : NormKind::U2Spectral,
                    std::pow(std::max(fourth, 0.0), 0.25), f.modulus(), Clock::now() - start};
}

NormReport u3_norm(const CyclicFunction& f) {
  const auto start = Clock::now();
  const std::size_t n = f.modulus();
  std::vector<double> inner(n);
  parallel_for(n, [&](std::size_t h) {
    std::vector<Complex> d(n), spec(n);
    std::size_t src = h;
    for (std::size_t x = 0; x < n; ++x) {
      d[x] = f[src] * std::conj(f[x]);
      if (++src == n) src = 0;
    }
    fft::forward(d, spec);
    const double inv = 1.0 / static_cast<double>(n);
    double acc = 0.0;
    for (const Complex& c : spec) {
      const double a = std::norm(c * inv);
      acc += a * a;
    }
    inner[h] = acc;
  });
  const double eighth = pairwise_sum(inner) / static_cast<double>(n);
  return NormReport{NormKind::U3, std::pow(std::max(eighth, 0.0), 0.125), n,
                    Clock::now() - start};
}

CountingFormResult ap_form(std::span<const CyclicFunction> fs, CountMethod method) {
  const int k = static_cast<int>(fs.size());
  if (k != 3 && k != 4) throw InvalidArgument("ap_form: k must be 3 or 4");
  require_common_modulus(fs, "ap_form");
  if (method == CountMethod::Spectral && k != 3) {
    throw InvalidArgument("ap_form: spectral evaluation is only available for k = 3");
  }
  const Complex value = method == CountMethod::Spectral ? ap3_spectral(fs) : ap_naive(fs);
  return CountingFormResult{k, value, method, fs.front().modulus()};
}

GvnReport verify_gvn(std::span<const CyclicFunction> fs) {
  const int k = static_cast<int>(fs.size());
  if (k != 3 && k != 4) throw InvalidArgument("verify_gvn: k must be 3 or 4");
  require_common_modulus(fs, "verify_gvn");
  for (std::size_t j = 0; j < fs.size(); ++j) {
    if (fs[j].max_abs() > 1.0 + 1e-12) {
      throw ContractViolation("verify_gvn: operand " + std::to_string(j) +
                              " exceeds magnitude 1 (max " + std::to_string(fs[j].max_abs()) +
                              ")");
    }
  }
  const double lhs =
      std::abs(ap_form(fs, k == 3 ? CountMethod::Spectral : CountMethod::Naive).value);
  double rhs = std::numeric_limits<double>::infinity();
  for (const CyclicFunction& f : fs) {
    const double norm = k == 3 ? u2_norm(f).value : u3_norm(f).value;
    rhs = std::min(rhs, norm);
  }
  return GvnReport{k, lhs, rhs, lhs <= rhs + 1e-9};
}

}  // namespace addcomb
