#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>

#include "addcomb/cyclic.hpp"

namespace addcomb {

enum class NormKind { U2Direct, U2Spectral, U3 };
enum class U2Method { Direct, Spectral };
enum class CountMethod { Naive, Spectral };

std::string to_string(NormKind kind);
std::string to_string(CountMethod method);

struct NormReport {
  NormKind kind;
  double value;
  std::size_t modulus;
  std::chrono::duration<double> elapsed;
};

struct CountingFormResult {
  int k;
  Complex value;
  CountMethod method;
  std::size_t modulus;
};

struct GvnReport {
  int k;
  double lhs;  // |Lambda_k(f_0, ..., f_{k-1})|
  double rhs;  // min_j ||f_j||_{U^{k-1}}
  bool holds;
};

// Multiplicative derivative: result[x] = f[x + h] * conj(f[x]).
CyclicFunction derivative(const CyclicFunction& f, std::int64_t h);

// ||f||_{U^2}^4 = E_n |E_x f(x + n) conj f(x)|^2, evaluated in O(N^2).
double u2_fourth_power_direct(const CyclicFunction& f);
// ||f||_{U^2}^4 = sum_xi |f^(xi)|^4.
double u2_fourth_power(const Spectrum& s);

NormReport u2_norm(const CyclicFunction& f, U2Method method = U2Method::Spectral);

// ||f||_{U^3}^8 = E_n ||derivative(f, n)||_{U^2}^4 with the inner norm taken
// spectrally: N transforms of length N.
NormReport u3_norm(const CyclicFunction& f);

// Lambda_k(f_0..f_{k-1}) = E_{x,r} prod_j f_j(x + j r), k = fs.size() in {3, 4}.
// Spectral evaluation (k = 3 only) uses sum_c f0^(c) f1^(-2c) f2^(c).
CountingFormResult ap_form(std::span<const CyclicFunction> fs, CountMethod method);

// Checks |Lambda_k| <= min_j ||f_j||_{U^{k-1}} + 1e-9. Operands must be
// bounded in magnitude by 1.
GvnReport verify_gvn(std::span<const CyclicFunction> fs);

}  // namespace addcomb
