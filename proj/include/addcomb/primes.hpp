#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace addcomb {

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(std::uint64_t n);
// Smallest prime >= n.
std::uint64_t next_prime(std::uint64_t n);

class SieveTable {
 public:
  // Capacity is bounded by kMaxLimit to keep memory predictable.
  static constexpr std::uint64_t kMaxLimit = 200'000'000;

  explicit SieveTable(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return limit_; }
  // Least prime factor of n, for 2 <= n <= limit.
  std::uint32_t smallest_prime_factor(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
};

// log p when n = p^j (j >= 1), else 0. Requires 2 <= n <= table.limit().
double von_mangoldt(std::uint64_t n, const SieveTable& table);

// psi(x) / x = (sum_{n <= x} Lambda(n)) / x.
double chebyshev_ratio(std::uint64_t x, const SieveTable& table);

// values[n] = (phi(W)/W) * Lambda(W n + b) for 0 <= n <= N; the mean is over
// 1 <= n <= N. prime_base[n] is p when W n + b = p^j, else 0.
struct MangoldtWeights {
  std::size_t N = 0;
  std::uint64_t w = 0;
  std::uint64_t W = 1;
  std::uint64_t b = 1;
  std::uint64_t phi_W = 1;
  std::vector<double> values;
  std::vector<std::uint64_t> prime_base;
  double mean = 0;
};

// Largest W N + b accepted by mangoldt_weights.
inline constexpr std::uint64_t kWeightCapacity = 1'000'000'000'000ULL;

MangoldtWeights mangoldt_weights(std::size_t N, std::uint64_t w, std::uint64_t b = 1);

enum class ApMethod { Naive, Spectral };

struct PrimeApAverage {
  int k = 3;
  std::size_t N = 0;
  std::uint64_t w = 0;
  std::uint64_t b = 1;
  ApMethod method = ApMethod::Spectral;
  double average = 0;
  double pair_count = 0;  // number of (n, r) averaged over
};

// Average of prod_j Lambda_{W,b}(n + j r) over pairs n >= 1, r >= 1 with
// n + (k-1) r <= kN. Spectral evaluation is available for k = 3 only.
PrimeApAverage prime_ap_average(int k, std::size_t N, std::uint64_t w, std::uint64_t b,
                                ApMethod method);
PrimeApAverage prime_ap_average(int k, const MangoldtWeights& weights, ApMethod method);

struct BiasEntry {
  std::size_t frequency = 0;
  double magnitude = 0;
};

struct BiasReport {
  std::size_t modulus = 0;  // padded group Z/MZ, M = 2N
  double max_nonzero_coeff = 0;
  std::size_t argmax = 0;
  std::vector<BiasEntry> profile;  // top 20 nonzero frequencies by magnitude
};

// values[i] is the value at n = i + 1, embedded on [1, N] of Z/2NZ.
BiasReport fourier_bias(std::span<const double> values);
// Uses Lambda_{W,b} - 1 on [1, N].
BiasReport fourier_bias(const MangoldtWeights& weights);

}  // namespace addcomb
