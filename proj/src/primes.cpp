#include "addcomb/primes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "addcomb/cyclic.hpp"
#include "addcomb/errors.hpp"
#include "addcomb/gowers.hpp"
#include "addcomb/parallel.hpp"

namespace addcomb {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

u64 isqrt(u64 x) {
  auto r = static_cast<u64>(std::sqrt(static_cast<long double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

std::vector<u64> primes_up_to(u64 n) {
  std::vector<char> composite(n + 1, 0);
  std::vector<u64> out;
  for (u64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= n; j += i) composite[j] = 1;
  }
  return out;
}

// Inverse of a modulo prime p, a not divisible by p.
u64 inverse_mod_prime(u64 a, u64 p) { return pow_mod(a, p - 2, p); }

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  for (u64 c = n;; ++c) {
    if (is_prime(c)) return c;
  }
}

SieveTable::SieveTable(std::uint64_t limit) : limit_(limit) {
  if (limit < 2) throw InvalidArgument("SieveTable: limit must be at least 2");
  if (limit > kMaxLimit) {
    throw CapacityError("SieveTable: limit " + std::to_string(limit) + " exceeds capacity " +
                        std::to_string(kMaxLimit));
  }
  spf_.assign(limit + 1, 0);
  for (u64 i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    if (i * i > limit) continue;
    for (u64 j = i * i; j <= limit; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
}

std::uint32_t SieveTable::smallest_prime_factor(std::uint64_t n) const {
  if (n < 2 || n > limit_) {
    throw CapacityError("SieveTable: " + std::to_string(n) + " outside [2, " +
                        std::to_string(limit_) + "]");
  }
  return spf_[n];
}

double von_mangoldt(std::uint64_t n, const SieveTable& table) {
  const u64 p = table.smallest_prime_factor(n);
  u64 m = n;
  while (m % p == 0) m /= p;
  return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

double chebyshev_ratio(std::uint64_t x, const SieveTable& table) {
  if (x < 2) throw InvalidArgument("chebyshev_ratio: x must be at least 2");
  std::vector<double> terms(x - 1);
  for (u64 n = 2; n <= x; ++n) terms[n - 2] = von_mangoldt(n, table);
  return pairwise_sum(terms) / static_cast<double>(x);
}

MangoldtWeights mangoldt_weights(std::size_t N, std::uint64_t w, std::uint64_t b) {
  if (N == 0) throw InvalidArgument("mangoldt_weights: N must be positive");
  if (b == 0) throw InvalidArgument("mangoldt_weights: b must be positive");
  MangoldtWeights out;
  out.N = N;
  out.w = w;
  out.b = b;
  for (u64 p = 2; p < w; ++p) {
    if (!is_prime(p)) continue;
    if (out.W > kWeightCapacity / p) throw CapacityError("mangoldt_weights: W overflows");
    out.W *= p;
    out.phi_W *= p - 1;
  }
  if (std::gcd(out.W, b) != 1) {
    throw InvalidArgument("mangoldt_weights: b = " + std::to_string(b) + " is not coprime to W = " +
                          std::to_string(out.W));
  }
  if (out.W > (kWeightCapacity - b) / N) {
    throw CapacityError("mangoldt_weights: W N + b exceeds capacity " +
                        std::to_string(kWeightCapacity));
  }
  const u64 X = out.W * N + b;
  const u64 root = isqrt(X);
  const std::vector<u64> base = primes_up_to(root);

  // first[n] = least base prime dividing W n + b (0 if none).
  std::vector<std::uint32_t> first(N + 1, 0);
  for (u64 p : base) {
    if (out.W % p == 0) continue;
    const u64 inv = inverse_mod_prime(out.W % p, p);
    const u64 n0 = mul_mod((p - b % p) % p, inv, p);
    for (u64 n = n0; n <= N; n += p) {
      if (first[n] == 0) first[n] = static_cast<std::uint32_t>(p);
    }
  }
  out.prime_base.assign(N + 1, 0);
  for (u64 n = 0; n <= N; ++n) {
    const u64 v = out.W * n + b;
    if (v < 2) continue;
    if (first[n] == 0 || first[n] == v) out.prime_base[n] = v;
  }
  for (u64 p : base) {
    if (out.W % p == 0) continue;
    for (u64 q = p * p;; q *= p) {
      if (q >= b && (q - b) % out.W == 0) {
        const u64 n = (q - b) / out.W;
        if (n <= N) out.prime_base[n] = p;
      }
      if (q > X / p) break;
    }
  }
  const double ratio = static_cast<double>(out.phi_W) / static_cast<double>(out.W);
  out.values.assign(N + 1, 0.0);
  for (u64 n = 0; n <= N; ++n) {
    if (out.prime_base[n] != 0) out.values[n] = ratio * std::log(static_cast<double>(out.prime_base[n]));
  }
  out.mean = pairwise_sum(std::span<const double>(out.values).subspan(1)) / static_cast<double>(N);
  return out;
}

PrimeApAverage prime_ap_average(int k, const MangoldtWeights& weights, ApMethod method) {
  if (k != 3 && k != 4) throw InvalidArgument("prime_ap_average: k must be 3 or 4");
  if (method == ApMethod::Spectral && k != 3) {
    throw InvalidArgument("prime_ap_average: spectral evaluation is only available for k = 3");
  }
  const std::size_t L = weights.N;
  PrimeApAverage out;
  out.k = k;
  out.N = L / static_cast<std::size_t>(k);
  out.w = weights.w;
  out.b = weights.b;
  out.method = method;
  const std::span<const double> v(weights.values);  // v[n], 1 <= n <= L
  const std::size_t span_r = (L - 1) / static_cast<std::size_t>(k - 1);
  for (std::size_t r = 1; r <= span_r; ++r) {
    out.pair_count += static_cast<double>(L - static_cast<std::size_t>(k - 1) * r);
  }
  if (out.pair_count == 0) return out;

  double total = 0;
  if (method == ApMethod::Spectral) {
    const IntervalEmbedding emb = IntervalEmbedding::for_progressions(L, 3);
    const CyclicFunction f = embed_interval(v.subspan(1, L), emb);
    const std::array<CyclicFunction, 3> ops{f, f, f};
    const double m = static_cast<double>(emb.ambient_modulus());
    const double all = ap_form(ops, CountMethod::Spectral).value.real() * m * m;
    std::vector<double> cubes(L);
    for (std::size_t n = 1; n <= L; ++n) cubes[n - 1] = v[n] * v[n] * v[n];
    // all = sum over r of every sign; r and -r contribute equally.
    total = (all - pairwise_sum(cubes)) / 2;
  } else {
    std::vector<double> per_r(span_r);
    parallel_for(span_r, [&](std::size_t i) {
      const std::size_t r = i + 1;
      const std::size_t last = L - static_cast<std::size_t>(k - 1) * r;
      double acc = 0;
      if (k == 3) {
        for (std::size_t n = 1; n <= last; ++n) acc += v[n] * v[n + r] * v[n + 2 * r];
      } else {
        for (std::size_t n = 1; n <= last; ++n) acc += v[n] * v[n + r] * v[n + 2 * r] * v[n + 3 * r];
      }
      per_r[i] = acc;
    });
    total = pairwise_sum(per_r);
  }
  out.average = total / out.pair_count;
  return out;
}

PrimeApAverage prime_ap_average(int k, std::size_t N, std::uint64_t w, std::uint64_t b,
                                ApMethod method) {
  if (k != 3 && k != 4) throw InvalidArgument("prime_ap_average: k must be 3 or 4");
  if (N == 0) throw InvalidArgument("prime_ap_average: N must be positive");
  const MangoldtWeights weights = mangoldt_weights(static_cast<std::size_t>(k) * N, w, b);
  PrimeApAverage out = prime_ap_average(k, weights, method);
  out.N = N;
  return out;
}

BiasReport fourier_bias(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("fourier_bias: empty weights");
  const std::size_t n = values.size();
  const IntervalEmbedding emb(n, 2 * n, 2);
  const Spectrum s = dft(embed_interval(values, emb));
  BiasReport out;
  out.modulus = emb.ambient_modulus();
  std::vector<BiasEntry> entries;
  entries.reserve(out.modulus - 1);
  for (std::size_t xi = 1; xi < out.modulus; ++xi) entries.push_back({xi, std::abs(s[xi])});
  const std::size_t top = std::min<std::size_t>(20, entries.size());
  std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(top), entries.end(),
                    [](const BiasEntry& a, const BiasEntry& b) {
                      return a.magnitude != b.magnitude ? a.magnitude > b.magnitude
                                                        : a.frequency < b.frequency;
                    });
  entries.resize(top);
  out.profile = std::move(entries);
  if (!out.profile.empty()) {
    out.max_nonzero_coeff = out.profile.front().magnitude;
    out.argmax = out.profile.front().frequency;
  }
  return out;
}

BiasReport fourier_bias(const MangoldtWeights& weights) {
  std::vector<double> centered(weights.values.begin() + 1, weights.values.end());
  for (double& v : centered) v -= 1.0;
  return fourier_bias(centered);
}

}  // namespace addcomb
