#include "addcomb/fourier_structure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "addcomb/errors.hpp"
#include "addcomb/fft.hpp"
#include "addcomb/gowers.hpp"
#include "addcomb/parallel.hpp"
#include "addcomb/primes.hpp"

namespace addcomb {
namespace {

constexpr double kTol = 1e-9;
constexpr double kSnap = 1e-12;
// Coefficients below this magnitude are treated as floating-point zeros when
// a scale threshold has underflowed to 0.
constexpr double kNoiseFloor = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<double> snapped_real(const CyclicFunction& f) {
  std::vector<double> out = f.real_part();
  for (double& v : out) {
    if (v < 0 && v > -kSnap) v = 0;
    if (v > 1 && v < 1 + kSnap) v = 1;
  }
  return out;
}

// Kernel with accuracy allowed to be exactly 0 (B becomes a subgroup).
FejerKernel build_kernel(const LargeSpectrum& targets, double epsilon) {
  const std::size_t n = targets.modulus;
  FejerKernel k;
  k.modulus = n;
  k.targets = targets;
  k.epsilon = epsilon;
  k.bohr_width = epsilon / 2;

  std::vector<char> ok(n);
  for (std::size_t t = 0; t < n; ++t) {
    ok[t] = t == 0 || 2.0 * std::sin(kPi * static_cast<double>(t) / static_cast<double>(n)) <=
                          k.bohr_width;
  }
  std::vector<std::size_t> freqs;
  for (std::size_t xi : targets.frequencies) {
    if (xi % n != 0) freqs.push_back(xi % n);
  }
  std::vector<char> member(n, 0);
  parallel_for(n, [&](std::size_t x) {
    for (std::size_t xi : freqs) {
      const auto r = static_cast<std::size_t>((static_cast<unsigned __int128>(x) * xi) % n);
      if (!ok[r]) return;
    }
    member[x] = 1;
  });
  k.bohr_size = static_cast<std::size_t>(std::count(member.begin(), member.end(), 1));
  const double b = static_cast<double>(k.bohr_size);
  const double nn = static_cast<double>(n);

  k.values.assign(n, 0.0);
  k.transform.assign(n, 0.0);
  if (k.is_averaging()) {
    std::fill(k.values.begin(), k.values.end(), 1.0);
    k.transform[0] = 1.0;
  } else if (k.is_identity()) {
    k.values[0] = nn;
    std::fill(k.transform.begin(), k.transform.end(), 1.0);
  } else {
    std::vector<Complex> ind(n), spec(n), corr(n);
    for (std::size_t x = 0; x < n; ++x) ind[x] = member[x] ? 1.0 : 0.0;
    fft::forward(ind, spec);
    std::vector<Complex> power(n);
    for (std::size_t xi = 0; xi < n; ++xi) {
      power[xi] = std::norm(spec[xi]);
      k.transform[xi] = std::min(1.0, std::norm(spec[xi]) / (b * b));
    }
    k.transform[0] = 1.0;
    fft::inverse(power, corr);
    for (std::size_t x = 0; x < n; ++x) {
      const double count = std::max(0.0, std::round(corr[x].real() / nn));
      k.values[x] = count * nn / (b * b);
    }
  }

  const double mean_k = pairwise_sum(k.values) / nn;
  if (std::abs(mean_k - 1.0) > kTol) {
    throw PostconditionViolation("fejer_kernel: mean " + std::to_string(mean_k) + " != 1");
  }
  for (double v : k.transform) {
    if (v < -kTol || v > 1 + kTol) {
      throw PostconditionViolation("fejer_kernel: transform value outside [0, 1]");
    }
  }
  for (std::size_t xi : targets.frequencies) {
    if (k.transform[xi % n] < 1 - epsilon - kTol) {
      throw PostconditionViolation("fejer_kernel: transform below 1 - epsilon at frequency " +
                                   std::to_string(xi));
    }
  }
  return k;
}

struct SortedMagnitudes {
  std::vector<double> magnitude;  // ascending
  std::vector<double> prefix;     // prefix[i] = sum of squares of the first i

  explicit SortedMagnitudes(const Spectrum& s) {
    for (const Complex& c : s.coefficients()) {
      const double a = std::abs(c);
      magnitude.push_back(a < kNoiseFloor ? 0.0 : a);
    }
    std::sort(magnitude.begin(), magnitude.end());
    prefix.assign(magnitude.size() + 1, 0.0);
    for (std::size_t i = 0; i < magnitude.size(); ++i) {
      prefix[i + 1] = prefix[i] + magnitude[i] * magnitude[i];
    }
  }

  // Sum of |c|^2 over lo <= |c| <= hi.
  double mass(double lo, double hi) const {
    if (hi < lo) return 0.0;
    const auto first = std::lower_bound(magnitude.begin(), magnitude.end(), lo) - magnitude.begin();
    const auto last = std::upper_bound(magnitude.begin(), magnitude.end(), hi) - magnitude.begin();
    return last > first ? prefix[last] - prefix[first] : 0.0;
  }
};

double inv_exp2(double log2_value) {
  return std::isinf(log2_value) ? 0.0 : std::exp2(-log2_value);
}

std::int64_t recount_ap3(const CyclicFunction& indicator) {
  const std::array<CyclicFunction, 3> ops{indicator, indicator, indicator};
  const Complex v = ap_form(ops, CountMethod::Spectral).value;
  const double n = static_cast<double>(indicator.modulus());
  const double scaled = v.real() * n * n;
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-3 || std::abs(v.imag()) * n * n > 1e-3) {
    throw PostconditionViolation("3-AP count is not integral: " + std::to_string(scaled));
  }
  return static_cast<std::int64_t>(rounded);
}

}  // namespace

LargeSpectrum large_spectrum(const Spectrum& s, double threshold) {
  if (!(threshold > 0)) throw InvalidArgument("large_spectrum: threshold must be positive");
  LargeSpectrum out{s.modulus(), threshold, {}};
  for (std::size_t xi = 0; xi < s.modulus(); ++xi) {
    if (std::abs(s[xi]) >= threshold) out.frequencies.push_back(xi);
  }
  return out;
}

LargeSpectrum large_spectrum(const CyclicFunction& f, double threshold) {
  return large_spectrum(dft(f), threshold);
}

WeakDecomposition weak_decompose(const CyclicFunction& f, double lambda) {
  if (!(lambda > 0 && lambda < 1)) throw InvalidArgument("weak_decompose: lambda must be in (0,1)");
  if (f.max_abs() > 1 + 1e-12) {
    throw ContractViolation("weak_decompose: |f| exceeds 1 (max " + std::to_string(f.max_abs()) +
                            ")");
  }
  const Spectrum s = dft(f);
  const LargeSpectrum large = large_spectrum(s, lambda * lambda);
  std::vector<Complex> kept(s.modulus(), 0.0);
  for (std::size_t xi : large.frequencies) kept[xi] = s[xi];
  CyclicFunction structured = idft(Spectrum(std::move(kept)));
  CyclicFunction pseudorandom = sub(f, structured);
  const double u2 = u2_norm(pseudorandom).value;
  const double count_limit = 1.0 / std::pow(lambda, 4);
  if (u2 > lambda + kTol) {
    throw PostconditionViolation("weak_decompose: ||f_U||_U2 = " + std::to_string(u2) +
                                 " exceeds lambda");
  }
  if (static_cast<double>(large.frequencies.size()) > count_limit + kTol) {
    throw PostconditionViolation("weak_decompose: phase count exceeds lambda^-4");
  }
  return WeakDecomposition{std::move(structured), std::move(pseudorandom), lambda,
                           large.frequencies.size(), u2};
}

FejerKernel fejer_kernel(const LargeSpectrum& targets, double epsilon) {
  if (!(epsilon > 0 && epsilon < 1)) throw InvalidArgument("fejer_kernel: epsilon must be in (0,1)");
  if (targets.modulus == 0) throw InvalidArgument("fejer_kernel: modulus must be positive");
  return build_kernel(targets, epsilon);
}

CyclicFunction convolve(const CyclicFunction& f, const FejerKernel& kernel) {
  if (f.modulus() != kernel.modulus) throw InvalidArgument("convolve: mismatched moduli");
  if (kernel.is_identity()) return f;
  if (kernel.is_averaging()) return CyclicFunction::constant(f.modulus(), mean(f));
  const Spectrum s = dft(f);
  std::vector<Complex> product(s.modulus());
  for (std::size_t xi = 0; xi < s.modulus(); ++xi) product[xi] = s[xi] * kernel.transform[xi];
  return idft(Spectrum(std::move(product)));
}

StrongDecomposition strong_decompose(const CyclicFunction& f, double epsilon,
                                     const GrowthFunction& growth) {
  if (!(epsilon > 0 && epsilon <= 0.5)) {
    throw InvalidArgument("strong_decompose: epsilon must be 1/M with M >= 2");
  }
  const double m_real = 1.0 / epsilon;
  const double m_rounded = std::round(m_real);
  if (std::abs(m_real - m_rounded) > 1e-9 * m_real) {
    throw InvalidArgument("strong_decompose: 1/epsilon must be an integer");
  }
  if (!f.is_real()) throw ContractViolation("strong_decompose: f must be real");
  for (const Complex& v : f.values()) {
    if (v.real() < 0 || v.real() > 1) throw ContractViolation("strong_decompose: f must lie in [0,1]");
  }
  const auto big_m = static_cast<std::uint64_t>(m_rounded);
  const std::uint64_t m_limit = big_m * big_m;

  // log2 of the scales N_1, N_2, ...; once a scale saturates the rest are inf.
  std::vector<double> log2_scale{std::log2(m_rounded)};
  auto scale = [&](std::uint64_t m) {
    while (log2_scale.size() < m && !std::isinf(log2_scale.back())) {
      const double lg = log2_scale.back();
      const double log2_g = std::max(2.0 * lg, std::log2(std::ceil(m_real)) + lg);
      const double next = 4.0 * growth.log2_at(log2_g);
      log2_scale.push_back(std::isfinite(next) && next < 1e300 ? next : kInf);
    }
    return m <= log2_scale.size() ? log2_scale[m - 1] : kInf;
  };

  const Spectrum s = dft(f);
  const SortedMagnitudes sorted(s);
  const double budget = 2.0 / (m_rounded * m_rounded);
  std::uint64_t chosen = 0;
  for (std::uint64_t m = 1; m <= m_limit; ++m) {
    const double hi = inv_exp2(scale(m));
    const double lo = inv_exp2(scale(m + 2));
    if (sorted.mass(lo, hi) <= budget) {
      chosen = m;
      break;
    }
  }
  if (chosen == 0) throw PostconditionViolation("strong_decompose: pigeonhole found no scale");

  const double lg_m = scale(chosen);
  const double lg_next = scale(chosen + 1);
  const double coarse_threshold = std::max(inv_exp2(lg_m), kNoiseFloor);
  const double fine_threshold = std::max(inv_exp2(lg_next), kNoiseFloor);
  const double fine_accuracy = std::min(epsilon, inv_exp2(lg_next / 4.0));

  const LargeSpectrum coarse_spec = large_spectrum(s, coarse_threshold);
  const LargeSpectrum fine_spec = large_spectrum(s, fine_threshold);
  const FejerKernel coarse = build_kernel(coarse_spec, epsilon);
  const FejerKernel fine = build_kernel(fine_spec, fine_accuracy);

  const std::vector<double> smooth_coarse = snapped_real(convolve(f, coarse));
  const std::vector<double> smooth_fine = snapped_real(convolve(f, fine));
  const std::vector<double> original = f.real_part();
  const std::size_t n = f.modulus();
  std::vector<double> small(n), rough(n);
  for (std::size_t x = 0; x < n; ++x) {
    small[x] = smooth_fine[x] - smooth_coarse[x];
    rough[x] = original[x] - smooth_fine[x];
  }

  StrongDecomposition out{CyclicFunction::from_real(smooth_coarse),
                          CyclicFunction::from_real(small),
                          CyclicFunction::from_real(rough),
                          coarse_spec.frequencies.size(),
                          growth.describe(),
                          epsilon,
                          static_cast<std::size_t>(chosen),
                          lg_m,
                          lg_next,
                          fine_accuracy,
                          {},
                          {}};
  if (coarse.is_identity() || fine.is_identity()) {
    out.warnings.push_back("degenerate Bohr set {0}: kernel acts as the identity");
  }

  StrongBounds& b = out.bounds;
  b.u2_of_fU = u2_norm(out.pseudorandom).value;
  b.u2_limit = 4.0 / growth(static_cast<double>(out.complexity));
  b.l2_of_fS = l2_norm(out.small);
  b.l2_limit = 4.0 * epsilon;
  b.mean_delta = std::abs(mean(out.structured).real() - mean(f).real());
  b.structured_min = *std::min_element(smooth_coarse.begin(), smooth_coarse.end());
  b.structured_max = *std::max_element(smooth_coarse.begin(), smooth_coarse.end());
  b.pseudorandom_max_abs = out.pseudorandom.max_abs();
  double err = 0;
  for (std::size_t x = 0; x < n; ++x) {
    const double d = smooth_coarse[x] + small[x] + rough[x] - original[x];
    err += d * d;
  }
  b.reassembly_error = std::sqrt(err / static_cast<double>(n));

  std::ostringstream failures;
  if (b.u2_of_fU > b.u2_limit + kTol) failures << " u2(f_U)=" << b.u2_of_fU << ">" << b.u2_limit;
  if (b.l2_of_fS > b.l2_limit + kTol) failures << " l2(f_S)=" << b.l2_of_fS << ">" << b.l2_limit;
  if (b.mean_delta > kTol) failures << " mean drift " << b.mean_delta;
  if (b.reassembly_error > kTol) failures << " reassembly " << b.reassembly_error;
  if (b.structured_min < 0 || b.structured_max > 1 + kTol) failures << " f_Uperp outside [0,1]";
  if (b.pseudorandom_max_abs > 1 + kTol) failures << " |f_U| > 1";
  if (!failures.str().empty()) {
    throw PostconditionViolation("strong_decompose:" + failures.str());
  }
  return out;
}

DirichletPartition dirichlet_partition(std::size_t L, std::size_t xi, std::size_t N, double eta) {
  if (N == 0 || L == 0) throw InvalidArgument("dirichlet_partition: L and N must be positive");
  if (!(eta > 0)) throw InvalidArgument("dirichlet_partition: eta must be positive");
  if (2 * L > N) throw InvalidArgument("dirichlet_partition: need L <= N/2");
  const double eta2 = eta * eta;
  if (eta2 * std::sqrt(static_cast<double>(N)) < 4) {
    throw ScaleExhausted("dirichlet_partition: eta^2 sqrt(N) = " +
                         std::to_string(eta2 * std::sqrt(static_cast<double>(N))) + " < 4");
  }
  xi %= N;
  DirichletPartition out;
  if (xi == 0) {
    out.step = 1;
    out.max_piece_length = L;
    out.pieces.push_back(Progression{1, 1, L});
    return out;
  }

  const auto root = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(N))));
  // Signed representative of xi*s mod N in (-N/2, N/2].
  auto signed_residue = [&](std::size_t s) {
    const auto r = static_cast<std::int64_t>((static_cast<unsigned __int128>(xi) * s) % N);
    const auto n = static_cast<std::int64_t>(N);
    return 2 * r > n ? r - n : r;
  };
  std::size_t step = 0;
  for (std::size_t s = 1; s <= root; ++s) {
    // ||xi s / N|| <= 1/root  <=>  |r| * root <= N
    const std::int64_t r = signed_residue(s);
    if (static_cast<unsigned __int128>(std::llabs(r)) * root <= N) {
      step = s;
      break;
    }
  }
  if (step == 0) throw PostconditionViolation("dirichlet_partition: no Dirichlet step found");
  const std::int64_t r = signed_residue(step);
  out.step = step;
  out.phase_step = static_cast<double>(r) / static_cast<double>(N);
  const double budget = eta2 / 100.0;
  std::size_t max_len = L;
  if (r != 0) {
    const double cap = std::floor(budget / std::abs(out.phase_step)) + 1;
    max_len = cap >= static_cast<double>(L) ? L : static_cast<std::size_t>(cap);
  }
  max_len = std::max<std::size_t>(max_len, 1);
  out.max_piece_length = max_len;

  for (std::size_t residue = 1; residue <= std::min(step, L); ++residue) {
    const std::size_t count = (L - residue) / step + 1;
    const std::size_t parts = (count + max_len - 1) / max_len;
    const std::size_t base = count / parts;
    const std::size_t extra = count % parts;
    std::size_t offset = 0;
    for (std::size_t p = 0; p < parts; ++p) {
      const std::size_t len = base + (p < extra ? 1 : 0);
      out.pieces.push_back(Progression{static_cast<std::int64_t>(residue + offset * step),
                                       static_cast<std::int64_t>(step), len});
      offset += len;
    }
  }

  std::size_t covered = 0;
  for (const Progression& p : out.pieces) {
    covered += p.length;
    // drift = (len - 1) |r| / N, compared exactly up to the real budget
    const double drift = static_cast<double>(p.length - 1) * static_cast<double>(std::llabs(r)) /
                         static_cast<double>(N);
    if (drift > budget * (1 + 1e-12)) {
      throw PostconditionViolation("dirichlet_partition: piece phase drift " +
                                   std::to_string(drift) + " exceeds eta^2/100");
    }
  }
  if (covered != L) throw PostconditionViolation("dirichlet_partition: pieces do not cover [1, L]");
  return out;
}

IncrementStep density_increment_step(std::span<const double> f, double eta) {
  if (!(eta > 0 && eta < 1)) throw InvalidArgument("density_increment_step: eta must be in (0,1)");
  if (f.empty()) throw InvalidArgument("density_increment_step: empty interval");
  for (double v : f) {
    if (!(v >= 0 && v <= 1)) throw ContractViolation("density_increment_step: values must lie in [0,1]");
  }
  const std::size_t L = f.size();
  IncrementStep step;
  step.length = L;
  step.eta = eta;
  step.modulus = static_cast<std::size_t>(next_prime(3 * static_cast<std::uint64_t>(L)));
  const double baseline = pairwise_sum(f) / static_cast<double>(L);

  std::vector<double> centered(f.begin(), f.end());
  for (double& v : centered) v -= baseline;
  const CyclicFunction g =
      embed_interval(centered, IntervalEmbedding(L, step.modulus, 3));
  const Spectrum spec = dft(g);
  step.u2_value = std::pow(std::max(u2_fourth_power(spec), 0.0), 0.25);
  if (step.u2_value <= eta) {
    step.pseudorandom = true;
    return step;
  }

  std::size_t best_xi = 0;
  double best_mag = -1;
  for (std::size_t xi = 0; xi < spec.modulus(); ++xi) {
    const double a = std::abs(spec[xi]);
    if (a > best_mag) {
      best_mag = a;
      best_xi = xi;
    }
  }
  step.frequency = best_xi;
  const DirichletPartition partition = dirichlet_partition(L, best_xi, step.modulus, eta);
  step.pieces_scanned = partition.pieces.size();

  std::vector<double> gains(partition.pieces.size());
  std::vector<double> densities(partition.pieces.size());
  parallel_for(partition.pieces.size(), [&](std::size_t i) {
    const Progression& p = partition.pieces[i];
    double sum = 0;
    for (std::size_t j = 0; j < p.length; ++j) sum += f[static_cast<std::size_t>(p.at(j) - 1)];
    densities[i] = sum / static_cast<double>(p.length);
    gains[i] = densities[i] - baseline;
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < gains.size(); ++i) {
    if (gains[i] > gains[best]) best = i;
  }
  if (gains.empty() || gains[best] < eta * eta / 400) {
    throw IncrementNotFound("density_increment_step: best piece gain " +
                            std::to_string(gains.empty() ? 0.0 : gains[best]) +
                            " below eta^2/400 = " + std::to_string(eta * eta / 400));
  }
  step.certificate = ProgressionCertificate{partition.pieces[best], densities[best], baseline,
                                            gains[best]};
  return step;
}

std::int64_t interval_ap3_pairs(std::size_t L) {
  // For each x, r ranges over 1 <= x + 2r <= L.
  std::int64_t total = 0;
  const auto l = static_cast<std::int64_t>(L);
  for (std::int64_t x = 1; x <= l; ++x) {
    const std::int64_t lo = x - 1;  // -r_min * 2 <= x - 1
    const std::int64_t hi = l - x;
    total += lo / 2 + hi / 2 + 1;
  }
  return total;
}

RothResult roth_iterate(std::span<const std::int64_t> A, std::size_t L, double delta, double eta) {
  if (L == 0) throw InvalidArgument("roth_iterate: L must be positive");
  if (!(delta > 0 && delta <= 1)) throw InvalidArgument("roth_iterate: delta must be in (0,1]");
  if (!(eta > 0 && eta < 1)) throw InvalidArgument("roth_iterate: eta must be in (0,1)");
  std::vector<char> member(L, 0);
  for (std::int64_t a : A) {
    if (a < 1 || a > static_cast<std::int64_t>(L)) {
      throw InvalidArgument("roth_iterate: element " + std::to_string(a) + " outside [1, L]");
    }
    member[static_cast<std::size_t>(a - 1)] = 1;
  }
  const auto size = static_cast<std::size_t>(std::count(member.begin(), member.end(), 1));
  if (static_cast<double>(size) < delta * static_cast<double>(L) - 1e-9) {
    throw ContractViolation("roth_iterate: |A| < delta L");
  }

  RothResult out;
  out.iteration_cap = static_cast<std::size_t>(std::ceil(400.0 * (1.0 - delta) / (eta * eta)));
  Progression frame{1, 1, L};  // current interval as a progression in [1, L]
  std::vector<char> current = member;

  auto trace = [&] {
    std::ostringstream t;
    for (std::size_t i = 0; i < out.steps.size(); ++i) {
      const IncrementStep& s = out.steps[i];
      t << " [step " << i << ": L=" << s.length << " u2=" << s.u2_value;
      if (s.certificate) t << " gain=" << s.certificate->gain;
      t << "]";
    }
    return t.str();
  };

  while (true) {
    std::vector<double> f(current.begin(), current.end());
    IncrementStep step;
    try {
      step = density_increment_step(f, eta);
    } catch (const ScaleExhausted& e) {
      throw ScaleExhausted(std::string(e.what()) + "; trace:" + trace());
    }
    out.steps.push_back(step);
    if (step.pseudorandom) break;
    if (out.steps.size() > out.iteration_cap) {
      throw PostconditionViolation("roth_iterate: iteration cap exceeded;" + trace());
    }
    const Progression& p = step.certificate->progression;
    std::vector<char> next(p.length);
    for (std::size_t i = 0; i < p.length; ++i) next[i] = current[static_cast<std::size_t>(p.at(i) - 1)];
    frame = Progression{frame.at(static_cast<std::size_t>(p.start - 1)), frame.difference * p.difference,
                        p.length};
    current = std::move(next);
  }

  const IncrementStep& last = out.steps.back();
  out.final_progression = frame;
  out.final_length = current.size();
  out.final_size = static_cast<std::size_t>(std::count(current.begin(), current.end(), 1));
  out.final_density = static_cast<double>(out.final_size) / static_cast<double>(out.final_length);
  out.modulus = last.modulus;

  std::vector<double> values(current.begin(), current.end());
  const CyclicFunction embedded =
      embed_interval(values, IntervalEmbedding(out.final_length, out.modulus, 3));
  out.actual_count = recount_ap3(embedded);
  // 1_A = density * 1_[1,L] + g with ||g||_U2 <= eta; three telescoped
  // applications of the k = 3 inequality on the odd prime modulus.
  const double m = static_cast<double>(out.modulus);
  out.lower_bound = std::pow(out.final_density, 3) *
                        static_cast<double>(interval_ap3_pairs(out.final_length)) -
                    3.0 * eta * m * m;
  out.bound_holds = static_cast<double>(out.actual_count) >= out.lower_bound - 1e-6;
  return out;
}

ChainReport structured_count_chain(const CyclicFunction& f, double delta, double epsilon,
                                   const GrowthFunction& growth) {
  if (!(delta > 0 && delta <= 1)) throw InvalidArgument("structured_count_chain: delta must be in (0,1]");
  const double mean_f = mean(f).real();
  if (mean_f < delta - kTol) throw ContractViolation("structured_count_chain: mean(f) < delta");

  ChainReport report{strong_decompose(f, epsilon, growth), delta, epsilon, {}, 0, 0, {}, false};
  const StrongDecomposition& d = report.decomposition;
  const std::size_t n = f.modulus();
  const double nn = static_cast<double>(n);
  const std::vector<double> g = d.structured.real_part();
  std::vector<double> h = g;
  const std::vector<double> small = d.small.real_part();
  for (std::size_t x = 0; x < n; ++x) h[x] += small[x];

  // ||T^n g - g||^2 = 2 E g^2 - 2 E g(x + n) g(x)
  const Spectrum gs = dft(d.structured);
  std::vector<Complex> power(n);
  for (std::size_t xi = 0; xi < n; ++xi) power[xi] = std::norm(gs[xi]);
  const std::vector<double> autocorr = idft(Spectrum(std::move(power))).real_part();
  std::vector<double> sq(n);
  for (std::size_t x = 0; x < n; ++x) sq[x] = g[x] * g[x];
  const double energy = pairwise_sum(sq) / nn;
  for (std::size_t s = 0; s < n; ++s) {
    const double dist2 = std::max(0.0, 2 * energy - 2 * autocorr[s]);
    if (std::sqrt(dist2) <= epsilon) report.almost_periods.push_back(s);
  }
  report.almost_period_density = static_cast<double>(report.almost_periods.size()) / nn;

  auto triple = [&](const std::vector<double>& u, std::size_t s) {
    std::vector<double> terms(n);
    for (std::size_t x = 0; x < n; ++x) {
      terms[x] = u[x] * u[(x + s) % n] * u[(x + 2 * s) % n];
    }
    return pairwise_sum(terms) / nn;
  };
  std::vector<double> g_forms(report.almost_periods.size()), h_forms(report.almost_periods.size());
  parallel_for(report.almost_periods.size(), [&](std::size_t i) {
    g_forms[i] = triple(g, report.almost_periods[i]);
    h_forms[i] = triple(h, report.almost_periods[i]);
  });

  std::vector<double> cubes(n);
  for (std::size_t x = 0; x < n; ++x) cubes[x] = g[x] * g[x] * g[x];
  const double e_g3 = pairwise_sum(cubes) / nn;
  const double e_g = pairwise_sum(g) / nn;
  const double c = report.almost_period_density;
  const double d3 = delta * delta * delta;

  auto add = [&](std::string name, double lhs, double rhs) {
    report.links.push_back(ChainLink{std::move(name), lhs, rhs, lhs >= rhs - kTol});
  };
  const double worst_g = g_forms.empty() ? kInf : *std::min_element(g_forms.begin(), g_forms.end());
  const double worst_h = h_forms.empty() ? kInf : *std::min_element(h_forms.begin(), h_forms.end());
  add("almost_period_triple >= E g^3 - 3 eps (worst member)", worst_g, e_g3 - 3 * epsilon);
  add("E g^3 >= (E g)^3", e_g3, e_g * e_g * e_g);
  add("(E g)^3 - 3 eps >= delta^3 / 2", e_g * e_g * e_g - 3 * epsilon, d3 / 2);
  add("almost_period_triple(g + f_S) >= delta^3 / 4 (worst member)", worst_h, d3 / 4);

  const CyclicFunction hf = CyclicFunction::from_real(h);
  const std::array<CyclicFunction, 3> h_ops{hf, hf, hf};
  const std::array<CyclicFunction, 3> f_ops{f, f, f};
  const double lambda_h = ap_form(h_ops, CountMethod::Spectral).value.real();
  report.lambda3 = ap_form(f_ops, CountMethod::Spectral).value.real();
  const double c_n = n % 2 == 0 ? std::sqrt(2.0) : 1.0;
  add("Lambda3(g + f_S) >= c delta^3 / 4", lambda_h, c * d3 / 4);
  add("Lambda3(f) >= Lambda3(g + f_S) - 3 c_N ||f_U||_U2", report.lambda3,
      lambda_h - 3 * c_n * d.bounds.u2_of_fU);
  add("Lambda3(f) >= c delta^3 / 8", report.lambda3, c * d3 / 8);

  report.all_hold = std::all_of(report.links.begin(), report.links.end(),
                                [](const ChainLink& l) { return l.holds; });
  return report;
}

}  // namespace addcomb
