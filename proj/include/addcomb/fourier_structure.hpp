#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "addcomb/cyclic.hpp"
#include "addcomb/growth.hpp"

namespace addcomb {

struct LargeSpectrum {
  std::size_t modulus = 0;
  double threshold = 0;
  std::vector<std::size_t> frequencies;  // ascending
};

LargeSpectrum large_spectrum(const Spectrum& s, double threshold);
LargeSpectrum large_spectrum(const CyclicFunction& f, double threshold);

struct WeakDecomposition {
  CyclicFunction structured;
  CyclicFunction pseudorandom;
  double lambda;
  std::size_t phase_count;
  double u2_of_pseudorandom;
};

// Keeps the frequencies with |f^| >= lambda^2, so at most lambda^-4 phases
// and ||pseudorandom||_{U^2} <= lambda.
WeakDecomposition weak_decompose(const CyclicFunction& f, double lambda);

// Bohr-set autocorrelation kernel. B = {x : |e(x xi / N) - 1| <= epsilon/2
// for every target xi}; K = (N/|B|)^2 * (1_B autocorrelation) and
// K^(xi) = |1_B^(xi)|^2 / (|B|/N)^2.
struct FejerKernel {
  std::size_t modulus = 0;
  std::vector<double> values;
  std::vector<double> transform;  // K^(xi), real and in [0, 1]
  LargeSpectrum targets;
  double epsilon = 0;
  double bohr_width = 0;
  std::size_t bohr_size = 0;

  bool is_identity() const noexcept { return bohr_size == 1; }
  bool is_averaging() const noexcept { return bohr_size == modulus; }
};

FejerKernel fejer_kernel(const LargeSpectrum& targets, double epsilon);

// (f * K)(x) = E_y f(y) K(x - y).
CyclicFunction convolve(const CyclicFunction& f, const FejerKernel& kernel);

struct StrongBounds {
  double u2_of_fU = 0;
  double u2_limit = 0;  // 4 / F(T)
  double l2_of_fS = 0;
  double l2_limit = 0;  // 4 epsilon
  double mean_delta = 0;
  double reassembly_error = 0;
  double structured_min = 0;
  double structured_max = 0;
  double pseudorandom_max_abs = 0;
};

struct StrongDecomposition {
  CyclicFunction structured;
  CyclicFunction small;
  CyclicFunction pseudorandom;
  std::size_t complexity = 0;
  std::string growth;
  double epsilon = 0;
  std::size_t scale_index = 0;     // the pigeonholed m
  double log2_coarse_scale = 0;    // log2 N_m (may be +inf)
  double log2_fine_scale = 0;      // log2 N_{m+1}
  double fine_accuracy = 0;
  StrongBounds bounds;
  std::vector<std::string> warnings;
};

// Requires real 0 <= f <= 1 and epsilon = 1/M for an integer M >= 2. Every
// StrongBounds inequality is checked before returning; a failure throws
// PostconditionViolation.
StrongDecomposition strong_decompose(const CyclicFunction& f, double epsilon,
                                     const GrowthFunction& growth);

struct Progression {
  std::int64_t start = 0;
  std::int64_t difference = 1;
  std::size_t length = 0;

  std::int64_t at(std::size_t i) const {
    return start + static_cast<std::int64_t>(i) * difference;
  }
};

struct DirichletPartition {
  std::size_t step = 1;
  double phase_step = 0;  // signed ||xi * step / N|| in R/Z
  std::size_t max_piece_length = 0;
  std::vector<Progression> pieces;
};

// Partitions [1, L] into progressions of a common difference s <= ceil(sqrt N)
// on each of which x -> xi x / N drifts by at most eta^2/100 (mod 1).
DirichletPartition dirichlet_partition(std::size_t L, std::size_t xi, std::size_t N, double eta);

struct ProgressionCertificate {
  Progression progression;
  double measured_density = 0;
  double baseline_density = 0;
  double gain = 0;
};

struct IncrementStep {
  std::size_t length = 0;   // L of the current interval
  std::size_t modulus = 0;  // smallest prime >= 3L
  double eta = 0;
  double u2_value = 0;      // ||f - mean||_{U^2} on Z/NZ
  bool pseudorandom = false;
  std::size_t frequency = 0;
  std::size_t pieces_scanned = 0;
  std::optional<ProgressionCertificate> certificate;
};

// f holds values on [1, L] (f[i] is the value at i + 1), each in [0, 1].
IncrementStep density_increment_step(std::span<const double> f, double eta);

struct RothResult {
  std::vector<IncrementStep> steps;  // the last one is pseudorandom
  Progression final_progression;     // inside the original [1, L]
  std::size_t final_length = 0;
  std::size_t final_size = 0;
  std::size_t modulus = 0;
  double final_density = 0;
  std::int64_t actual_count = 0;     // (x, r) in (Z/MZ)^2, r = 0 included
  double lower_bound = 0;
  std::size_t iteration_cap = 0;
  bool bound_holds = false;
};

// A is a set of integers inside [1, L] with |A| >= delta L.
RothResult roth_iterate(std::span<const std::int64_t> A, std::size_t L, double delta, double eta);

// Number of pairs (x, r) with x, x + r, x + 2r all in [1, L] (r of any sign).
std::int64_t interval_ap3_pairs(std::size_t L);

struct ChainLink {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

struct ChainReport {
  StrongDecomposition decomposition;
  double delta = 0;
  double epsilon = 0;
  std::vector<std::size_t> almost_periods;
  double almost_period_density = 0;
  double lambda3 = 0;
  std::vector<ChainLink> links;
  bool all_hold = false;
};

ChainReport structured_count_chain(const CyclicFunction& f, double delta, double epsilon,
                                   const GrowthFunction& growth);

}  // namespace addcomb
