#include "addcomb/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "addcomb/errors.hpp"
#include "addcomb/parallel.hpp"
#include "addcomb/rng.hpp"

namespace addcomb {
namespace {

constexpr double kTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kRoundingAttempts = 64;
// Below this Box^2 norm the remainder is treated as exactly zero.
constexpr double kNegligibleNorm = 1e-12;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t step) {
  return seed + 0x9E3779B97F4A7C15ULL * (step + 1);
}

EdgeFunction difference(const EdgeFunction& a, const EdgeFunction& b) {
  const std::size_t n = a.vertex_count();
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(a.values()[i] - b.values()[i], -1.0, 1.0);
  }
  return EdgeFunction(n, std::move(out));
}

void require_unit_interval(const EdgeFunction& f, const char* op) {
  for (double v : f.values()) {
    if (v < 0 || v > 1) throw ContractViolation(std::string(op) + ": f must take values in [0, 1]");
  }
}

// E_{x,y} f(x,y) a(x) b(y)
double weighted_correlation(const EdgeFunction& f, const std::vector<double>& a,
                            const std::vector<double>& b) {
  const std::size_t n = f.vertex_count();
  std::vector<double> per_x(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (a[x] == 0) continue;
    const auto row = f.row(x);
    double acc = 0;
    for (std::size_t y = 0; y < n; ++y) acc += row[y] * b[y];
    per_x[x] = a[x] * acc;
  }
  return pairwise_sum(per_x) / (static_cast<double>(n) * static_cast<double>(n));
}

std::vector<double> as_weights(const std::vector<char>& set) {
  return std::vector<double>(set.begin(), set.end());
}

// Alternating best response: with B fixed, the A maximizing sign * E f 1_A 1_B
// keeps exactly the rows with positive signed mass on B, and symmetrically for
// B. Each half-step cannot decrease the signed correlation.
double polish_pair(const EdgeFunction& f, std::vector<char>& A, std::vector<char>& B,
                   double correlation) {
  const std::size_t n = f.vertex_count();
  const double sign = correlation < 0 ? -1.0 : 1.0;
  constexpr std::size_t kPolishRounds = 8;
  for (std::size_t round = 0; round < kPolishRounds; ++round) {
    std::vector<double> col(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      if (!A[x]) continue;
      const auto row = f.row(x);
      for (std::size_t y = 0; y < n; ++y) col[y] += row[y];
    }
    std::vector<char> nextB(n);
    for (std::size_t y = 0; y < n; ++y) nextB[y] = sign * col[y] > 0;
    std::vector<char> nextA(n);
    for (std::size_t x = 0; x < n; ++x) {
      const auto row = f.row(x);
      double acc = 0;
      for (std::size_t y = 0; y < n; ++y) acc += nextB[y] ? row[y] : 0.0;
      nextA[x] = sign * acc > 0;
    }
    const double c = weighted_correlation(f, as_weights(nextA), as_weights(nextB));
    if (sign * c <= sign * correlation + kTol) break;
    A = std::move(nextA);
    B = std::move(nextB);
    correlation = c;
  }
  return correlation;
}

// Nested partitions P^0 = {V}, P^(j+1) = P^(j) refined by a dichotomy pair
// for f - E(f | P^(j)). Extended lazily; once the remainder vanishes or the
// partition is discrete the sequence is constant.
class RefinementChain {
 public:
  RefinementChain(const EdgeFunction& f, std::uint64_t seed)
      : f_(f), seed_(seed) {
    partitions_.push_back(VertexPartition::trivial(f.vertex_count()));
    energies_.push_back(energy(f, partitions_.back()));
  }

  double energy_at(std::size_t j) {
    extend(j);
    return energies_[j];
  }
  const VertexPartition& partition_at(std::size_t j) {
    extend(j);
    return partitions_[j];
  }
  // ||f - E(f | P^(j))||_{Box^2}
  double remainder_norm_at(std::size_t j) {
    extend(j + 1);
    return remainder_norms_[j];
  }
  const std::vector<double>& energies() const { return energies_; }

 private:
  void extend(std::size_t j) {
    while (partitions_.size() <= j) {
      const std::size_t last = partitions_.size() - 1;
      const VertexPartition& p = partitions_[last];
      if (stable_) {
        remainder_norms_.push_back(remainder_norms_.back());
        partitions_.push_back(p);
        energies_.push_back(energies_[last]);
        continue;
      }
      const EdgeFunction remainder = difference(f_, conditional_expectation(f_, p));
      const double norm = box2_norm(remainder);
      remainder_norms_.push_back(norm);
      if (norm <= kNegligibleNorm || p.cell_count() == p.vertex_count()) {
        stable_ = true;
        partitions_.push_back(p);
        energies_.push_back(energies_[last]);
        continue;
      }
      const double eta = norm * (1 - 1e-9);
      const DichotomyResult d = box_dichotomy(remainder, eta, derive_seed(seed_, last));
      VertexPartition next = p.refine(d.A).refine(d.B);
      const double e = energy(f_, next);
      if (e < energies_[last] + std::pow(eta, 8) / 16 - kTol) {
        throw PostconditionViolation("strong_regularize: energy increment " +
                                     std::to_string(e - energies_[last]) +
                                     " below eta^8/16 at step " + std::to_string(last));
      }
      partitions_.push_back(std::move(next));
      energies_.push_back(e);
    }
  }

  const EdgeFunction& f_;
  std::uint64_t seed_;
  bool stable_ = false;
  std::vector<VertexPartition> partitions_;
  std::vector<double> energies_;
  std::vector<double> remainder_norms_;
};

}  // namespace

DichotomyResult box_dichotomy(const EdgeFunction& f, double eta, std::uint64_t seed) {
  if (!(eta > 0)) throw InvalidArgument("box_dichotomy: eta must be positive");
  const std::size_t n = f.vertex_count();
  const double nn = static_cast<double>(n) * static_cast<double>(n);

  // G = F F^T and GF(x', y') = sum_x G(x', x) f(x, y').
  std::vector<double> g(n * n), gf(n * n, 0.0);
  parallel_for(n, [&](std::size_t x) {
    const auto rx = f.row(x);
    for (std::size_t xp = 0; xp < n; ++xp) {
      const auto rxp = f.row(xp);
      double acc = 0;
      for (std::size_t y = 0; y < n; ++y) acc += rx[y] * rxp[y];
      g[x * n + xp] = acc;
    }
  });
  std::vector<double> sq(n * n);
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = g[i] * g[i];
  const double fourth = pairwise_sum(sq) / (nn * nn);
  if (fourth < std::pow(eta, 4)) {
    throw ContractViolation("box_dichotomy: ||f||_Box2 = " + std::to_string(std::pow(fourth, 0.25)) +
                            " < eta = " + std::to_string(eta));
  }
  parallel_for(n, [&](std::size_t xp) {
    double* out = gf.data() + xp * n;
    for (std::size_t x = 0; x < n; ++x) {
      const double c = g[xp * n + x];
      if (c == 0) continue;
      const auto rx = f.row(x);
      for (std::size_t y = 0; y < n; ++y) out[y] += c * rx[y];
    }
  });

  // Pivot maximizing f(x',y') E_{x,y} f(x,y) f(x,y') f(x',y); its mean is ||f||^4.
  DichotomyResult out;
  double best = -kInf;
  for (std::size_t xp = 0; xp < n; ++xp) {
    for (std::size_t yp = 0; yp < n; ++yp) {
      const double q = f(xp, yp) * gf[xp * n + yp] / nn;
      if (q > best) {
        best = q;
        out.pivot_x = xp;
        out.pivot_y = yp;
      }
    }
  }

  std::vector<double> a(n), b(n);
  for (std::size_t x = 0; x < n; ++x) a[x] = f(x, out.pivot_y);
  for (std::size_t y = 0; y < n; ++y) b[y] = f(out.pivot_x, y);
  auto part = [](const std::vector<double>& v, bool positive) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = positive ? std::max(v[i], 0.0) : std::max(-v[i], 0.0);
    return r;
  };
  std::vector<double> best_a, best_b;
  double best_corr = -1;
  for (bool sa : {true, false}) {
    for (bool sb : {true, false}) {
      std::vector<double> pa = part(a, sa), pb = part(b, sb);
      const double c = std::abs(weighted_correlation(f, pa, pb));
      if (c > best_corr) {
        best_corr = c;
        best_a = std::move(pa);
        best_b = std::move(pb);
      }
    }
  }

  const double target = std::pow(eta, 4) / 4;
  Rng rng(seed);
  for (std::size_t attempt = 1; attempt <= kRoundingAttempts; ++attempt) {
    std::vector<char> A(n), B(n);
    for (std::size_t x = 0; x < n; ++x) A[x] = rng.bernoulli(best_a[x]);
    for (std::size_t y = 0; y < n; ++y) B[y] = rng.bernoulli(best_b[y]);
    const double corr = weighted_correlation(f, as_weights(A), as_weights(B));
    if (std::abs(corr) >= target) {
      out.correlation = polish_pair(f, A, B, corr);
      out.A = std::move(A);
      out.B = std::move(B);
      out.attempts = attempt;
      return out;
    }
  }
  throw DichotomyFailed("box_dichotomy: no rounding reached eta^4/4 = " + std::to_string(target) +
                        " after " + std::to_string(kRoundingAttempts) + " attempts");
}

WeakRegularity weak_regularize(const EdgeFunction& f, double epsilon, std::uint64_t seed) {
  if (!(epsilon > 0 && epsilon < 1)) throw InvalidArgument("weak_regularize: epsilon must be in (0,1)");
  require_unit_interval(f, "weak_regularize");
  const double min_increment = std::pow(epsilon, 8) / 16;
  const auto cap = static_cast<std::size_t>(std::ceil(16 / std::pow(epsilon, 8)));

  VertexPartition p = VertexPartition::trivial(f.vertex_count());
  std::vector<double> energies{energy(f, p)};
  std::size_t iterations = 0;
  while (true) {
    EdgeFunction structured = conditional_expectation(f, p);
    EdgeFunction remainder = difference(f, structured);
    const double norm = box2_norm(remainder);
    if (norm <= epsilon) {
      return WeakRegularity{std::move(p), std::move(structured), std::move(remainder), iterations,
                            std::move(energies), norm};
    }
    if (iterations >= cap) throw PostconditionViolation("weak_regularize: iteration cap exceeded");
    const DichotomyResult d = box_dichotomy(remainder, epsilon, derive_seed(seed, iterations));
    p = p.refine(d.A).refine(d.B);
    const double e = energy(f, p);
    if (e - energies.back() < min_increment - kTol) {
      throw PostconditionViolation("weak_regularize: energy increment " +
                                   std::to_string(e - energies.back()) + " below eps^8/16");
    }
    energies.push_back(e);
    ++iterations;
  }
}

GraphDecomposition strong_regularize(const EdgeFunction& f, double epsilon,
                                     const GrowthFunction& growth, std::uint64_t seed) {
  if (!(epsilon > 0 && epsilon < 1)) throw InvalidArgument("strong_regularize: epsilon must be in (0,1)");
  require_unit_interval(f, "strong_regularize");
  RefinementChain chain(f, seed);
  const double eps2 = epsilon * epsilon;

  std::size_t n = 0;
  std::size_t n_prime = 0;
  while (true) {
    const double big_f = growth(2.0 * static_cast<double>(n));
    // Increment threshold: 1/F^4, tightened so that the
    // dichotomy converts it into ||f_U|| <= 4/F(T).
    const double tau = std::isinf(big_f) ? 0.0
                                         : std::min(1 / std::pow(big_f, 4), 4096 / std::pow(big_f, 8));
    const double window = tau > 0 ? std::ceil(eps2 / tau) : kInf;
    const double base = chain.energy_at(n);
    std::optional<std::size_t> found, jump;
    for (std::size_t j = n;; ++j) {
      if (chain.energy_at(j) > base + eps2) {
        jump = j;
        break;
      }
      if (static_cast<double>(j - n) > window) {
        throw PostconditionViolation("strong_regularize: pigeonhole window exhausted");
      }
      if (chain.energy_at(j + 1) - chain.energy_at(j) <= tau) {
        found = j;
        break;
      }
    }
    if (found) {
      n_prime = *found;
      break;
    }
    n = *jump;
  }

  const VertexPartition coarse = chain.partition_at(n);
  const VertexPartition fine = chain.partition_at(n_prime);
  EdgeFunction structured = conditional_expectation(f, coarse);
  EdgeFunction fine_part = conditional_expectation(f, fine);
  const std::size_t size = f.vertex_count();
  std::vector<double> small(size * size), rough(size * size);
  for (std::size_t i = 0; i < small.size(); ++i) {
    small[i] = fine_part.values()[i] - structured.values()[i];
    rough[i] = f.values()[i] - fine_part.values()[i];
  }

  GraphDecomposition out{std::move(structured),
                         EdgeFunction(size, std::move(small)),
                         EdgeFunction(size, std::move(rough)),
                         coarse,
                         fine,
                         2 * n,
                         n,
                         n_prime,
                         chain.energies(),
                         growth.describe(),
                         epsilon,
                         {}};
  GraphBounds& b = out.bounds;
  b.box2_of_fU = chain.remainder_norm_at(n_prime);
  b.box2_limit = 4 / growth(static_cast<double>(out.complexity));
  b.l2_of_fS = l2_norm(out.small);
  b.l2_limit = 4 * epsilon;
  const auto [smin, smax] = std::minmax_element(out.structured.values().begin(),
                                                out.structured.values().end());
  b.structured_min = *smin;
  b.structured_max = *smax;
  const auto [fmin, fmax] = std::minmax_element(fine_part.values().begin(), fine_part.values().end());
  b.fine_min = *fmin;
  b.fine_max = *fmax;
  double err = 0;
  for (std::size_t i = 0; i < f.values().size(); ++i) {
    const double d = out.structured.values()[i] + out.small.values()[i] +
                     out.pseudorandom.values()[i] - f.values()[i];
    err += d * d;
  }
  b.reassembly_error = std::sqrt(err / static_cast<double>(f.values().size()));

  std::string failures;
  if (b.box2_of_fU > b.box2_limit + kTol) failures += " box2(f_U) exceeds 4/F(T);";
  if (b.l2_of_fS > b.l2_limit + kTol) failures += " l2(f_S) exceeds 4 eps;";
  if (b.reassembly_error > kTol) failures += " reassembly error;";
  if (b.structured_min < -kTol || b.structured_max > 1 + kTol) failures += " f_Uperp outside [0,1];";
  if (b.fine_min < -kTol || b.fine_max > 1 + kTol) failures += " f_Uperp + f_S outside [0,1];";
  for (std::size_t j = 1; j < out.energies.size(); ++j) {
    if (out.energies[j] < out.energies[j - 1] - kTol) {
      failures += " energy decreased at step " + std::to_string(j) + ";";
      break;
    }
  }
  if (!failures.empty()) throw PostconditionViolation("strong_regularize:" + failures);
  return out;
}

RemovalResult triangle_removal(const EdgeFunction& G, double delta, std::uint64_t seed) {
  if (!(delta > 0 && delta < 1)) throw InvalidArgument("triangle_removal: delta must be in (0,1)");
  if (!G.is_indicator() || !G.is_symmetric()) {
    throw ContractViolation("triangle_removal: G must be a symmetric 0/1 graph");
  }
  const std::size_t n = G.vertex_count();
  for (std::size_t x = 0; x < n; ++x) {
    if (G(x, x) != 0) throw ContractViolation("triangle_removal: G must have no loops");
  }

  RemovalReport r;
  r.delta = delta;
  r.epsilon = delta * delta / 100;
  const GraphDecomposition d =
      strong_regularize(G, r.epsilon, GrowthFunction(GrowthFunction::Kind::Removal, delta), seed);
  r.T = d.complexity;
  const VertexPartition& p = d.partition;
  const std::size_t k = p.cell_count();

  const double atom_floor = delta * static_cast<double>(n) / std::exp2(static_cast<double>(r.T));
  std::vector<char> small_atom(k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    if (static_cast<double>(p.cell_size(c)) < atom_floor) {
      small_atom[c] = 1;
      ++r.small_atoms;
    }
  }
  std::vector<double> fs_mass(k * k, 0.0), density(k * k, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const std::size_t idx = p.cell_of(x) * k + p.cell_of(y);
      const double s = d.small(x, y);
      fs_mass[idx] += s * s;
      density[idx] = d.structured(x, y);
    }
  }
  const double irregular_floor = r.epsilon * r.epsilon / delta;
  std::vector<char> drop(k * k, 0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t idx = a * k + b;
      const double cells = static_cast<double>(p.cell_size(a)) * static_cast<double>(p.cell_size(b));
      if (fs_mass[idx] / cells >= irregular_floor) {
        drop[idx] = 1;
        ++r.irregular_pairs;
      } else if (density[idx] <= delta) {
        drop[idx] = 1;
        ++r.sparse_pairs;
      }
      if (small_atom[a] || small_atom[b]) drop[idx] = 1;
    }
  }

  std::vector<double> kept(G.values().begin(), G.values().end());
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if (G(x, y) == 0 || !drop[p.cell_of(x) * k + p.cell_of(y)]) continue;
      kept[x * n + y] = 0;
      kept[y * n + x] = 0;
      ++r.edges_removed;
    }
  }
  EdgeFunction out(n, std::move(kept));

  const double fs_ratio = d.bounds.l2_of_fS * d.bounds.l2_of_fS / (r.epsilon * r.epsilon);
  r.C = 9 * (2 + fs_ratio);
  const double v2 = static_cast<double>(n) * static_cast<double>(n);
  r.removal_limit = r.C * delta * v2 / 9;
  r.triangles_before = count_triangles(G);
  r.triangles_after = count_triangles(out);
  r.input_triangle_density = triangle_form(G, G, G);
  r.certified_density = std::pow(delta, 6) / (2 * std::exp2(3.0 * static_cast<double>(r.T)));
  r.removal_holds = static_cast<double>(r.edges_removed) <= r.removal_limit;
  r.certificate_holds =
      r.triangles_after == 0 || r.input_triangle_density >= r.certified_density;
  return RemovalResult{std::move(out), r};
}

}  // namespace addcomb
