#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "addcomb/cyclic.hpp"

namespace addcomb {

enum class GeneratorKind {
  Random,            // each n kept with probability delta
  LinearQuasi,       // {alpha n} <= delta
  QuadraticQuasi,    // {alpha n^2} <= delta
  BracketQuadratic,  // {floor(alpha n) * beta * n} <= delta
  RandomSubsetOf,    // each element of a base set kept with probability delta
  QuadraticPhase,    // x -> e(xi x^2 / N)
  PolynomialPhase,   // x -> e(P(x) / N), integer coefficients c0 + c1 x + ...
  SkewShift,         // n -> e(y_n), (x, y) -> (x + alpha, y + x) on the torus
};

std::string to_string(GeneratorKind kind);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Random;
  double alpha = 1.4142135623730951;
  double beta = 1.7320508075688772;
  double delta = 0.5;
  std::int64_t xi = 1;
  std::vector<std::int64_t> coefficients;
  double x0 = 0;
  double y0 = 0;
  std::optional<std::uint64_t> seed;
  std::shared_ptr<const GeneratorSpec> base;  // RandomSubsetOf only

  // `kind:key=value,...`; RandomSubsetOf takes its base after a `|`, e.g.
  // `random_subset_of:delta=0.5,seed=3|linear_quasi:alpha=1.414,delta=0.3`.
  // Polynomial coefficients are `coeffs=c0;c1;c2`.
  static GeneratorSpec parse(const std::string& text);

  bool is_set_kind() const;
  bool is_randomized() const;  // this spec or its base draws random bits
  // Fills in a missing seed here and in the base chain.
  GeneratorSpec with_default_seed(std::uint64_t seed) const;
  void validate() const;
  std::string describe() const;
};

// Ascending members of [1, L].
std::vector<std::int64_t> generate_set(const GeneratorSpec& spec, std::size_t L);

// Phase kinds give their function on Z/NZ; set kinds give the indicator of
// generate_set(spec, N) reduced mod N.
CyclicFunction generate_function(const GeneratorSpec& spec, std::size_t N);

}  // namespace addcomb
