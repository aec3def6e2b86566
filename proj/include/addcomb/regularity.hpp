#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "addcomb/graph.hpp"
#include "addcomb/growth.hpp"

namespace addcomb {

struct DichotomyResult {
  std::vector<char> A;
  std::vector<char> B;
  double correlation = 0;  // E_{x,y} f(x,y) 1_A(x) 1_B(y)
  std::size_t attempts = 0;
  std::size_t pivot_x = 0;
  std::size_t pivot_y = 0;
};

// Requires ||f||_{Box^2} >= eta and |f| <= 1. Returns A, B with
// |E f 1_A 1_B| >= eta^4 / 4, found by seeded randomized rounding.
DichotomyResult box_dichotomy(const EdgeFunction& f, double eta, std::uint64_t seed);

struct WeakRegularity {
  VertexPartition partition;
  EdgeFunction structured;
  EdgeFunction pseudorandom;
  std::size_t iterations = 0;
  std::vector<double> energies;  // energy before each refinement, then final
  double box2_of_fU = 0;
};

WeakRegularity weak_regularize(const EdgeFunction& f, double epsilon, std::uint64_t seed);

struct GraphBounds {
  double box2_of_fU = 0;
  double box2_limit = 0;  // 4 / F(T)
  double l2_of_fS = 0;
  double l2_limit = 0;    // 4 epsilon
  double reassembly_error = 0;
  double structured_min = 0;
  double structured_max = 0;
  double fine_min = 0;    // range of structured + small
  double fine_max = 0;
};

struct GraphDecomposition {
  EdgeFunction structured;
  EdgeFunction small;
  EdgeFunction pseudorandom;
  VertexPartition partition;       // P^(n)
  VertexPartition fine_partition;  // P^(n')
  std::size_t complexity = 0;      // T = 2n
  std::size_t coarse_index = 0;    // n
  std::size_t fine_index = 0;      // n'
  std::vector<double> energies;    // E_0, E_1, ... as far as computed
  std::string growth;
  double epsilon = 0;
  GraphBounds bounds;
};

// Requires 0 <= f <= 1. Bounds are verified before returning; a failure
// throws PostconditionViolation.
GraphDecomposition strong_regularize(const EdgeFunction& f, double epsilon,
                                     const GrowthFunction& growth, std::uint64_t seed);

struct RemovalReport {
  double delta = 0;
  double epsilon = 0;
  std::size_t T = 0;
  double C = 0;
  std::uint64_t edges_removed = 0;
  double removal_limit = 0;  // C * delta * |V|^2 / 9
  std::uint64_t triangles_before = 0;
  std::uint64_t triangles_after = 0;
  double input_triangle_density = 0;  // E_{x,y,z} G(x,y) G(y,z) G(z,x)
  double certified_density = 0;       // delta^6 / (2 * 2^(3T))
  std::size_t small_atoms = 0;
  std::size_t irregular_pairs = 0;
  std::size_t sparse_pairs = 0;
  bool removal_holds = false;
  bool certificate_holds = false;  // vacuous when the output is triangle-free
};

struct RemovalResult {
  EdgeFunction graph;
  RemovalReport report;
};

// G must be a symmetric 0/1 graph with an empty diagonal.
RemovalResult triangle_removal(const EdgeFunction& G, double delta, std::uint64_t seed);

}  // namespace addcomb
