#pragma once

#include <cstdint>
#include <span>

#include "addcomb/graph.hpp"

namespace addcomb {

// #{(a, d) in (Z/NZ)^2 : a + j d in A for j = 0..k-1}, by exhaustive search.
std::uint64_t ap_pair_count(std::span<const std::int64_t> A, std::size_t N, int k);

struct CayleyTripartite {
  EdgeFunction graph;         // 3N vertices: x in [0,N), y in [N,2N), z in [2N,3N)
  std::uint64_t triangles;    // counted on the graph
  std::uint64_t ap_pairs;     // exhaustive (a, d) count
};

// Edges: (y, z) with y + 2z in A, (x, z) with -x + z in A, (x, y) with
// -2x - y in A. Throws PostconditionViolation unless triangles = N * ap_pairs.
CayleyTripartite cayley_tripartite(std::span<const std::int64_t> A, std::size_t N);

struct CayleyHypergraph {
  TriFunction hypergraph;     // 4N vertices in parts x, y, z, w
  std::uint64_t tetrahedra;   // counted on the hypergraph
  std::uint64_t ap_pairs;     // exhaustive 4-AP (a, d) count
};

inline constexpr std::size_t kMaxHypergraphModulus = 48;

// Hyperedges: (y,z,w) with y+2z+3w in A, (x,z,w) with -x+z+2w in A,
// (x,y,w) with -2x-y+w in A, (x,y,z) with -3x-2y-z in A. Throws
// PostconditionViolation unless tetrahedra = N^2 * ap_pairs.
CayleyHypergraph cayley_3hypergraph(std::span<const std::int64_t> A, std::size_t N);

}  // namespace addcomb
