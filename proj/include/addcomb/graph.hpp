#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace addcomb {

// f: V x V -> [-1, 1], stored densely in row-major order.
class EdgeFunction {
 public:
  EdgeFunction(std::size_t vertex_count, std::vector<double> values);

  static EdgeFunction zeros(std::size_t vertex_count);
  static EdgeFunction constant(std::size_t vertex_count, double c);

  std::size_t vertex_count() const noexcept { return n_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> row(std::size_t x) const { return {values_.data() + x * n_, n_}; }
  double operator()(std::size_t x, std::size_t y) const { return values_[x * n_ + y]; }
  void set(std::size_t x, std::size_t y, double v);

  bool is_indicator() const;
  bool is_symmetric() const;

 private:
  std::size_t n_;
  std::vector<double> values_;
};

// f: V^3 -> [0, 1]. With the hypergraph flag set, f must be invariant under
// every permutation of its coordinates.
class TriFunction {
 public:
  TriFunction(std::size_t vertex_count, std::vector<double> values, bool hypergraph = false);

  std::size_t vertex_count() const noexcept { return n_; }
  bool hypergraph() const noexcept { return hypergraph_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator()(std::size_t x, std::size_t y, std::size_t z) const {
    return values_[(x * n_ + y) * n_ + z];
  }

 private:
  std::size_t n_;
  std::vector<double> values_;
  bool hypergraph_;
};

// A finite partition of V. Cell ids are 0..cell_count-1, numbered in order of
// first appearance when scanning vertices 0, 1, 2, ...
class VertexPartition {
 public:
  explicit VertexPartition(std::vector<std::size_t> assignment);

  static VertexPartition trivial(std::size_t vertex_count);
  static VertexPartition discrete(std::size_t vertex_count);

  std::size_t vertex_count() const noexcept { return cell_of_.size(); }
  std::size_t cell_count() const noexcept { return sizes_.size(); }
  std::size_t cell_of(std::size_t v) const { return cell_of_[v]; }
  std::size_t cell_size(std::size_t c) const { return sizes_[c]; }
  std::span<const std::size_t> assignment() const noexcept { return cell_of_; }

  // Common refinement with {S, V \ S}.
  VertexPartition refine(const std::vector<char>& set) const;
  // True when every cell of *this lies inside a cell of coarser.
  bool refines(const VertexPartition& coarser) const;

 private:
  std::vector<std::size_t> cell_of_;
  std::vector<std::size_t> sizes_;
};

// ||f||_{Box^2} via the Gram matrix of the rows, O(|V|^3).
double box2_norm(const EdgeFunction& f);

// E_{x,y,z} f(x,y) g(y,z) h(z,x), O(|V|^3).
double triangle_form(const EdgeFunction& f, const EdgeFunction& g, const EdgeFunction& h);

// ||f||_{Box^3}: for each (x, x') a Gram contraction over (y, y'), O(|V|^5).
double box3_norm(const TriFunction& f);

// E(f | P (x) P): constant on each cell pair, equal to the cell-pair mean.
EdgeFunction conditional_expectation(const EdgeFunction& f, const VertexPartition& p);

// ||E(f | P (x) P)||_{L^2}^2.
double energy(const EdgeFunction& f, const VertexPartition& p);

double l2_norm(const EdgeFunction& f);

// Unordered triangles {x, y, z} of a symmetric 0/1 graph, via bitset rows.
std::uint64_t count_triangles(const EdgeFunction& g);

// Number of undirected edges {x, y}, x != y, of a symmetric 0/1 graph.
std::uint64_t count_edges(const EdgeFunction& g);

// Edge list: one `u v [weight]` per line, zero-indexed, `#` starts a comment.
// Edges are symmetric; a missing weight means 1. vertex_count defaults to
// the largest index + 1.
EdgeFunction read_edge_list(std::istream& in, std::optional<std::size_t> vertex_count = {});
void write_edge_list(std::ostream& out, const EdgeFunction& g);

// CSV `vertex,cell`.
void write_partition_csv(std::ostream& out, const VertexPartition& p);

}  // namespace addcomb
