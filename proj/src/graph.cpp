#include "addcomb/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "addcomb/errors.hpp"
#include "addcomb/parallel.hpp"

namespace addcomb {
namespace {

void check_same_size(const EdgeFunction& a, const EdgeFunction& b, const char* op) {
  if (a.vertex_count() != b.vertex_count()) {
    throw InvalidArgument(std::string(op) + ": mismatched vertex counts");
  }
}

double power_of(std::size_t n, int e) { return std::pow(static_cast<double>(n), e); }

// Gram matrix G(x, x') = sum_y a(x, y) a(x', y) of a dense n x n matrix.
std::vector<double> gram(std::span<const double> a, std::size_t n) {
  std::vector<double> g(n * n, 0.0);
  parallel_for(n, [&](std::size_t x) {
    const double* rx = a.data() + x * n;
    for (std::size_t xp = 0; xp < n; ++xp) {
      const double* rxp = a.data() + xp * n;
      double acc = 0;
      for (std::size_t y = 0; y < n; ++y) acc += rx[y] * rxp[y];
      g[x * n + xp] = acc;
    }
  });
  return g;
}

}  // namespace

EdgeFunction::EdgeFunction(std::size_t vertex_count, std::vector<double> values)
    : n_(vertex_count), values_(std::move(values)) {
  if (n_ == 0) throw InvalidArgument("EdgeFunction: vertex count must be positive");
  if (values_.size() != n_ * n_) throw InvalidArgument("EdgeFunction: expected |V|^2 values");
  for (double v : values_) {
    if (!std::isfinite(v) || std::abs(v) > 1) {
      throw InvalidArgument("EdgeFunction: entries must be finite with magnitude <= 1");
    }
  }
}

EdgeFunction EdgeFunction::zeros(std::size_t vertex_count) {
  return EdgeFunction(vertex_count, std::vector<double>(vertex_count * vertex_count, 0.0));
}

EdgeFunction EdgeFunction::constant(std::size_t vertex_count, double c) {
  return EdgeFunction(vertex_count, std::vector<double>(vertex_count * vertex_count, c));
}

void EdgeFunction::set(std::size_t x, std::size_t y, double v) {
  if (x >= n_ || y >= n_) throw InvalidArgument("EdgeFunction::set: vertex out of range");
  if (!std::isfinite(v) || std::abs(v) > 1) {
    throw InvalidArgument("EdgeFunction::set: entries must be finite with magnitude <= 1");
  }
  values_[x * n_ + y] = v;
}

bool EdgeFunction::is_indicator() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0 || v == 1; });
}

bool EdgeFunction::is_symmetric() const {
  for (std::size_t x = 0; x < n_; ++x) {
    for (std::size_t y = x + 1; y < n_; ++y) {
      if ((*this)(x, y) != (*this)(y, x)) return false;
    }
  }
  return true;
}

TriFunction::TriFunction(std::size_t vertex_count, std::vector<double> values, bool hypergraph)
    : n_(vertex_count), values_(std::move(values)), hypergraph_(hypergraph) {
  if (n_ == 0) throw InvalidArgument("TriFunction: vertex count must be positive");
  if (values_.size() != n_ * n_ * n_) throw InvalidArgument("TriFunction: expected |V|^3 values");
  for (double v : values_) {
    if (!(v >= 0 && v <= 1)) throw InvalidArgument("TriFunction: entries must lie in [0, 1]");
  }
  if (hypergraph_) {
    for (std::size_t x = 0; x < n_; ++x) {
      for (std::size_t y = 0; y < n_; ++y) {
        for (std::size_t z = 0; z < n_; ++z) {
          const double v = (*this)(x, y, z);
          if (v != (*this)(y, x, z) || v != (*this)(x, z, y)) {
            throw InvalidArgument("TriFunction: hypergraph weights must be symmetric");
          }
        }
      }
    }
  }
}

VertexPartition::VertexPartition(std::vector<std::size_t> assignment) {
  if (assignment.empty()) throw InvalidArgument("VertexPartition: no vertices");
  std::unordered_map<std::size_t, std::size_t> relabel;
  cell_of_.reserve(assignment.size());
  for (std::size_t label : assignment) {
    auto [it, inserted] = relabel.emplace(label, relabel.size());
    if (inserted) sizes_.push_back(0);
    cell_of_.push_back(it->second);
    ++sizes_[it->second];
  }
}

VertexPartition VertexPartition::trivial(std::size_t vertex_count) {
  return VertexPartition(std::vector<std::size_t>(vertex_count, 0));
}

VertexPartition VertexPartition::discrete(std::size_t vertex_count) {
  std::vector<std::size_t> a(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) a[v] = v;
  return VertexPartition(std::move(a));
}

VertexPartition VertexPartition::refine(const std::vector<char>& set) const {
  if (set.size() != vertex_count()) throw InvalidArgument("VertexPartition::refine: size mismatch");
  std::vector<std::size_t> a(vertex_count());
  for (std::size_t v = 0; v < vertex_count(); ++v) a[v] = 2 * cell_of_[v] + (set[v] ? 1 : 0);
  return VertexPartition(std::move(a));
}

bool VertexPartition::refines(const VertexPartition& coarser) const {
  if (coarser.vertex_count() != vertex_count()) return false;
  std::vector<std::size_t> parent(cell_count(), SIZE_MAX);
  for (std::size_t v = 0; v < vertex_count(); ++v) {
    std::size_t& p = parent[cell_of_[v]];
    if (p == SIZE_MAX) p = coarser.cell_of(v);
    if (p != coarser.cell_of(v)) return false;
  }
  return true;
}

double box2_norm(const EdgeFunction& f) {
  const std::size_t n = f.vertex_count();
  const std::vector<double> g = gram(f.values(), n);
  std::vector<double> sq(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) sq[i] = g[i] * g[i];
  const double fourth = pairwise_sum(sq) / power_of(n, 4);
  return std::pow(std::max(fourth, 0.0), 0.25);
}

double triangle_form(const EdgeFunction& f, const EdgeFunction& g, const EdgeFunction& h) {
  check_same_size(f, g, "triangle_form");
  check_same_size(f, h, "triangle_form");
  const std::size_t n = f.vertex_count();
  // sum_x sum_z (F G)(x, z) h(z, x)
  std::vector<double> per_x(n);
  parallel_for(n, [&](std::size_t x) {
    std::vector<double> fg(n, 0.0);
    for (std::size_t y = 0; y < n; ++y) {
      const double a = f(x, y);
      if (a == 0) continue;
      const auto gy = g.row(y);
      for (std::size_t z = 0; z < n; ++z) fg[z] += a * gy[z];
    }
    double acc = 0;
    for (std::size_t z = 0; z < n; ++z) acc += fg[z] * h(z, x);
    per_x[x] = acc;
  });
  return pairwise_sum(per_x) / power_of(n, 3);
}

double box3_norm(const TriFunction& f) {
  const std::size_t n = f.vertex_count();
  std::vector<double> per_pair(n * n);
  parallel_for(n * n, [&](std::size_t idx) {
    const std::size_t x = idx / n;
    const std::size_t xp = idx % n;
    // P(y, z) = f(x, y, z) f(x', y, z); contribution sum_{y,y'} (sum_z P(y,z) P(y',z))^2
    std::vector<double> p(n * n);
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) p[y * n + z] = f(x, y, z) * f(xp, y, z);
    }
    double acc = 0;
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t yp = 0; yp < n; ++yp) {
        double inner = 0;
        for (std::size_t z = 0; z < n; ++z) inner += p[y * n + z] * p[yp * n + z];
        acc += inner * inner;
      }
    }
    per_pair[idx] = acc;
  });
  const double eighth = pairwise_sum(per_pair) / power_of(n, 6);
  return std::pow(std::max(eighth, 0.0), 0.125);
}

EdgeFunction conditional_expectation(const EdgeFunction& f, const VertexPartition& p) {
  const std::size_t n = f.vertex_count();
  if (p.vertex_count() != n) throw InvalidArgument("conditional_expectation: size mismatch");
  const std::size_t k = p.cell_count();
  std::vector<double> sums(k * k, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t a = p.cell_of(x);
    for (std::size_t y = 0; y < n; ++y) sums[a * k + p.cell_of(y)] += f(x, y);
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      sums[a * k + b] /= static_cast<double>(p.cell_size(a)) * static_cast<double>(p.cell_size(b));
      sums[a * k + b] = std::clamp(sums[a * k + b], -1.0, 1.0);
    }
  }
  std::vector<double> out(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) out[x * n + y] = sums[p.cell_of(x) * k + p.cell_of(y)];
  }
  return EdgeFunction(n, std::move(out));
}

double l2_norm(const EdgeFunction& f) {
  std::vector<double> sq(f.values().size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = f.values()[i] * f.values()[i];
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(sq.size()));
}

double energy(const EdgeFunction& f, const VertexPartition& p) {
  const double norm = l2_norm(conditional_expectation(f, p));
  return norm * norm;
}

std::uint64_t count_triangles(const EdgeFunction& g) {
  if (!g.is_indicator()) throw InvalidArgument("count_triangles: graph must be 0/1");
  const std::size_t n = g.vertex_count();
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> bits(n * words, 0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x != y && g(x, y) != 0) bits[x * words + y / 64] |= std::uint64_t{1} << (y % 64);
    }
  }
  std::vector<std::uint64_t> per_x(n, 0);
  parallel_for(n, [&](std::size_t x) {
    std::uint64_t acc = 0;
    const std::uint64_t* rx = bits.data() + x * words;
    for (std::size_t y = x + 1; y < n; ++y) {
      if (!((rx[y / 64] >> (y % 64)) & 1)) continue;
      const std::uint64_t* ry = bits.data() + y * words;
      // count z > y adjacent to both
      const std::size_t start = (y + 1) / 64;
      for (std::size_t w = start; w < words; ++w) {
        std::uint64_t common = rx[w] & ry[w];
        if (w == start) common &= ~std::uint64_t{0} << ((y + 1) % 64);
        acc += static_cast<std::uint64_t>(std::popcount(common));
      }
    }
    per_x[x] = acc;
  });
  std::uint64_t total = 0;
  for (std::uint64_t c : per_x) total += c;
  return total;
}

std::uint64_t count_edges(const EdgeFunction& g) {
  std::uint64_t edges = 0;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    for (std::size_t y = x + 1; y < g.vertex_count(); ++y) {
      if (g(x, y) != 0) ++edges;
    }
  }
  return edges;
}

EdgeFunction read_edge_list(std::istream& in, std::optional<std::size_t> vertex_count) {
  struct Edge {
    std::size_t u, v;
    double w;
  };
  std::vector<Edge> edges;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long u = 0, v = 0;
    if (!(fields >> u)) continue;
    if (!(fields >> v) || u < 0 || v < 0) {
      throw InvalidArgument("edge list line " + std::to_string(line_no) + ": expected `u v [weight]`");
    }
    double w = 1.0;
    if (!(fields >> w)) w = 1.0;
    std::string extra;
    if (fields.clear(), fields >> extra) {
      throw InvalidArgument("edge list line " + std::to_string(line_no) + ": trailing fields");
    }
    edges.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v), w});
    max_index = std::max({max_index, static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
  }
  const std::size_t n = vertex_count.value_or(edges.empty() ? 1 : max_index + 1);
  EdgeFunction g = EdgeFunction::zeros(n);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) throw InvalidArgument("edge list: vertex index out of range");
    g.set(e.u, e.v, e.w);
    g.set(e.v, e.u, e.w);
  }
  return g;
}

void write_edge_list(std::ostream& out, const EdgeFunction& g) {
  const bool plain = g.is_indicator();
  out.precision(17);
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    for (std::size_t y = x; y < g.vertex_count(); ++y) {
      const double w = g(x, y);
      if (w == 0) continue;
      out << x << ' ' << y;
      if (!plain) out << ' ' << w;
      out << '\n';
    }
  }
}

void write_partition_csv(std::ostream& out, const VertexPartition& p) {
  out << "vertex,cell\n";
  for (std::size_t v = 0; v < p.vertex_count(); ++v) out << v << ',' << p.cell_of(v) << '\n';
}

}  // namespace addcomb
