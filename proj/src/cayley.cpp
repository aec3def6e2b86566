#include "addcomb/cayley.hpp"

#include <vector>

#include "addcomb/cyclic.hpp"
#include "addcomb/errors.hpp"

namespace addcomb {
namespace {

constexpr std::size_t kMaxVertices = 4096;

std::vector<char> membership(std::span<const std::int64_t> A, std::size_t N) {
  if (N == 0) throw InvalidArgument("cayley: modulus must be positive");
  std::vector<char> in(N, 0);
  for (std::int64_t a : A) in[static_cast<std::size_t>(mod(a, static_cast<std::int64_t>(N)))] = 1;
  return in;
}

}  // namespace

std::uint64_t ap_pair_count(std::span<const std::int64_t> A, std::size_t N, int k) {
  const std::vector<char> in = membership(A, N);
  std::uint64_t count = 0;
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t d = 0; d < N; ++d) {
      bool all = true;
      for (int j = 0; j < k && all; ++j) all = in[(a + static_cast<std::size_t>(j) * d) % N];
      if (all) ++count;
    }
  }
  return count;
}

CayleyTripartite cayley_tripartite(std::span<const std::int64_t> A, std::size_t N) {
  const std::vector<char> in = membership(A, N);
  if (3 * N > kMaxVertices) {
    throw CapacityError("cayley_tripartite: 3N = " + std::to_string(3 * N) + " exceeds " +
                        std::to_string(kMaxVertices) + " vertices");
  }
  const auto n = static_cast<std::int64_t>(N);
  auto has = [&](std::int64_t v) { return in[static_cast<std::size_t>(mod(v, n))] != 0; };
  EdgeFunction g = EdgeFunction::zeros(3 * N);
  auto link = [&](std::size_t u, std::size_t v) {
    g.set(u, v, 1.0);
    g.set(v, u, 1.0);
  };
  for (std::int64_t s = 0; s < n; ++s) {
    for (std::int64_t t = 0; t < n; ++t) {
      const auto us = static_cast<std::size_t>(s);
      const auto ut = static_cast<std::size_t>(t);
      if (has(s + 2 * t)) link(N + us, 2 * N + ut);   // (y, z)
      if (has(-s + t)) link(us, 2 * N + ut);          // (x, z)
      if (has(-2 * s - t)) link(us, N + ut);          // (x, y)
    }
  }
  CayleyTripartite out{std::move(g), 0, ap_pair_count(A, N, 3)};
  out.triangles = count_triangles(out.graph);
  if (out.triangles != static_cast<std::uint64_t>(N) * out.ap_pairs) {
    throw PostconditionViolation("cayley_tripartite: " + std::to_string(out.triangles) +
                                 " triangles but N * ap_pairs = " +
                                 std::to_string(static_cast<std::uint64_t>(N) * out.ap_pairs));
  }
  return out;
}

CayleyHypergraph cayley_3hypergraph(std::span<const std::int64_t> A, std::size_t N) {
  const std::vector<char> in = membership(A, N);
  if (N > kMaxHypergraphModulus) {
    throw CapacityError("cayley_3hypergraph: N = " + std::to_string(N) + " exceeds " +
                        std::to_string(kMaxHypergraphModulus));
  }
  const std::size_t V = 4 * N;
  const auto n = static_cast<std::int64_t>(N);
  auto has = [&](std::int64_t v) { return in[static_cast<std::size_t>(mod(v, n))] != 0; };
  std::vector<double> w(V * V * V, 0.0);
  auto put = [&](std::size_t a, std::size_t b, std::size_t c) {
    const std::size_t p[3] = {a, b, c};
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& q : perms) w[(p[q[0]] * V + p[q[1]]) * V + p[q[2]]] = 1.0;
  };
  // parts: x -> [0, N), y -> [N, 2N), z -> [2N, 3N), w -> [3N, 4N)
  for (std::int64_t s = 0; s < n; ++s) {
    for (std::int64_t t = 0; t < n; ++t) {
      for (std::int64_t u = 0; u < n; ++u) {
        const auto a = static_cast<std::size_t>(s);
        const auto b = static_cast<std::size_t>(t);
        const auto c = static_cast<std::size_t>(u);
        if (has(s + 2 * t + 3 * u)) put(N + a, 2 * N + b, 3 * N + c);   // (y, z, w)
        if (has(-s + t + 2 * u)) put(a, 2 * N + b, 3 * N + c);          // (x, z, w)
        if (has(-2 * s - t + u)) put(a, N + b, 3 * N + c);              // (x, y, w)
        if (has(-3 * s - 2 * t - u)) put(a, N + b, 2 * N + c);          // (x, y, z)
      }
    }
  }
  CayleyHypergraph out{TriFunction(V, std::move(w), true), 0, ap_pair_count(A, N, 4)};
  const TriFunction& h = out.hypergraph;
  std::uint64_t count = 0;
  for (std::size_t x = 0; x < N; ++x) {
    for (std::size_t y = N; y < 2 * N; ++y) {
      for (std::size_t z = 2 * N; z < 3 * N; ++z) {
        if (h(x, y, z) == 0) continue;
        for (std::size_t t = 3 * N; t < 4 * N; ++t) {
          if (h(y, z, t) != 0 && h(z, t, x) != 0 && h(t, x, y) != 0) ++count;
        }
      }
    }
  }
  out.tetrahedra = count;
  const std::uint64_t expected = static_cast<std::uint64_t>(N) * N * out.ap_pairs;
  if (count != expected) {
    throw PostconditionViolation("cayley_3hypergraph: " + std::to_string(count) +
                                 " tetrahedra but N^2 * ap_pairs = " + std::to_string(expected));
  }
  return out;
}

}  // namespace addcomb
