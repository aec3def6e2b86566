#include <gtest/gtest.h>

#include <sstream>

#include "addcomb/cayley.hpp"
#include "addcomb/errors.hpp"
#include "addcomb/graph.hpp"
#include "addcomb/regularity.hpp"
#include "oracles.hpp"

using namespace addcomb;

namespace {

double triangle_form_raw(const EdgeFunction& f, const EdgeFunction& g, const EdgeFunction& h) {
  const std::size_t n = f.vertex_count();
  double acc = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) acc += f(x, y) * g(y, z) * h(z, x);
  return acc / std::pow(static_cast<double>(n), 3);
}

double box3_eighth_raw(const TriFunction& f) {
  const std::size_t n = f.vertex_count();
  double acc = 0;
  for (std::size_t x0 = 0; x0 < n; ++x0)
    for (std::size_t x1 = 0; x1 < n; ++x1)
      for (std::size_t y0 = 0; y0 < n; ++y0)
        for (std::size_t y1 = 0; y1 < n; ++y1)
          for (std::size_t z0 = 0; z0 < n; ++z0)
            for (std::size_t z1 = 0; z1 < n; ++z1) {
              acc += f(x0, y0, z0) * f(x0, y0, z1) * f(x0, y1, z0) * f(x0, y1, z1) * f(x1, y0, z0) *
                     f(x1, y0, z1) * f(x1, y1, z0) * f(x1, y1, z1);
            }
  return acc / std::pow(static_cast<double>(n), 6);
}

std::uint64_t triangles_raw(const EdgeFunction& g) {
  const std::size_t n = g.vertex_count();
  std::uint64_t count = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      for (std::size_t z = y + 1; z < n; ++z) count += g(x, y) > 0 && g(y, z) > 0 && g(z, x) > 0;
  return count;
}

// Four planted blocks of size n/4; density 0.8 inside matching blocks, 0.2 across.
EdgeFunction planted_blocks(std::size_t n, Rng& rng, std::vector<std::size_t>* labels) {
  auto g = EdgeFunction::zeros(n);
  std::vector<std::size_t> cell(n);
  for (std::size_t v = 0; v < n; ++v) cell[v] = v * 4 / n;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (rng.bernoulli(cell[x] == cell[y] ? 0.8 : 0.2)) {
        g.set(x, y, 1);
        g.set(y, x, 1);
      }
  if (labels) *labels = cell;
  return g;
}

EdgeFunction random_bipartite(std::size_t n, double p, Rng& rng) {
  auto g = EdgeFunction::zeros(n);
  for (std::size_t x = 0; x < n / 2; ++x)
    for (std::size_t y = n / 2; y < n; ++y)
      if (rng.bernoulli(p)) {
        g.set(x, y, 1);
        g.set(y, x, 1);
      }
  return g;
}

}  // namespace

TEST(Box2, Examples) {
  EXPECT_NEAR(box2_norm(EdgeFunction::constant(12, 1.0)), 1.0, 1e-12);
  auto f = EdgeFunction::zeros(20);
  for (std::size_t x = 0; x < 10; ++x)
    for (std::size_t y = 5; y < 15; ++y) f.set(x, y, 1);
  EXPECT_NEAR(box2_norm(f), 0.5, 1e-12);
}

TEST(Box2, MatchesQuadrupleOracle) {
  Rng rng(51);
  for (std::size_t n : {1u, 5u, 17u, 30u}) {
    const EdgeFunction f = oracle::random_edge(n, rng, true);
    EXPECT_NEAR(std::pow(box2_norm(f), 4), oracle::box2_fourth_raw(f), 1e-9) << n;
  }
}

TEST(TriangleForm, MatchesOracleAndGvn) {
  Rng rng(52);
  EXPECT_NEAR(triangle_form(EdgeFunction::constant(9, 1), EdgeFunction::constant(9, 1),
                            EdgeFunction::constant(9, 1)),
              1.0, 1e-12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.next() % 24;
    const EdgeFunction f = oracle::random_edge(n, rng, false);
    const EdgeFunction g = oracle::random_edge(n, rng, false);
    const EdgeFunction h = oracle::random_edge(n, rng, false);
    const double t = triangle_form(f, g, h);
    if (trial < 20) EXPECT_NEAR(t, triangle_form_raw(f, g, h), 1e-12);
    const double bound = std::min({box2_norm(f), box2_norm(g), box2_norm(h)});
    EXPECT_LE(std::abs(t), bound + 1e-9);
  }
}

TEST(Box3, Examples) {
  EXPECT_NEAR(box3_norm(TriFunction(6, std::vector<double>(216, 1.0))), 1.0, 1e-12);
  EXPECT_NEAR(box3_norm(TriFunction(6, std::vector<double>(216, 0.3))), 0.3, 1e-12);
}

TEST(Box3, MatchesSextupleOracle) {
  Rng rng(53);
  std::vector<double> v(1000);
  for (double& x : v) x = rng.bernoulli(0.5) ? 1.0 : 0.0;
  const TriFunction f(10, v);
  EXPECT_NEAR(std::pow(box3_norm(f), 8), box3_eighth_raw(f), 1e-9);
}

TEST(Partition, RefineAndRelabel) {
  const VertexPartition p({5, 5, 2, 2, 7});
  EXPECT_EQ(p.cell_count(), 3u);
  EXPECT_EQ(p.cell_of(0), 0u);
  EXPECT_EQ(p.cell_of(2), 1u);
  const VertexPartition q = p.refine({1, 0, 1, 0, 1});
  EXPECT_EQ(q.cell_count(), 5u);
  EXPECT_TRUE(q.refines(p));
  EXPECT_FALSE(p.refines(q));
  EXPECT_TRUE(p.refines(VertexPartition::trivial(5)));
  EXPECT_TRUE(VertexPartition::discrete(5).refines(p));
}

TEST(ConditionalExpectation, AveragesCellPairs) {
  Rng rng(54);
  const std::size_t n = 23;
  const EdgeFunction f = oracle::random_edge(n, rng, false);
  std::vector<std::size_t> labels(n);
  for (auto& c : labels) c = rng.next() % 4;
  const VertexPartition p(labels);
  const EdgeFunction e = conditional_expectation(f, p);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      double sum = 0;
      std::size_t count = 0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (p.cell_of(a) == p.cell_of(x) && p.cell_of(b) == p.cell_of(y)) {
            sum += f(a, b);
            ++count;
          }
      EXPECT_NEAR(e(x, y), sum / static_cast<double>(count), 1e-12);
    }
  EXPECT_NEAR(energy(f, p), std::pow(l2_norm(e), 2), 1e-12);
}

TEST(Energy, MonotoneUnderRefinement) {
  Rng rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 10 + rng.next() % 30;
    const EdgeFunction f = oracle::random_edge(n, rng, false);
    VertexPartition p = VertexPartition::trivial(n);
    double last = energy(f, p);
    for (int step = 0; step < 5; ++step) {
      std::vector<char> set(n);
      for (auto& c : set) c = rng.bernoulli(0.5);
      p = p.refine(set);
      const double now = energy(f, p);
      EXPECT_GE(now, last - 1e-9);
      last = now;
    }
  }
}

TEST(Counting, TrianglesAndEdges) {
  Rng rng(56);
  for (int trial = 0; trial < 10; ++trial) {
    const EdgeFunction g = oracle::random_graph(5 + rng.next() % 70, 0.3, rng);
    EXPECT_EQ(count_triangles(g), triangles_raw(g));
  }
  const std::size_t n = 30;
  auto complete = EdgeFunction::constant(n, 1.0);
  for (std::size_t x = 0; x < n; ++x) complete.set(x, x, 0);
  EXPECT_EQ(count_triangles(complete), 4060u);
  EXPECT_EQ(count_edges(complete), 435u);
}

TEST(GraphIo, EdgeListRoundTrip) {
  std::stringstream in("# demo\n0 1\n1 2 0.5\n\n3 0\n");
  const EdgeFunction g = read_edge_list(in);
  EXPECT_EQ(g.vertex_count(), 4u);
  EXPECT_EQ(g(1, 0), 1.0);
  EXPECT_EQ(g(2, 1), 0.5);
  EXPECT_EQ(g(0, 3), 1.0);
  std::stringstream out;
  write_edge_list(out, g);
  const EdgeFunction h = read_edge_list(out, 4);
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y) EXPECT_EQ(g(x, y), h(x, y));
  std::stringstream bad("0 x\n");
  EXPECT_THROW(read_edge_list(bad), InvalidArgument);
}

TEST(GraphIo, PartitionCsv) {
  std::stringstream out;
  write_partition_csv(out, VertexPartition({1, 0, 1}));
  EXPECT_EQ(out.str(), "vertex,cell\n0,0\n1,1\n2,0\n");
}

TEST(Dichotomy, PlantedProduct) {
  const std::size_t n = 40;
  auto f = EdgeFunction::zeros(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) f.set(x, y, (x < 20 ? 0.5 : -0.5) * (y % 2 == 0 ? 1.0 : -1.0));
  const double eta = box2_norm(f) * 0.99;
  const DichotomyResult r = box_dichotomy(f, eta, 7);
  double direct = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) direct += f(x, y) * r.A[x] * r.B[y];
  direct /= static_cast<double>(n * n);
  EXPECT_NEAR(direct, r.correlation, 1e-12);
  EXPECT_GE(std::abs(direct), std::pow(eta, 4) / 4);
}

TEST(Dichotomy, ZeroNormRejected) {
  EXPECT_THROW(box_dichotomy(EdgeFunction::zeros(10), 0.1, 1), ContractViolation);
}

TEST(Dichotomy, RandomSigns) {
  Rng rng(57);
  for (int trial = 0; trial < 10; ++trial) {
    const EdgeFunction f = oracle::random_edge(40, rng, true);
    const double eta = box2_norm(f) * (1 - 1e-9);
    ASSERT_GE(eta, 0.1);
    const DichotomyResult r = box_dichotomy(f, eta, 100 + static_cast<std::uint64_t>(trial));
    double direct = 0;
    for (std::size_t x = 0; x < 40; ++x)
      for (std::size_t y = 0; y < 40; ++y) direct += f(x, y) * r.A[x] * r.B[y];
    EXPECT_GE(std::abs(direct / 1600), std::pow(eta, 4) / 4);
  }
}

TEST(WeakRegularity, ConstantTerminatesImmediately) {
  const WeakRegularity w = weak_regularize(EdgeFunction::constant(16, 0.5), 0.2, 1);
  EXPECT_EQ(w.iterations, 0u);
  EXPECT_EQ(w.partition.cell_count(), 1u);
}

TEST(WeakRegularity, PlantedBlocksAndRandom) {
  Rng rng(58);
  std::vector<std::size_t> labels;
  const EdgeFunction g = planted_blocks(64, rng, &labels);
  const WeakRegularity w = weak_regularize(g, 0.2, 3);
  EXPECT_LE(box2_norm(w.pseudorandom), 0.2);
  EXPECT_LE(2.0 * static_cast<double>(w.iterations), 32 / std::pow(0.2, 8));
  const EdgeFunction expected = conditional_expectation(g, w.partition);
  for (std::size_t i = 0; i < g.values().size(); ++i) {
    EXPECT_NEAR(w.structured.values()[i], expected.values()[i], 1e-12);
    EXPECT_NEAR(w.structured.values()[i] + w.pseudorandom.values()[i], g.values()[i], 1e-12);
  }
  for (std::size_t i = 1; i < w.energies.size(); ++i) EXPECT_GE(w.energies[i], w.energies[i - 1] - 1e-9);

  const EdgeFunction r = oracle::random_graph(64, 0.5, rng);
  const WeakRegularity wr = weak_regularize(r, 0.25, 4);
  EXPECT_LE(box2_norm(wr.pseudorandom), 0.25);
}

TEST(StrongRegularity, ConstantHasZeroComplexity) {
  const GraphDecomposition d = strong_regularize(EdgeFunction::constant(16, 0.5), 0.2,
                                                 GrowthFunction::parse("affine:4"), 1);
  EXPECT_EQ(d.complexity, 0u);
  for (double v : d.small.values()) EXPECT_NEAR(v, 0, 1e-12);
  for (double v : d.pseudorandom.values()) EXPECT_NEAR(v, 0, 1e-12);
}

TEST(StrongRegularity, PlantedBlocksBoundsAndMeans) {
  Rng rng(59);
  std::vector<std::size_t> labels;
  const EdgeFunction g = planted_blocks(128, rng, &labels);
  const GraphDecomposition d = strong_regularize(g, 0.2, GrowthFunction::parse("affine:4"), 5);
  const GraphBounds& b = d.bounds;
  EXPECT_LE(b.box2_of_fU, b.box2_limit + 1e-9);
  EXPECT_NEAR(box2_norm(d.pseudorandom), b.box2_of_fU, 1e-9);
  EXPECT_LE(l2_norm(d.small), 0.8 + 1e-9);
  for (std::size_t i = 0; i < g.values().size(); ++i) {
    EXPECT_NEAR(d.structured.values()[i] + d.small.values()[i] + d.pseudorandom.values()[i], g.values()[i],
                1e-9);
  }
  for (std::size_t i = 1; i < d.energies.size(); ++i) EXPECT_GE(d.energies[i], d.energies[i - 1] - 1e-9);
  // The structured part tracks the planted block densities on average.
  const VertexPartition blocks(labels);
  const EdgeFunction truth = conditional_expectation(g, blocks);
  const EdgeFunction coarse = conditional_expectation(d.structured, blocks);
  double err = 0;
  for (std::size_t i = 0; i < truth.values().size(); ++i) err = std::max(err, std::abs(truth.values()[i] - coarse.values()[i]));
  EXPECT_LE(err, 0.05);
}

TEST(StrongRegularity, RandomGraphExponentialGrowth) {
  Rng rng(60);
  const EdgeFunction g = oracle::random_graph(128, 0.5, rng);
  const GraphDecomposition d = strong_regularize(g, 0.2, GrowthFunction::parse("exp:2"), 6);
  EXPECT_LE(d.bounds.box2_of_fU, d.bounds.box2_limit + 1e-9);
  EXPECT_LE(d.bounds.l2_of_fS, d.bounds.l2_limit + 1e-9);
}

TEST(Cayley, TripartiteExamples) {
  EXPECT_EQ(cayley_tripartite({}, 7).triangles, 0u);
  const std::vector<std::int64_t> all{0, 1, 2, 3, 4};
  EXPECT_EQ(cayley_tripartite(all, 5).triangles, 125u);
  const std::vector<std::int64_t> A{1, 2, 4};
  const CayleyTripartite c = cayley_tripartite(A, 7);
  EXPECT_EQ(c.triangles, 7 * oracle::ap_pairs(A, 7, 3));
  EXPECT_EQ(count_triangles(c.graph), c.triangles);
}

TEST(Cayley, TripartiteRandom) {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t N = 2 + rng.next() % 59;
    std::vector<std::int64_t> A;
    for (std::size_t a = 0; a < N; ++a)
      if (rng.bernoulli(0.4)) A.push_back(static_cast<std::int64_t>(a));
    const CayleyTripartite c = cayley_tripartite(A, N);
    EXPECT_EQ(count_triangles(c.graph), N * oracle::ap_pairs(A, N, 3));
  }
}

TEST(Cayley, HypergraphExamples) {
  EXPECT_EQ(cayley_3hypergraph({}, 5).tetrahedra, 0u);
  const std::vector<std::int64_t> all{0, 1, 2, 3, 4};
  EXPECT_EQ(cayley_3hypergraph(all, 5).tetrahedra, 625u);
  const std::vector<std::int64_t> A{0, 1, 2, 3};
  const CayleyHypergraph h = cayley_3hypergraph(A, 11);
  EXPECT_EQ(h.tetrahedra, 121 * oracle::ap_pairs(A, 11, 4));
  EXPECT_TRUE(h.hypergraph.hypergraph());
  EXPECT_THROW(cayley_3hypergraph(A, kMaxHypergraphModulus + 1), CapacityError);
}

TEST(Removal, TriangleFreeInputStaysTriangleFree) {
  Rng rng(62);
  const EdgeFunction g = random_bipartite(60, 0.5, rng);
  const RemovalResult r = triangle_removal(g, 0.1, 1);
  EXPECT_EQ(count_triangles(r.graph), 0u);
  EXPECT_LE(static_cast<double>(r.report.edges_removed), r.report.removal_limit);
  EXPECT_EQ(count_edges(g) - count_edges(r.graph), r.report.edges_removed);
  for (std::size_t i = 0; i < g.values().size(); ++i) EXPECT_LE(r.graph.values()[i], g.values()[i]);
}

TEST(Removal, CayleyReportConsistent) {
  // {0, 1, 3, 9, 27} has no nontrivial 3-term progressions in Z/60Z.
  const std::vector<std::int64_t> A{1, 3, 9, 27};
  const CayleyTripartite c = cayley_tripartite(A, 60);
  const RemovalResult r = triangle_removal(c.graph, 0.1, 2);
  EXPECT_EQ(r.report.triangles_before, c.triangles);
  EXPECT_EQ(r.report.triangles_after, count_triangles(r.graph));
  EXPECT_LE(static_cast<double>(r.report.edges_removed), r.report.removal_limit);
  EXPECT_LE(r.report.C, 300.0);
  for (std::size_t i = 0; i < c.graph.values().size(); ++i) EXPECT_LE(r.graph.values()[i], c.graph.values()[i]);
}

TEST(Removal, CompleteGraphCertifiesDensity) {
  const std::size_t n = 30;
  auto g = EdgeFunction::constant(n, 1.0);
  for (std::size_t x = 0; x < n; ++x) g.set(x, x, 0);
  const RemovalResult r = triangle_removal(g, 0.1, 3);
  EXPECT_GT(r.report.triangles_after, 0u);
  EXPECT_TRUE(r.report.certificate_holds);
  EXPECT_GE(r.report.input_triangle_density, r.report.certified_density);
  EXPECT_NEAR(r.report.input_triangle_density, 6.0 * 4060 / 27000, 1e-12);
}
