#include "addcomb/cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "addcomb/cayley.hpp"
#include "addcomb/cyclic.hpp"
#include "addcomb/errors.hpp"
#include "addcomb/fourier_structure.hpp"
#include "addcomb/generators.hpp"
#include "addcomb/gowers.hpp"
#include "addcomb/graph.hpp"
#include "addcomb/growth.hpp"
#include "addcomb/parallel.hpp"
#include "addcomb/primes.hpp"
#include "addcomb/regularity.hpp"

namespace addcomb::cli {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

template <typename T>
void echo_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

class Session {
 public:
  explicit Session(const RunConfig& config) : cfg_(config) { report_.config = config.echo(); }

  RunReport finish() && { return std::move(report_); }

  void result(json j) {
    json tagged{{"type", "result"}};
    for (auto& [key, value] : j.items()) tagged[key] = value;
    report_.results.push_back(std::move(tagged));
  }

  void at_most(std::string name, double lhs, double rhs) {
    report_.ledger.push_back({std::move(name), lhs, "<=", rhs, lhs <= rhs});
  }
  void at_least(std::string name, double lhs, double rhs) {
    report_.ledger.push_back({std::move(name), lhs, ">=", rhs, lhs >= rhs});
  }
  void equal(std::string name, double lhs, double rhs) {
    report_.ledger.push_back({std::move(name), lhs, "==", rhs, lhs == rhs});
  }

  template <typename F>
  auto timed(const std::string& label, F&& body) {
    const auto start = Clock::now();
    auto value = body();
    if (cfg_.timings) {
      report_.timings.emplace_back(label, std::chrono::duration<double>(Clock::now() - start).count());
    }
    return value;
  }

  void artifact(const std::string& path) { report_.artifacts.push_back(path); }
  void raw(std::string text) { report_.raw_output = std::move(text); }

 private:
  const RunConfig& cfg_;
  RunReport report_;
};

GeneratorSpec generator(const RunConfig& cfg) {
  return GeneratorSpec::parse(cfg.gen).with_default_seed(cfg.seed);
}

CyclicFunction load_function(const RunConfig& cfg) {
  if (!cfg.function_file.empty()) {
    std::ifstream in(cfg.function_file);
    if (!in) throw InvalidArgument("cannot open function file " + cfg.function_file);
    return read_function_csv(in);
  }
  if (cfg.gen.empty()) throw InvalidArgument("need --gen or --function-file");
  if (!cfg.N) throw InvalidArgument("--gen needs --N");
  return generate_function(generator(cfg), *cfg.N);
}

std::vector<std::int64_t> read_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open set file " + path);
  std::vector<std::int64_t> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long v = 0;
    while (fields >> v) out.push_back(v);
    if (!fields.eof()) throw InvalidArgument("set file " + path + ": non-integer token");
  }
  return out;
}

std::vector<std::int64_t> load_set(const RunConfig& cfg, std::size_t length) {
  if (!cfg.set_file.empty()) return read_set_file(cfg.set_file);
  if (cfg.gen.empty()) throw InvalidArgument("need --gen or --set-file");
  return generate_set(generator(cfg), length);
}

bool bounded(const CyclicFunction& f) { return f.max_abs() <= 1 + 1e-12; }

std::string write_artifact(Session& s, const RunConfig& cfg, const std::string& name,
                           const CyclicFunction& f) {
  const std::filesystem::path path = std::filesystem::path(cfg.artifacts) / name;
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write artifact " + path.string());
  write_csv(out, f);
  s.artifact(path.string());
  return path.string();
}

void run_norms(Session& s, const RunConfig& cfg) {
  if (!cfg.graph_file.empty()) {
    std::ifstream in(cfg.graph_file);
    if (!in) throw InvalidArgument("cannot open graph file " + cfg.graph_file);
    const EdgeFunction g = read_edge_list(in, cfg.N);
    const double v = s.timed("box2", [&] { return box2_norm(g); });
    s.result({{"object", "graph"}, {"vertices", g.vertex_count()}, {"box2", v}});
    s.at_most("box2 <= 1", v, 1.0);
    return;
  }
  if (cfg.cayley3) {
    if (!cfg.N) throw InvalidArgument("--cayley3 needs --N");
    const auto A = load_set(cfg, *cfg.N);
    const CayleyHypergraph h = s.timed("cayley3", [&] { return cayley_3hypergraph(A, *cfg.N); });
    const double v = s.timed("box3", [&] { return box3_norm(h.hypergraph); });
    s.result({{"object", "cayley_3hypergraph"},
              {"N", *cfg.N},
              {"box3", v},
              {"tetrahedra", h.tetrahedra},
              {"ap4_pairs", h.ap_pairs}});
    s.equal("tetrahedra == N^2 * ap4_pairs", static_cast<double>(h.tetrahedra),
            static_cast<double>(*cfg.N) * static_cast<double>(*cfg.N) * static_cast<double>(h.ap_pairs));
    s.at_most("box3 <= 1", v, 1.0);
    return;
  }

  const CyclicFunction f = load_function(cfg);
  const std::string kind = cfg.kind.empty() ? "all" : cfg.kind;
  const std::string method = cfg.method.empty() ? "both" : cfg.method;
  if (kind != "u2" && kind != "u3" && kind != "all") throw InvalidArgument("--kind must be u2, u3 or all");
  if (method != "direct" && method != "spectral" && method != "both") {
    throw InvalidArgument("--method must be direct, spectral or both");
  }
  auto emit = [&](const NormReport& r) {
    json j{{"norm_kind", to_string(r.kind)}, {"value", r.value}, {"modulus", r.modulus}};
    if (cfg.timings) j["elapsed"] = r.elapsed.count();
    s.result(j);
  };
  std::optional<double> u2s, u2d, u3;
  if (kind != "u3") {
    if (method != "direct") {
      const NormReport r = u2_norm(f, U2Method::Spectral);
      u2s = r.value;
      emit(r);
    }
    if (method != "spectral") {
      const NormReport r = u2_norm(f, U2Method::Direct);
      u2d = r.value;
      emit(r);
    }
  }
  if (kind != "u2") {
    const NormReport r = u3_norm(f);
    u3 = r.value;
    emit(r);
  }
  if (u2s && u2d) {
    s.at_most("|u2_direct - u2_spectral| <= 1e-8 * max(1, u2)", std::abs(*u2d - *u2s),
              1e-8 * std::max(1.0, *u2s));
  }
  if (bounded(f)) {
    const std::optional<double> u2 = u2s ? u2s : u2d;
    if (u2) s.at_most("u2 <= 1", *u2, 1.0 + 1e-9);
    if (u3) s.at_most("u3 <= 1", *u3, 1.0 + 1e-9);
    if (u2 && u3) s.at_most("u2 <= u3 + 1e-9", *u2, *u3 + 1e-9);
  }
}

void run_count_aps(Session& s, const RunConfig& cfg) {
  const int k = cfg.k.value_or(3);
  if (k != 3 && k != 4) throw InvalidArgument("--k must be 3 or 4");
  const std::string method = cfg.method.empty() ? (k == 3 ? "both" : "naive") : cfg.method;
  if (method != "naive" && method != "spectral" && method != "both") {
    throw InvalidArgument("--method must be naive, spectral or both");
  }
  const CyclicFunction f = load_function(cfg);
  std::vector<CyclicFunction> ops(static_cast<std::size_t>(k), f);
  std::optional<Complex> naive, spectral;
  auto emit = [&](CountMethod m) {
    const CountingFormResult r =
        s.timed("lambda_" + to_string(m), [&] { return ap_form(ops, m); });
    s.result({{"k", k}, {"method", to_string(m)}, {"re", r.value.real()}, {"im", r.value.imag()},
              {"modulus", r.modulus}});
    return r.value;
  };
  if (method != "spectral") naive = emit(CountMethod::Naive);
  if (method != "naive") spectral = emit(CountMethod::Spectral);
  if (naive && spectral) {
    s.at_most("|naive - spectral| <= 1e-8 * max(1, |naive|)", std::abs(*naive - *spectral),
              1e-8 * std::max(1.0, std::abs(*naive)));
  }
  if (bounded(f)) {
    const GvnReport g = s.timed("gvn", [&] { return verify_gvn(ops); });
    s.at_most("|Lambda_k| <= min ||f||_U(k-1) + 1e-9", g.lhs, g.rhs + 1e-9);
  }
}

void run_decompose(Session& s, const RunConfig& cfg) {
  const std::string mode = cfg.mode.empty() ? "strong" : cfg.mode;
  const CyclicFunction f = load_function(cfg);
  if (mode == "weak") {
    const double lambda = cfg.lambda.value_or(0.3);
    const WeakDecomposition d = s.timed("weak", [&] { return weak_decompose(f, lambda); });
    const double err = l2_norm(sub(add(d.structured, d.pseudorandom), f));
    json j{{"mode", "weak"}, {"lambda", lambda}, {"phase_count", d.phase_count},
           {"u2_of_pseudorandom", d.u2_of_pseudorandom}};
    if (!cfg.artifacts.empty()) {
      j["structured_csv"] = write_artifact(s, cfg, "structured.csv", d.structured);
      j["pseudorandom_csv"] = write_artifact(s, cfg, "pseudorandom.csv", d.pseudorandom);
    }
    s.result(j);
    s.at_most("||f_U||_U2 <= lambda", d.u2_of_pseudorandom, lambda + 1e-9);
    s.at_most("phase_count <= lambda^-4", static_cast<double>(d.phase_count), std::pow(lambda, -4));
    s.at_most("reassembly L2 error <= 1e-9", err, 1e-9);
    return;
  }
  const GrowthFunction growth = GrowthFunction::parse(cfg.growth.empty() ? "exp:2" : cfg.growth);
  auto bounds_json = [](const StrongDecomposition& d) {
    const StrongBounds& b = d.bounds;
    return json{{"u2_of_fU", b.u2_of_fU},       {"u2_limit", number(b.u2_limit)},
                {"l2_of_fS", b.l2_of_fS},       {"l2_limit", b.l2_limit},
                {"mean_delta", b.mean_delta},   {"reassembly_error", b.reassembly_error},
                {"structured_min", b.structured_min}, {"structured_max", b.structured_max}};
  };
  auto ledger_bounds = [&](const StrongDecomposition& d) {
    const StrongBounds& b = d.bounds;
    s.at_most("||f_U||_U2 <= 4/F(T)", b.u2_of_fU, b.u2_limit + 1e-9);
    s.at_most("||f_S||_L2 <= 4 eps", b.l2_of_fS, b.l2_limit + 1e-9);
    s.at_most("|mean(f_Uperp) - mean(f)| <= 1e-9", b.mean_delta, 1e-9);
    s.at_most("reassembly L2 error <= 1e-9", b.reassembly_error, 1e-9);
    s.at_least("min f_Uperp >= 0", b.structured_min, 0.0);
    s.at_most("max f_Uperp <= 1", b.structured_max, 1.0 + 1e-9);
  };
  if (mode == "strong") {
    const double eps = cfg.epsilon.value_or(0.1);
    const StrongDecomposition d = s.timed("strong", [&] { return strong_decompose(f, eps, growth); });
    json j{{"mode", "strong"}, {"T", d.complexity}, {"epsilon", eps}, {"growth", d.growth},
           {"scale_index", d.scale_index}, {"log2_coarse_scale", number(d.log2_coarse_scale)},
           {"log2_fine_scale", number(d.log2_fine_scale)}, {"bounds", bounds_json(d)},
           {"warnings", d.warnings}};
    if (!cfg.artifacts.empty()) {
      j["components"] = {{"structured", write_artifact(s, cfg, "f_structured.csv", d.structured)},
                         {"small", write_artifact(s, cfg, "f_small.csv", d.small)},
                         {"pseudorandom", write_artifact(s, cfg, "f_pseudorandom.csv", d.pseudorandom)}};
    }
    s.result(j);
    ledger_bounds(d);
    return;
  }
  if (mode == "chain") {
    const double delta = cfg.delta.value_or(mean(f).real());
    if (!(delta > 0)) throw InvalidArgument("chain mode needs a positive density");
    const double eps = cfg.epsilon.value_or(1.0 / std::ceil(100.0 / (delta * delta * delta)));
    const ChainReport r =
        s.timed("chain", [&] { return structured_count_chain(f, delta, eps, growth); });
    json links = json::array();
    for (const ChainLink& l : r.links) {
      links.push_back({{"name", l.name}, {"lhs", number(l.lhs)}, {"rhs", number(l.rhs)}, {"holds", l.holds}});
    }
    s.result({{"mode", "chain"}, {"delta", delta}, {"epsilon", eps}, {"T", r.decomposition.complexity},
              {"almost_periods", r.almost_periods.size()},
              {"almost_period_density", r.almost_period_density}, {"lambda3", r.lambda3},
              {"links", links}, {"bounds", bounds_json(r.decomposition)}});
    ledger_bounds(r.decomposition);
    for (const ChainLink& l : r.links) s.at_least(l.name, l.lhs, l.rhs - 1e-9);
    return;
  }
  throw InvalidArgument("--mode must be weak, strong or chain");
}

void run_roth(Session& s, const RunConfig& cfg) {
  std::size_t L = cfg.L.value_or(cfg.N.value_or(0));
  std::vector<std::int64_t> A;
  if (!cfg.set_file.empty()) {
    A = read_set_file(cfg.set_file);
    if (L == 0) L = A.empty() ? 0 : static_cast<std::size_t>(*std::max_element(A.begin(), A.end()));
  } else {
    if (L == 0) throw InvalidArgument("roth with --gen needs --L");
    A = load_set(cfg, L);
  }
  if (L == 0) throw InvalidArgument("roth: empty interval");
  std::sort(A.begin(), A.end());
  A.erase(std::unique(A.begin(), A.end()), A.end());
  const double delta = cfg.delta.value_or(static_cast<double>(A.size()) / static_cast<double>(L));
  const double eta = cfg.eta.value_or(0.16);
  const RothResult r = s.timed("roth", [&] { return roth_iterate(A, L, delta, eta); });
  json steps = json::array();
  for (const IncrementStep& st : r.steps) {
    json j{{"length", st.length}, {"modulus", st.modulus}, {"u2", st.u2_value},
           {"pseudorandom", st.pseudorandom}};
    if (st.certificate) {
      const ProgressionCertificate& c = *st.certificate;
      j["frequency"] = st.frequency;
      j["pieces"] = st.pieces_scanned;
      j["progression"] = {{"start", c.progression.start}, {"difference", c.progression.difference},
                          {"length", c.progression.length}};
      j["measured_density"] = c.measured_density;
      j["baseline_density"] = c.baseline_density;
      j["gain"] = c.gain;
    }
    steps.push_back(j);
  }
  s.result({{"L", L}, {"size", A.size()}, {"delta", delta}, {"eta", eta}, {"steps", steps},
            {"increments", r.steps.size() - 1}, {"iteration_cap", r.iteration_cap},
            {"final", {{"start", r.final_progression.start},
                       {"difference", r.final_progression.difference},
                       {"length", r.final_length}, {"size", r.final_size},
                       {"density", r.final_density}, {"modulus", r.modulus}}},
            {"actual_count", r.actual_count}, {"lower_bound", r.lower_bound}});
  s.at_least("actual 3-AP count >= lower bound", static_cast<double>(r.actual_count), r.lower_bound);
  s.at_most("increments <= iteration cap", static_cast<double>(r.steps.size() - 1),
            static_cast<double>(r.iteration_cap));
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    if (r.steps[i].certificate) {
      s.at_least("step " + std::to_string(i) + " gain >= eta^2/400", r.steps[i].certificate->gain,
                 eta * eta / 400);
    }
  }
}

void run_regularity(Session& s, const RunConfig& cfg) {
  if (cfg.cayley3) {
    if (!cfg.N) throw InvalidArgument("--cayley3 needs --N");
    const auto A = load_set(cfg, *cfg.N);
    const CayleyHypergraph h = s.timed("cayley3", [&] { return cayley_3hypergraph(A, *cfg.N); });
    s.result({{"object", "cayley_3hypergraph"}, {"N", *cfg.N}, {"tetrahedra", h.tetrahedra},
              {"ap4_pairs", h.ap_pairs}});
    s.equal("tetrahedra == N^2 * ap4_pairs", static_cast<double>(h.tetrahedra),
            static_cast<double>(*cfg.N) * static_cast<double>(*cfg.N) * static_cast<double>(h.ap_pairs));
    return;
  }
  std::optional<EdgeFunction> graph;
  if (cfg.cayley) {
    if (!cfg.N && cfg.set_file.empty()) throw InvalidArgument("--cayley needs --N");
    auto A = load_set(cfg, cfg.N.value_or(0));
    std::size_t N = cfg.N.value_or(0);
    if (N == 0) {
      for (std::int64_t a : A) N = std::max<std::size_t>(N, static_cast<std::size_t>(std::llabs(a)) + 1);
    }
    const CayleyTripartite c = s.timed("cayley", [&] { return cayley_tripartite(A, N); });
    s.result({{"object", "cayley_tripartite"}, {"N", N}, {"vertices", 3 * N},
              {"triangles", c.triangles}, {"ap3_pairs", c.ap_pairs}});
    s.equal("triangles == N * ap3_pairs", static_cast<double>(c.triangles),
            static_cast<double>(N) * static_cast<double>(c.ap_pairs));
    graph = c.graph;
  } else {
    if (cfg.graph_file.empty()) throw InvalidArgument("regularity needs --graph-file or --cayley");
    std::ifstream in(cfg.graph_file);
    if (!in) throw InvalidArgument("cannot open graph file " + cfg.graph_file);
    graph = read_edge_list(in, cfg.N);
  }
  const EdgeFunction& G = *graph;
  const std::string mode = cfg.mode.empty() ? (cfg.cayley ? "removal" : "strong") : cfg.mode;
  const double eps = cfg.epsilon.value_or(0.2);

  if (mode == "weak") {
    const WeakRegularity w = s.timed("weak", [&] { return weak_regularize(G, eps, cfg.seed); });
    json j{{"mode", "weak"}, {"epsilon", eps}, {"cells", w.partition.cell_count()},
           {"iterations", w.iterations}, {"box2_of_fU", w.box2_of_fU}, {"energies", w.energies}};
    if (!cfg.artifacts.empty()) {
      const auto path = (std::filesystem::path(cfg.artifacts) / "partition.csv").string();
      std::ofstream out(path);
      write_partition_csv(out, w.partition);
      s.artifact(path);
      j["partition_csv"] = path;
    }
    s.result(j);
    s.at_most("||f_U||_Box2 <= eps", w.box2_of_fU, eps);
    s.at_most("generating sets <= 32/eps^8", 2.0 * static_cast<double>(w.iterations), 32 / std::pow(eps, 8));
    return;
  }
  if (mode == "strong") {
    const GrowthFunction growth = GrowthFunction::parse(cfg.growth.empty() ? "affine:4" : cfg.growth);
    const GraphDecomposition d =
        s.timed("strong", [&] { return strong_regularize(G, eps, growth, cfg.seed); });
    const GraphBounds& b = d.bounds;
    json j{{"mode", "strong"}, {"epsilon", eps}, {"growth", d.growth}, {"T", d.complexity},
           {"coarse_index", d.coarse_index}, {"fine_index", d.fine_index},
           {"cells", d.partition.cell_count()}, {"fine_cells", d.fine_partition.cell_count()},
           {"energies", d.energies},
           {"bounds", {{"box2_of_fU", b.box2_of_fU}, {"box2_limit", number(b.box2_limit)},
                       {"l2_of_fS", b.l2_of_fS}, {"l2_limit", b.l2_limit},
                       {"reassembly_error", b.reassembly_error}}}};
    if (!cfg.artifacts.empty()) {
      const auto path = (std::filesystem::path(cfg.artifacts) / "partition.csv").string();
      std::ofstream out(path);
      write_partition_csv(out, d.partition);
      s.artifact(path);
      j["partition_csv"] = path;
    }
    s.result(j);
    s.at_most("||f_U||_Box2 <= 4/F(T)", b.box2_of_fU, b.box2_limit + 1e-9);
    s.at_most("||f_S||_L2 <= 4 eps", b.l2_of_fS, b.l2_limit + 1e-9);
    s.at_most("reassembly error <= 1e-9", b.reassembly_error, 1e-9);
    double worst = 0;
    for (std::size_t i = 1; i < d.energies.size(); ++i) {
      worst = std::max(worst, d.energies[i - 1] - d.energies[i]);
    }
    s.at_most("energy decrease <= 1e-9", worst, 1e-9);
    return;
  }
  if (mode == "removal") {
    const double delta = cfg.delta.value_or(0.1);
    const RemovalResult r = s.timed("removal", [&] { return triangle_removal(G, delta, cfg.seed); });
    const RemovalReport& rep = r.report;
    s.result({{"mode", "removal"}, {"edges_removed", rep.edges_removed}, {"C", rep.C},
              {"triangles_before", rep.triangles_before}, {"triangles_after", rep.triangles_after},
              {"T", rep.T}, {"epsilon", rep.epsilon}, {"delta", delta},
              {"input_triangle_density", rep.input_triangle_density},
              {"certified_density", rep.certified_density}, {"small_atoms", rep.small_atoms},
              {"irregular_pairs", rep.irregular_pairs}, {"sparse_pairs", rep.sparse_pairs}});
    s.at_most("edges_removed <= C delta |V|^2 / 9", static_cast<double>(rep.edges_removed),
              rep.removal_limit);
    s.at_most("C <= 300", rep.C, 300);
    s.at_most("triangles_after <= triangles_before", static_cast<double>(rep.triangles_after),
              static_cast<double>(rep.triangles_before));
    if (rep.triangles_after > 0) {
      s.at_least("input triangle density >= c(delta)", rep.input_triangle_density, rep.certified_density);
    }
    return;
  }
  throw InvalidArgument("--mode must be weak, strong or removal");
}

void run_primes(Session& s, const RunConfig& cfg) {
  const int k = cfg.k.value_or(3);
  const std::size_t N = cfg.N.value_or(10000);
  const std::uint64_t w = cfg.w.value_or(7);
  const std::uint64_t b = cfg.b.value_or(1);
  const std::string method = cfg.method.empty() ? (k == 3 ? "spectral" : "naive") : cfg.method;
  if (method != "spectral" && method != "naive") throw InvalidArgument("--method must be spectral or naive");
  const ApMethod m = method == "spectral" ? ApMethod::Spectral : ApMethod::Naive;
  const auto start = Clock::now();
  const MangoldtWeights weights = s.timed("weights", [&] {
    return mangoldt_weights(static_cast<std::size_t>(k) * N, w, b);
  });
  const PrimeApAverage avg = s.timed("average", [&] { return prime_ap_average(k, weights, m); });
  const double runtime = std::chrono::duration<double>(Clock::now() - start).count();
  const MangoldtWeights window = mangoldt_weights(N, w, b);
  json j{{"k", k}, {"N", N}, {"w", w}, {"b", b}, {"W", weights.W}, {"average", avg.average},
         {"method", method}, {"weights_mean", window.mean}, {"pairs", avg.pair_count}};
  if (cfg.timings) j["runtime"] = runtime;
  s.result(j);
  if (cfg.check_naive && k == 3) {
    const PrimeApAverage other =
        prime_ap_average(k, weights, m == ApMethod::Spectral ? ApMethod::Naive : ApMethod::Spectral);
    s.at_most("|spectral - naive| <= 1e-6 |naive|", std::abs(other.average - avg.average),
              1e-6 * std::max(std::abs(avg.average), 1e-300));
  }
  if (cfg.bias) {
    const BiasReport r = fourier_bias(window);
    json profile = json::array();
    for (const BiasEntry& e : r.profile) profile.push_back({{"frequency", e.frequency}, {"magnitude", e.magnitude}});
    s.result({{"bias", {{"modulus", r.modulus}, {"max_nonzero_coeff", r.max_nonzero_coeff},
                        {"argmax", r.argmax}, {"profile", profile}}}});
  }
}

void run_generate(Session& s, const RunConfig& cfg) {
  if (cfg.gen.empty()) throw InvalidArgument("generate needs --gen");
  const GeneratorSpec spec = generator(cfg);
  std::ostringstream out;
  if (cfg.L) {
    for (std::int64_t n : generate_set(spec, *cfg.L)) out << n << '\n';
  } else if (cfg.N) {
    write_csv(out, generate_function(spec, *cfg.N));
  } else {
    throw InvalidArgument("generate needs --L (set) or --N (function)");
  }
  s.raw(out.str());
}

// Reads key=value lines into `--key=value` tokens.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  std::vector<std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line.erase(0, line.find_first_not_of(" \t"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    std::string value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

void emit_json(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

json error_object(const std::string& kind, const std::string& message) {
  return json{{"type", "error"}, {"kind", kind}, {"message", message}};
}

}  // namespace

json RunConfig::echo() const {
  json j{{"subcommand", subcommand}, {"seed", seed}};
  auto text = [&](const char* key, const std::string& v) {
    if (!v.empty()) j[key] = v;
  };
  text("gen", gen);
  text("function_file", function_file);
  text("set_file", set_file);
  text("graph_file", graph_file);
  text("mode", mode);
  text("method", method);
  text("kind", kind);
  text("growth", growth);
  echo_optional(j, "N", N);
  echo_optional(j, "L", L);
  echo_optional(j, "k", k);
  echo_optional(j, "epsilon", epsilon);
  echo_optional(j, "delta", delta);
  echo_optional(j, "eta", eta);
  echo_optional(j, "lambda", lambda);
  echo_optional(j, "w", w);
  echo_optional(j, "b", b);
  if (cayley) j["cayley"] = true;
  if (cayley3) j["cayley3"] = true;
  if (bias) j["bias"] = true;
  if (check_naive) j["check_naive"] = true;
  return j;
}

bool RunReport::all_passed() const {
  return std::all_of(ledger.begin(), ledger.end(), [](const LedgerEntry& e) { return e.pass; });
}

RunReport run(const RunConfig& config) {
  Session s(config);
  if (config.threads > 0) set_thread_count(config.threads);
  const std::string& sub = config.subcommand;
  if (sub == "norms") run_norms(s, config);
  else if (sub == "count-aps") run_count_aps(s, config);
  else if (sub == "decompose") run_decompose(s, config);
  else if (sub == "roth") run_roth(s, config);
  else if (sub == "regularity") run_regularity(s, config);
  else if (sub == "primes") run_primes(s, config);
  else if (sub == "generate") run_generate(s, config);
  else throw InvalidArgument("unknown subcommand '" + sub + "'");
  return std::move(s).finish();
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);

  CLI::App app{"Structure-versus-randomness experiments: Gowers norms, decompositions, "
               "density and energy increments, removal, and prime progressions."};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "64-bit seed for randomized steps")->envname("ADDCOMB_SEED");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    sub->add_flag("!--no-timings", cfg.timings, "omit wall-clock timings from reports");
    sub->add_option("--out", cfg.out, "write the report here instead of standard output");
  };
  auto opt = [](CLI::App* sub, const std::string& name, auto& target, const std::string& help) {
    using T = typename std::remove_reference_t<decltype(target)>::value_type;
    sub->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
  };
  auto source = [&](CLI::App* sub) {
    sub->add_option("--gen", cfg.gen, "generator spec, e.g. quadratic_phase:xi=1");
    sub->add_option("--function-file", cfg.function_file, "CSV with columns index,re,im");
    opt(sub, "--N", cfg.N, "modulus");
  };

  CLI::App* norms = app.add_subcommand("norms", "U2/U3 of a function, Box2 of a graph, Box3 of a Cayley hypergraph");
  common(norms);
  source(norms);
  norms->add_option("--graph-file", cfg.graph_file, "edge list `u v [weight]`");
  norms->add_option("--set-file", cfg.set_file, "newline-delimited integers");
  norms->add_flag("--cayley3", cfg.cayley3, "Box3 of the Cayley 3-hypergraph of the set");
  norms->add_option("--kind", cfg.kind, "u2, u3 or all");
  norms->add_option("--method", cfg.method, "direct, spectral or both");

  CLI::App* count = app.add_subcommand("count-aps", "Lambda_3 / Lambda_4 counting forms");
  common(count);
  source(count);
  opt(count, "--k", cfg.k, "progression length (3 or 4)");
  count->add_option("--method", cfg.method, "naive, spectral or both");

  CLI::App* decompose = app.add_subcommand("decompose", "weak or strong Fourier decomposition");
  common(decompose);
  source(decompose);
  decompose->add_option("--mode", cfg.mode, "weak, strong or chain");
  opt(decompose, "--lambda", cfg.lambda, "weak threshold");
  opt(decompose, "--epsilon", cfg.epsilon, "strong accuracy (1/M)");
  opt(decompose, "--delta", cfg.delta, "density for the chain");
  decompose->add_option("--growth", cfg.growth, "poly:p, exp:b, affine:c or removal:d");
  decompose->add_option("--artifacts", cfg.artifacts, "directory for component CSVs");

  CLI::App* roth = app.add_subcommand("roth", "density-increment pipeline");
  common(roth);
  roth->add_option("--gen", cfg.gen, "generator spec for the set");
  roth->add_option("--set-file", cfg.set_file, "newline-delimited integers in [1, L]");
  opt(roth, "--L", cfg.L, "interval length");
  opt(roth, "--delta", cfg.delta, "density lower bound (default |A|/L)");
  opt(roth, "--eta", cfg.eta, "pseudorandomness threshold");

  CLI::App* reg = app.add_subcommand("regularity", "graph regularity, triangle removal, Cayley correspondences");
  common(reg);
  reg->add_option("--graph-file", cfg.graph_file, "edge list `u v [weight]`");
  reg->add_option("--set-file", cfg.set_file, "set for --cayley / --cayley3");
  reg->add_option("--gen", cfg.gen, "generator spec for --cayley / --cayley3");
  opt(reg, "--N", cfg.N, "modulus for Cayley constructions");
  reg->add_flag("--cayley", cfg.cayley, "use the Cayley tripartite graph of the set");
  reg->add_flag("--cayley3", cfg.cayley3, "report the tetrahedron / 4-AP correspondence");
  reg->add_option("--mode", cfg.mode, "weak, strong or removal");
  opt(reg, "--epsilon", cfg.epsilon, "regularity accuracy");
  opt(reg, "--delta", cfg.delta, "removal density");
  reg->add_option("--growth", cfg.growth, "poly:p, exp:b, affine:c or removal:d");
  reg->add_option("--artifacts", cfg.artifacts, "directory for the partition CSV");

  CLI::App* primes = app.add_subcommand("primes", "W-tricked von Mangoldt progression averages");
  common(primes);
  opt(primes, "--k", cfg.k, "progression length (3 or 4)");
  opt(primes, "--N", cfg.N, "length");
  opt(primes, "--w", cfg.w, "small-prime cutoff");
  opt(primes, "--b", cfg.b, "residue coprime to W");
  primes->add_option("--method", cfg.method, "spectral or naive");
  primes->add_flag("--check-naive", cfg.check_naive, "cross-check k = 3 against the naive sum");
  primes->add_flag("--bias", cfg.bias, "report Fourier bias of Lambda_{W,b} - 1");

  CLI::App* gen = app.add_subcommand("generate", "emit fixture sets or functions");
  common(gen);
  gen->add_option("--gen", cfg.gen, "generator spec");
  opt(gen, "--L", cfg.L, "emit the set inside [1, L]");
  opt(gen, "--N", cfg.N, "emit the function on Z/NZ as CSV");

  try {
    // Splice config-file entries right after the subcommand so that explicit
    // flags, which come later, take precedence.
    std::vector<std::string> spliced;
    std::vector<std::string> from_config;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        from_config = config_tokens(args[++i]);
      } else if (args[i].rfind("--config=", 0) == 0) {
        from_config = config_tokens(args[i].substr(9));
      } else {
        spliced.push_back(args[i]);
      }
    }
    if (!from_config.empty() && !spliced.empty()) {
      spliced.insert(spliced.begin() + 1, from_config.begin(), from_config.end());
    }
    std::reverse(spliced.begin(), spliced.end());
    app.parse(spliced);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    emit_json(out, error_object("usage", e.what()));
    err << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    emit_json(out, error_object(e.kind(), e.what()));
    return 2;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      emit_json(out, error_object("invalid_argument", "cannot open --out " + cfg.out));
      return 2;
    }
    sink = &file;
  }

  RunReport report;
  try {
    report = run(cfg);
  } catch (const Error& e) {
    emit_json(*sink, error_object(e.kind(), e.what()));
    err << e.kind() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    emit_json(*sink, error_object("internal", e.what()));
    err << "internal: " << e.what() << '\n';
    return 2;
  }

  if (report.raw_output) {
    *sink << *report.raw_output;
    return 0;
  }
  for (const json& r : report.results) emit_json(*sink, r);
  json ledger = json::array();
  for (const LedgerEntry& e : report.ledger) {
    ledger.push_back({{"name", e.name}, {"lhs", number(e.lhs)}, {"relation", e.relation},
                      {"rhs", number(e.rhs)}, {"pass", e.pass}});
  }
  json final{{"type", "report"}, {"subcommand", cfg.subcommand}, {"config", report.config},
             {"ledger", ledger}, {"pass", report.all_passed()}, {"artifacts", report.artifacts}};
  if (cfg.timings) {
    json t = json::object();
    for (const auto& [label, seconds] : report.timings) t[label] = seconds;
    final["timings"] = t;
  }
  emit_json(*sink, final);
  return report.all_passed() ? 0 : 1;
}

}  // namespace addcomb::cli
