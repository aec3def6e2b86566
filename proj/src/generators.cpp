#include "addcomb/generators.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "addcomb/errors.hpp"
#include "addcomb/rng.hpp"

namespace addcomb {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double frac(double t) { return t - std::floor(t); }

const std::map<std::string, GeneratorKind>& kinds() {
  static const std::map<std::string, GeneratorKind> table{
      {"random", GeneratorKind::Random},
      {"linear_quasi", GeneratorKind::LinearQuasi},
      {"quadratic_quasi", GeneratorKind::QuadraticQuasi},
      {"bracket_quadratic", GeneratorKind::BracketQuadratic},
      {"random_subset_of", GeneratorKind::RandomSubsetOf},
      {"quadratic_phase", GeneratorKind::QuadraticPhase},
      {"polynomial_phase", GeneratorKind::PolynomialPhase},
      {"skew_shift", GeneratorKind::SkewShift},
  };
  return table;
}

std::set<std::string> allowed_keys(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Random: return {"delta", "seed"};
    case GeneratorKind::LinearQuasi: return {"alpha", "delta"};
    case GeneratorKind::QuadraticQuasi: return {"alpha", "delta"};
    case GeneratorKind::BracketQuadratic: return {"alpha", "beta", "delta"};
    case GeneratorKind::RandomSubsetOf: return {"delta", "seed"};
    case GeneratorKind::QuadraticPhase: return {"xi"};
    case GeneratorKind::PolynomialPhase: return {"coeffs"};
    case GeneratorKind::SkewShift: return {"alpha", "x0", "y0"};
  }
  return {};
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument("bad");
    return v;
  } catch (const std::logic_error&) {
    throw InvalidArgument("generator parameter " + key + "='" + value + "' is not a finite number");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("bad");
    return v;
  } catch (const std::logic_error&) {
    throw InvalidArgument("generator parameter " + key + "='" + value + "' is not an integer");
  }
}

std::uint64_t parse_seed(const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size() || value.front() == '-') throw std::invalid_argument("bad");
    return v;
  } catch (const std::logic_error&) {
    throw InvalidArgument("generator seed '" + value + "' is not a nonnegative integer");
  }
}

std::string real_text(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t n) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % n);
}

Complex phase_of_residue(std::int64_t r, std::int64_t n) {
  const double t = kTwoPi * static_cast<double>(mod(r, n)) / static_cast<double>(n);
  return {std::cos(t), std::sin(t)};
}

}  // namespace

std::string to_string(GeneratorKind kind) {
  for (const auto& [name, k] : kinds()) {
    if (k == kind) return name;
  }
  return "unknown";
}

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  const auto bar = text.find('|');
  const std::string head = text.substr(0, bar);
  const auto colon = head.find(':');
  const std::string name = head.substr(0, colon);
  const auto it = kinds().find(name);
  if (it == kinds().end()) throw InvalidArgument("unknown generator kind '" + name + "'");
  GeneratorSpec spec;
  spec.kind = it->second;
  const std::set<std::string> allowed = allowed_keys(spec.kind);

  if (colon != std::string::npos) {
    std::stringstream params(head.substr(colon + 1));
    std::string item;
    std::set<std::string> seen;
    while (std::getline(params, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InvalidArgument("generator parameter '" + item + "' needs key=value");
      const std::string key = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      if (!allowed.count(key)) {
        throw InvalidArgument("generator '" + name + "' does not accept parameter '" + key + "'");
      }
      if (!seen.insert(key).second) throw InvalidArgument("generator parameter '" + key + "' repeated");
      if (key == "alpha") spec.alpha = parse_real(key, value);
      else if (key == "beta") spec.beta = parse_real(key, value);
      else if (key == "delta") spec.delta = parse_real(key, value);
      else if (key == "x0") spec.x0 = parse_real(key, value);
      else if (key == "y0") spec.y0 = parse_real(key, value);
      else if (key == "xi") spec.xi = parse_int(key, value);
      else if (key == "seed") spec.seed = parse_seed(value);
      else if (key == "coeffs") {
        std::stringstream cs(value);
        std::string c;
        while (std::getline(cs, c, ';')) spec.coefficients.push_back(parse_int(key, c));
      }
    }
  }
  if (spec.kind == GeneratorKind::RandomSubsetOf) {
    if (bar == std::string::npos) throw InvalidArgument("random_subset_of needs a base spec after '|'");
    spec.base = std::make_shared<const GeneratorSpec>(parse(text.substr(bar + 1)));
  } else if (bar != std::string::npos) {
    throw InvalidArgument("only random_subset_of takes a base spec");
  }
  if (spec.kind == GeneratorKind::PolynomialPhase && spec.coefficients.empty()) {
    throw InvalidArgument("polynomial_phase needs coeffs=c0;c1;...");
  }
  return spec;
}

bool GeneratorSpec::is_set_kind() const {
  switch (kind) {
    case GeneratorKind::QuadraticPhase:
    case GeneratorKind::PolynomialPhase:
    case GeneratorKind::SkewShift:
      return false;
    default:
      return true;
  }
}

bool GeneratorSpec::is_randomized() const {
  if (kind == GeneratorKind::Random || kind == GeneratorKind::RandomSubsetOf) return true;
  return base && base->is_randomized();
}

GeneratorSpec GeneratorSpec::with_default_seed(std::uint64_t default_seed) const {
  GeneratorSpec out = *this;
  if ((kind == GeneratorKind::Random || kind == GeneratorKind::RandomSubsetOf) && !seed) {
    out.seed = default_seed;
  }
  if (base) out.base = std::make_shared<const GeneratorSpec>(base->with_default_seed(default_seed + 1));
  return out;
}

void GeneratorSpec::validate() const {
  if (is_set_kind() && !(delta > 0 && delta <= 1)) {
    throw InvalidArgument(to_string(kind) + ": delta must lie in (0, 1]");
  }
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(x0) || !std::isfinite(y0)) {
    throw InvalidArgument(to_string(kind) + ": parameters must be finite");
  }
  if ((kind == GeneratorKind::Random || kind == GeneratorKind::RandomSubsetOf) && !seed) {
    throw InvalidArgument(to_string(kind) + ": a seed is required");
  }
  if (kind == GeneratorKind::RandomSubsetOf) {
    if (!base) throw InvalidArgument("random_subset_of: missing base spec");
    if (!base->is_set_kind()) throw InvalidArgument("random_subset_of: base must be a set kind");
    base->validate();
  }
  if (kind == GeneratorKind::PolynomialPhase && coefficients.empty()) {
    throw InvalidArgument("polynomial_phase: coefficients required");
  }
}

std::string GeneratorSpec::describe() const {
  std::string out = to_string(kind) + ":";
  auto seed_text = [&] { return seed ? std::to_string(*seed) : std::string("unset"); };
  switch (kind) {
    case GeneratorKind::Random:
      out += "delta=" + real_text(delta) + ",seed=" + seed_text();
      break;
    case GeneratorKind::LinearQuasi:
    case GeneratorKind::QuadraticQuasi:
      out += "alpha=" + real_text(alpha) + ",delta=" + real_text(delta);
      break;
    case GeneratorKind::BracketQuadratic:
      out += "alpha=" + real_text(alpha) + ",beta=" + real_text(beta) + ",delta=" + real_text(delta);
      break;
    case GeneratorKind::RandomSubsetOf:
      out += "delta=" + real_text(delta) + ",seed=" + seed_text() + "|" + base->describe();
      break;
    case GeneratorKind::QuadraticPhase:
      out += "xi=" + std::to_string(xi);
      break;
    case GeneratorKind::PolynomialPhase: {
      out += "coeffs=";
      for (std::size_t i = 0; i < coefficients.size(); ++i) {
        out += (i ? ";" : "") + std::to_string(coefficients[i]);
      }
      break;
    }
    case GeneratorKind::SkewShift:
      out += "alpha=" + real_text(alpha) + ",x0=" + real_text(x0) + ",y0=" + real_text(y0);
      break;
  }
  return out;
}

std::vector<std::int64_t> generate_set(const GeneratorSpec& spec, std::size_t L) {
  if (L == 0) throw InvalidArgument("generate_set: L must be at least 1");
  spec.validate();
  if (!spec.is_set_kind()) throw InvalidArgument("generate_set: " + to_string(spec.kind) + " is not a set kind");
  std::vector<std::int64_t> out;
  const auto last = static_cast<std::int64_t>(L);
  switch (spec.kind) {
    case GeneratorKind::Random: {
      Rng rng(*spec.seed);
      for (std::int64_t n = 1; n <= last; ++n) {
        if (rng.uniform() < spec.delta) out.push_back(n);
      }
      break;
    }
    case GeneratorKind::LinearQuasi:
      for (std::int64_t n = 1; n <= last; ++n) {
        if (frac(spec.alpha * static_cast<double>(n)) <= spec.delta) out.push_back(n);
      }
      break;
    case GeneratorKind::QuadraticQuasi:
      for (std::int64_t n = 1; n <= last; ++n) {
        const double x = static_cast<double>(n);
        if (frac(spec.alpha * x * x) <= spec.delta) out.push_back(n);
      }
      break;
    case GeneratorKind::BracketQuadratic:
      for (std::int64_t n = 1; n <= last; ++n) {
        const double x = static_cast<double>(n);
        if (frac(std::floor(spec.alpha * x) * spec.beta * x) <= spec.delta) out.push_back(n);
      }
      break;
    case GeneratorKind::RandomSubsetOf: {
      Rng rng(*spec.seed);
      for (std::int64_t n : generate_set(*spec.base, L)) {
        if (rng.uniform() < spec.delta) out.push_back(n);
      }
      break;
    }
    default:
      break;
  }
  return out;
}

CyclicFunction generate_function(const GeneratorSpec& spec, std::size_t N) {
  if (N == 0) throw InvalidArgument("generate_function: N must be at least 1");
  spec.validate();
  if (spec.is_set_kind()) {
    const std::vector<std::int64_t> members = generate_set(spec, N);
    return CyclicFunction::indicator(N, members);
  }
  const auto n = static_cast<std::int64_t>(N);
  std::vector<Complex> values(N);
  switch (spec.kind) {
    case GeneratorKind::QuadraticPhase: {
      const std::int64_t xi = mod(spec.xi, n);
      for (std::int64_t x = 0; x < n; ++x) values[x] = phase_of_residue(mulmod(xi, mulmod(x, x, n), n), n);
      break;
    }
    case GeneratorKind::PolynomialPhase:
      for (std::int64_t x = 0; x < n; ++x) {
        std::int64_t acc = 0;
        for (auto c = spec.coefficients.rbegin(); c != spec.coefficients.rend(); ++c) {
          acc = mod(mulmod(acc, x, n) + mod(*c, n), n);
        }
        values[x] = phase_of_residue(acc, n);
      }
      break;
    case GeneratorKind::SkewShift: {
      double x = frac(spec.x0);
      double y = frac(spec.y0);
      for (std::size_t i = 0; i < N; ++i) {
        values[i] = Complex(std::cos(kTwoPi * y), std::sin(kTwoPi * y));
        y = frac(y + x);
        x = frac(x + spec.alpha);
      }
      break;
    }
    default:
      break;
  }
  return CyclicFunction(std::move(values));
}

}  // namespace addcomb
