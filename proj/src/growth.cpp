#include "addcomb/growth.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "addcomb/errors.hpp"

namespace addcomb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_parameter(double p) {
  std::ostringstream out;
  out.precision(17);
  out << p;
  return out.str();
}

}  // namespace

GrowthFunction::GrowthFunction(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {
  if (!std::isfinite(parameter)) throw InvalidArgument("growth function parameter must be finite");
  switch (kind) {
    case Kind::Poly:
      if (parameter <= 0) throw InvalidArgument("poly growth needs exponent > 0");
      break;
    case Kind::Exp:
      if (parameter <= 1) throw InvalidArgument("exp growth needs base > 1");
      break;
    case Kind::Affine:
      if (parameter < 0) throw InvalidArgument("affine growth needs offset >= 0");
      break;
    case Kind::Removal:
      if (parameter <= 0 || parameter >= 1) throw InvalidArgument("removal growth needs 0 < delta < 1");
      break;
  }
}

GrowthFunction GrowthFunction::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InvalidArgument("growth function '" + text + "' must look like kind:parameter");
  }
  const std::string name = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  double value = 0;
  try {
    std::size_t used = 0;
    value = std::stod(arg, &used);
    if (used != arg.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::logic_error&) {
    throw InvalidArgument("growth function parameter '" + arg + "' is not a number");
  }
  if (name == "poly") return GrowthFunction(Kind::Poly, value);
  if (name == "exp") return GrowthFunction(Kind::Exp, value);
  if (name == "affine") return GrowthFunction(Kind::Affine, value);
  if (name == "removal") return GrowthFunction(Kind::Removal, value);
  throw InvalidArgument("unknown growth function kind '" + name + "'");
}

double GrowthFunction::operator()(double n) const {
  if (std::isinf(n)) return kInf;
  switch (kind_) {
    case Kind::Poly: return std::pow(n, parameter_);
    case Kind::Exp: return std::pow(parameter_, n);
    case Kind::Affine: return n + parameter_;
    case Kind::Removal: return std::ceil(100.0 * std::exp2(3.0 * n) / std::pow(parameter_, 6));
  }
  return kInf;
}

double GrowthFunction::log2_at(double log2_n) const {
  if (std::isinf(log2_n) && log2_n > 0) return kInf;
  switch (kind_) {
    case Kind::Poly: return parameter_ * log2_n;
    case Kind::Exp: return std::exp2(log2_n) * std::log2(parameter_);
    case Kind::Affine:
      return log2_n > 60 ? log2_n : std::log2(std::exp2(log2_n) + parameter_);
    case Kind::Removal:
      return std::log2(100.0) - 6.0 * std::log2(parameter_) + 3.0 * std::exp2(log2_n);
  }
  return kInf;
}

std::string GrowthFunction::describe() const {
  switch (kind_) {
    case Kind::Poly: return "poly:" + format_parameter(parameter_);
    case Kind::Exp: return "exp:" + format_parameter(parameter_);
    case Kind::Affine: return "affine:" + format_parameter(parameter_);
    case Kind::Removal: return "removal:" + format_parameter(parameter_);
  }
  return "unknown";
}

}  // namespace addcomb
