#pragma once

#include <string>

namespace addcomb {

// Strictly increasing growth functions F: N -> N drawn from a fixed menu so
// that runs stay reproducible. Values are doubles that saturate to +inf.
//   poly:p      F(n) = n^p          (p > 0)
//   exp:b       F(n) = b^n          (b > 1)
//   affine:c    F(n) = n + c        (c >= 0)
//   removal:d   F(n) = ceil(100 * 2^(3n) / d^6)   (0 < d < 1)
class GrowthFunction {
 public:
  enum class Kind { Poly, Exp, Affine, Removal };

  GrowthFunction(Kind kind, double parameter);
  static GrowthFunction parse(const std::string& text);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return parameter_; }

  double operator()(double n) const;
  // log2 F(2^log2_n); accepts +inf and returns +inf on overflow.
  double log2_at(double log2_n) const;
  // Canonical text form, parseable by parse().
  std::string describe() const;

 private:
  Kind kind_;
  double parameter_;
};

}  // namespace addcomb
