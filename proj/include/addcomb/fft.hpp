#pragma once

#include <complex>
#include <span>

namespace addcomb::fft {

// Unnormalized transforms of arbitrary length n (prime lengths included).
//   forward: out[k] = sum_x in[x] exp(-2 pi i x k / n)
//   inverse: out[x] = sum_k in[k] exp(+2 pi i x k / n)
// in and out must have equal size; they may alias. Safe to call concurrently.
void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

}  // namespace addcomb::fft
