#pragma once

#include <complex>
#include <vector>

namespace polymer {

// Unnormalized in-place complex DFT. Forward uses the e^{-ipx} sign, so for
// node values u_j at x_j = j*h the coefficient at frequency index k is
// sum_j u_j e^{-2*pi*i*j*k/N}. The inverse is unscaled; callers divide by N.
// Plans are cached per (size, direction) behind a lock; execution itself is
// thread-safe and bit-deterministic for a given build.
void fft_forward(std::vector<std::complex<double>>& a);
void fft_inverse(std::vector<std::complex<double>>& a);

}  // namespace polymer
