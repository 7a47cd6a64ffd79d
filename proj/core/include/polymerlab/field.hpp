#pragma once

#include <cstdint>
#include <vector>

#include "polymerlab/kernels.hpp"
#include "polymerlab/rng.hpp"

namespace polymer {

// Periodic spatial grid of N nodes over [0, L); frequencies p_k = 2*pi*k/L
// with k = -N/2 .. N/2-1 in FFT index order.
struct GridSpec {
    double length_L = 256.0;
    std::size_t num_points_N = 4096;

    double spacing() const { return length_L / static_cast<double>(num_points_N); }
    double frequency(std::size_t fft_index) const;
    void validate() const;  // throws unless L > 0 and N a power of two
};

// Grid samples of an environment profile. values include mean_v; the
// operations below act on the samples directly, so a nonzero centering is
// carried through shifts and killed by differentiation, as it should be.
struct FieldGrid {
    GridSpec spec;
    std::vector<double> values;
    double mean_v = 0.0;
};

// Spectral synthesis of the stationary Gaussian field: values are
//   mean_v + Re sum_k c_k xi_k e^{i p_k x},  c_k = sqrt(b_hat(p_k)/L),
// with xi_k independent standard complex Gaussians under Hermitian symmetry.
// The node covariance is then exactly the frequency-truncated L-periodization
// of b. When b_hat diverges at p = 0 the k = 0 weight uses the cell average
// of b_hat over (-pi/L, pi/L), which keeps that covariance finite and exact.
FieldGrid sample_stationary(const Kernel& k, const GridSpec& spec, RngStream& rng,
                            double mean_v = 0.0);

// Weight of the k = 0 mode in the synthesis: b_hat(0) when finite, otherwise
// the average of b_hat over the central frequency cell (-pi/L, pi/L), which
// is what keeps the lattice covariance finite for infrared-divergent kernels.
// Every lattice pairing must use the same effective value or the exact-in-law
// identities between field functionals and spectral sums break.
double zero_mode_weight(const Kernel& k, const GridSpec& spec);

// Deterministic node covariance implied by the synthesis at separation x:
// (1/L) sum_k b_hat_eff(p_k) cos(p_k x). Test oracle for the sampler.
double synthesis_covariance(const Kernel& k, const GridSpec& spec, double x);

// Cubic 4-point interpolation through the nearest nodes; exact at nodes,
// periodic in x.
double interpolate(const FieldGrid& f, double x);

FieldGrid derivative(const FieldGrid& f);      // spectral; Nyquist mode -> 0
FieldGrid shift(const FieldGrid& f, double z); // g(x) = f(x + z), spectral phase

}  // namespace polymer
