#include "polymerlab/field.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "polymerlab/quadrature.hpp"
#include "polymerlab/spectral.hpp"

namespace polymer {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

}  // namespace

double zero_mode_weight(const Kernel& k, const GridSpec& spec) {
    const double at_zero = k.b_hat(0.0);
    if (std::isfinite(at_zero)) return at_zero;
    const double half_cell = std::numbers::pi / spec.length_L;
    QuadResult cell = integrate([&k](double p) { return k.b_hat(p); }, 0.0, half_cell);
    return cell.value / half_cell;
}

double GridSpec::frequency(std::size_t fft_index) const {
    const auto n = static_cast<std::ptrdiff_t>(num_points_N);
    auto k = static_cast<std::ptrdiff_t>(fft_index);
    if (k >= n / 2) k -= n;
    return kTwoPi * static_cast<double>(k) / length_L;
}

void GridSpec::validate() const {
    if (!(length_L > 0.0)) throw std::invalid_argument("grid: length must be positive");
    if (!power_of_two(num_points_N))
        throw std::invalid_argument("grid: number of points must be a power of two (>= 2)");
}

FieldGrid sample_stationary(const Kernel& k, const GridSpec& spec, RngStream& rng,
                            double mean_v) {
    spec.validate();
    const std::size_t n = spec.num_points_N;
    const double inv_l = 1.0 / spec.length_L;

    std::vector<std::complex<double>> coeff(n, {0.0, 0.0});
    // Fixed draw order: k = 0, Nyquist, then conjugate pairs by increasing k.
    coeff[0] = std::sqrt(zero_mode_weight(k, spec) * inv_l) * rng.normal();
    coeff[n / 2] = std::sqrt(k.b_hat(spec.frequency(n / 2)) * inv_l) * rng.normal();
    for (std::size_t j = 1; j < n / 2; ++j) {
        const double c = std::sqrt(k.b_hat(spec.frequency(j)) * inv_l);
        const double g1 = rng.normal();
        const double g2 = rng.normal();
        const std::complex<double> xi{g1 * std::numbers::sqrt2 / 2.0,
                                      g2 * std::numbers::sqrt2 / 2.0};
        coeff[j] = c * xi;
        coeff[n - j] = c * std::conj(xi);
    }

    fft_inverse(coeff);
    FieldGrid out{spec, std::vector<double>(n), mean_v};
    for (std::size_t j = 0; j < n; ++j) out.values[j] = mean_v + coeff[j].real();
    return out;
}

double synthesis_covariance(const Kernel& k, const GridSpec& spec, double x) {
    double acc = zero_mode_weight(k, spec);
    for (std::size_t j = 1; j < spec.num_points_N; ++j) {
        const double p = spec.frequency(j);
        acc += k.b_hat(p) * std::cos(p * x);
    }
    return acc / spec.length_L;
}

double interpolate(const FieldGrid& f, double x) {
    const std::size_t n = f.spec.num_points_N;
    const double h = f.spec.spacing();
    double u = x / h;
    u -= std::floor(u / static_cast<double>(n)) * static_cast<double>(n);
    auto m = static_cast<std::size_t>(u);
    if (m >= n) m = n - 1;  // guards u == n after roundoff
    const double t = u - static_cast<double>(m);

    const double wm1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double w0 = (t * t - 1.0) * (t - 2.0) / 2.0;
    const double w1 = -t * (t + 1.0) * (t - 2.0) / 2.0;
    const double w2 = t * (t * t - 1.0) / 6.0;

    const std::size_t im1 = (m + n - 1) & (n - 1);
    const std::size_t i1 = (m + 1) & (n - 1);
    const std::size_t i2 = (m + 2) & (n - 1);
    const auto& v = f.values;
    return wm1 * v[im1] + w0 * v[m] + w1 * v[i1] + w2 * v[i2];
}

FieldGrid derivative(const FieldGrid& f) {
    const std::size_t n = f.spec.num_points_N;
    std::vector<std::complex<double>> spec_vals(n);
    for (std::size_t j = 0; j < n; ++j) spec_vals[j] = f.values[j];
    fft_forward(spec_vals);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == n / 2) {
            spec_vals[j] = 0.0;  // odd multiplier has no consistent sign at Nyquist
        } else {
            spec_vals[j] *= std::complex<double>{0.0, f.spec.frequency(j)};
        }
    }
    fft_inverse(spec_vals);
    FieldGrid out{f.spec, std::vector<double>(n), 0.0};
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) out.values[j] = spec_vals[j].real() * inv_n;
    return out;
}

FieldGrid shift(const FieldGrid& f, double z) {
    const std::size_t n = f.spec.num_points_N;
    std::vector<std::complex<double>> spec_vals(n);
    for (std::size_t j = 0; j < n; ++j) spec_vals[j] = f.values[j];
    fft_forward(spec_vals);
    for (std::size_t j = 0; j < n; ++j) {
        const double p = f.spec.frequency(j);
        if (j == n / 2) {
            spec_vals[j] *= std::cos(p * z);  // real part of the phase; keeps output real
        } else {
            spec_vals[j] *= std::exp(std::complex<double>{0.0, p * z});
        }
    }
    fft_inverse(spec_vals);
    FieldGrid out{f.spec, std::vector<double>(n), f.mean_v};
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) out.values[j] = spec_vals[j].real() * inv_n;
    return out;
}

}  // namespace polymer
