#include "polymerlab/kernels.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "polymerlab/spectral.hpp"

namespace polymer {

namespace {

constexpr double kPi = 3.14159265358979323846;

double gaussian_b(const KernelParams& k, double x) {
    return 0.5 * k.a * std::sqrt(k.s / kPi) * std::exp(-k.s * x * x / 4.0);
}

double gaussian_b_prime(const KernelParams& k, double x) {
    return -0.25 * k.a * k.s * x * std::sqrt(k.s / kPi) * std::exp(-k.s * x * x / 4.0);
}

double summable_b(const KernelParams& k, double x) {
    return 0.25 * k.a * k.s * std::sqrt(k.s / kPi) * (1.0 - 0.5 * k.s * x * x) *
           std::exp(-k.s * x * x / 4.0);
}

double summable_b_prime(const KernelParams& k, double x) {
    return -0.25 * k.a * k.s * k.s * x * std::sqrt(k.s / kPi) * (1.5 - 0.25 * k.s * x * x) *
           std::exp(-k.s * x * x / 4.0);
}

}  // namespace

struct Kernel::TableHolder {
    std::once_flag once;
    DerivTable table;
};

Kernel Kernel::make(const KernelParams& params) {
    if (!(params.s > 0.0)) throw std::invalid_argument("kernel: scale s must be positive");
    if (!(params.a >= 0.0)) throw std::invalid_argument("kernel: amplitude a must be nonnegative");
    if (params.family == KernelFamily::power_ir &&
        !(params.alpha > -1.0 && params.alpha < 1.0))
        throw std::invalid_argument("kernel: infrared exponent must lie in (-1, 1)");

    Kernel k;
    k.params_ = params;
    switch (params.family) {
        case KernelFamily::gaussian: k.name_ = "gaussian"; break;
        case KernelFamily::power_ir: k.name_ = "power-ir"; break;
        case KernelFamily::summable: k.name_ = "summable"; break;
    }
    k.holder_ = std::make_shared<TableHolder>();

    if (!k.is_zero()) {
        // Standing assumptions, checked once per construction: finite spectral
        // moments up to order 4, evenness of b, and the maximum at the origin.
        double P = k.spectral_cutoff() + 2.0;
        for (int m = 0; m <= 4; ++m) {
            auto r = integrate([&](double p) { return std::pow(p, m) * k.b_hat(p); }, 0.0, P,
                               {1.0}, {1e-9, 1e-12, 400});
            if (!std::isfinite(r.value))
                throw std::invalid_argument("kernel: spectral moment " + std::to_string(m) +
                                            " not finite");
        }
        double b0 = k.b(0.0);
        for (double x : {0.3, 1.7, 5.0}) {
            double bp = k.b(x), bm = k.b(-x);
            if (std::fabs(bp - bm) > 1e-12 * std::max(1.0, std::fabs(bp)))
                throw std::invalid_argument("kernel: b is not even");
            if (bp > b0 + 1e-12) throw std::invalid_argument("kernel: b(0) is not the maximum");
        }
    }
    return k;
}

Kernel Kernel::make(const std::string& family_name, double a, double alpha, double s) {
    KernelParams p;
    p.a = a;
    p.alpha = alpha;
    p.s = s;
    if (family_name == "gaussian") {
        p.family = KernelFamily::gaussian;
    } else if (family_name == "power-ir") {
        p.family = KernelFamily::power_ir;
    } else if (family_name == "summable") {
        p.family = KernelFamily::summable;
    } else {
        throw std::invalid_argument("kernel: unknown family \"" + family_name + "\"");
    }
    return make(p);
}

double Kernel::b(double x) const {
    if (is_zero()) return 0.0;
    switch (params_.family) {
        case KernelFamily::gaussian: return gaussian_b(params_, x);
        case KernelFamily::summable: return summable_b(params_, x);
        case KernelFamily::power_ir: return b_quadrature(x);
    }
    return 0.0;
}

double Kernel::b_prime(double x) const {
    if (is_zero()) return 0.0;
    switch (params_.family) {
        case KernelFamily::gaussian: return gaussian_b_prime(params_, x);
        case KernelFamily::summable: return summable_b_prime(params_, x);
        case KernelFamily::power_ir: return b_prime_quadrature(x);
    }
    return 0.0;
}

double Kernel::b_hat(double p) const {
    double env = std::exp(-p * p / params_.s);
    switch (params_.family) {
        case KernelFamily::gaussian: return params_.a * env;
        case KernelFamily::summable: return params_.a * p * p * env;
        case KernelFamily::power_ir: {
            if (p == 0.0) {
                if (params_.alpha > 0.0) return 0.0;
                if (params_.alpha == 0.0) return params_.a;
                return params_.a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
            }
            return params_.a * std::pow(std::fabs(p), params_.alpha) * env;
        }
    }
    return 0.0;
}

double Kernel::c_hat(double p) const { return std::sqrt(b_hat(p)); }

std::optional<double> Kernel::infrared_exponent() const {
    if (params_.family == KernelFamily::summable) return std::nullopt;
    return params_.family == KernelFamily::gaussian ? 0.0 : params_.alpha;
}

InfraredConstants Kernel::infrared() const {
    InfraredConstants c;
    c.C1 = c.C2 = params_.a;
    c.delta = std::sqrt(params_.s * std::log(2.0));
    if (params_.family == KernelFamily::summable || is_zero()) {
        c.rho_finite = true;
        c.rho_squared = params_.a * std::sqrt(kPi * params_.s);
    }
    return c;
}

double Kernel::spectral_cutoff() const { return 8.0 * std::sqrt(params_.s); }

double Kernel::b_quadrature(double x, const QuadratureOptions& opt) const {
    if (is_zero()) return 0.0;
    double P = spectral_cutoff() + 2.0;
    auto r = integrate([&](double p) { return b_hat(p) * std::cos(p * x) / kPi; }, 0.0, P, {1.0},
                       opt);
    return r.value;
}

double Kernel::b_prime_quadrature(double x, const QuadratureOptions& opt) const {
    if (is_zero()) return 0.0;
    double P = spectral_cutoff() + 2.0;
    auto r = integrate([&](double p) { return -p * b_hat(p) * std::sin(p * x) / kPi; }, 0.0, P,
                       {1.0}, opt);
    return r.value;
}

const Kernel::DerivTable& Kernel::table() const {
    std::call_once(holder_->once, [this] {
        DerivTable t;
        if (is_zero()) {
            holder_->table = t;
            return;
        }
        double width = 1.0 / std::sqrt(params_.s);  // spatial scale of the envelope
        t.dx = width / 128.0;
        t.inv_dx = 1.0 / t.dx;

        if (params_.family == KernelFamily::power_ir) {
            // Power-law spatial tails never reach the relative threshold, so the
            // update window is capped; the discarded tail is O(radius^{-2-alpha}).
            t.radius = 128.0 * width;
            // Periodized synthesis on a period >> radius: one dense inverse
            // transform of i*p*b_hat beats half a million oscillatory quadratures.
            // Wraparound images contribute < ~1e-6 relative at this period.
            double period = 4096.0 * width;
            std::size_t m = static_cast<std::size_t>(std::llround(period / t.dx));
            std::vector<std::complex<double>> coeff(m, {0.0, 0.0});
            for (std::size_t j = 1; j < m; ++j) {
                if (j == m / 2) continue;
                double q = 2.0 * kPi *
                           (j <= m / 2 ? static_cast<double>(j)
                                       : static_cast<double>(j) - static_cast<double>(m)) /
                           period;
                if (std::fabs(q) > spectral_cutoff() + 2.0) continue;
                coeff[j] = {0.0, q * b_hat(q)};
            }
            fft_inverse(coeff);
            std::size_t n = static_cast<std::size_t>(t.radius * t.inv_dx) + 4;
            t.v.resize(n);
            for (std::size_t i = 0; i < n; ++i) t.v[i] = coeff[i].real() / period;
            t.v[0] = 0.0;  // b' is odd
        } else {
            // Closed-form families: scan for the maximum, then truncate where
            // |b'| falls below 1e-14 of it for good.
            double scan_max = 0.0;
            for (double x = 0.0; x <= 60.0 * width; x += t.dx)
                scan_max = std::max(scan_max, std::fabs(b_prime(x)));
            double threshold = 1e-14 * scan_max;
            double radius = t.dx;
            for (double x = 60.0 * width; x > 0.0; x -= t.dx) {
                if (std::fabs(b_prime(x)) >= threshold) {
                    radius = x;
                    break;
                }
            }
            t.radius = radius;
            std::size_t n = static_cast<std::size_t>(t.radius * t.inv_dx) + 4;
            t.v.resize(n);
            for (std::size_t i = 0; i < n; ++i) t.v[i] = b_prime(static_cast<double>(i) * t.dx);
        }
        holder_->table = std::move(t);
    });
    return holder_->table;
}

double Kernel::b_prime_fast(double x) const {
    if (is_zero()) return 0.0;
    const DerivTable& t = table();
    double y = std::fabs(x);
    if (y >= t.radius) return 0.0;
    double u = y * t.inv_dx;
    auto i = static_cast<std::size_t>(u);
    double f = u - static_cast<double>(i);
    // 4-point Lagrange stencil {i-1, i, i+1, i+2}; odd extension at the origin.
    double vm1 = (i == 0) ? -t.v[1] : t.v[i - 1];
    double v0 = t.v[i], v1 = t.v[i + 1], v2 = t.v[i + 2];
    double wm1 = -f * (f - 1.0) * (f - 2.0) / 6.0;
    double w0 = (f * f - 1.0) * (f - 2.0) / 2.0;
    double w1 = -f * (f + 1.0) * (f - 2.0) / 2.0;
    double w2 = f * (f * f - 1.0) / 6.0;
    double val = wm1 * vm1 + w0 * v0 + w1 * v1 + w2 * v2;
    return x < 0.0 ? -val : val;
}

double Kernel::update_radius() const {
    if (is_zero()) return 0.0;
    return table().radius;
}

RhoSquaredResult rho_squared(const Kernel& k, const QuadratureOptions& opt) {
    if (k.is_zero()) return {true, 0.0};
    if (k.params().family != KernelFamily::summable) return {false, 0.0};
    double P = k.spectral_cutoff() + 2.0;
    auto r = integrate([&](double p) { return 2.0 * k.b_hat(p) / (p * p); }, 0.0, P, {1.0}, opt);
    return {true, r.value};
}

}  // namespace polymer
