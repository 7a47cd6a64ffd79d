#include "polymerlab/bounds.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polymerlab/quadrature.hpp"

namespace polymer {

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances tuned so that every reported digit of the bound columns is
// stable: the resolvent integrals converge far below the 1e-8 relative
// residual the tests pin.
const QuadratureOptions kResolventOpts{1e-11, 1e-13, 400};
const QuadratureOptions kStiffeningOpts{1e-10, 1e-13, 400};
const QuadratureOptions kClosedOuterOpts{1e-8, 1e-14, 200};

}  // namespace

double resolvent_upper(const Kernel& k, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("bounds: lambda must be positive");
    if (k.is_zero()) return 0.0;
    const double upper = k.spectral_cutoff() + 2.0;
    const double root = std::sqrt(lambda);
    auto r = integrate([&](double p) { return k.b_hat(p) / (lambda + 0.5 * p * p); }, 0.0,
                       upper, {root, 10.0 * root}, kResolventOpts);
    return r.value / kPi;
}

double stiffening(const Kernel& k, double lambda, double p) {
    if (!(lambda > 0.0)) throw std::invalid_argument("bounds: lambda must be positive");
    if (k.is_zero()) return 0.0;
    const double upper = k.spectral_cutoff() + 2.0 + std::fabs(p);
    const double root = std::sqrt(lambda);
    auto r = integrate(
        [&](double q) {
            const double d = q - p;
            return k.b_hat(q) / (lambda + 0.5 * d * d);
        },
        -upper, upper, {0.0, p, p - root, p + root}, kStiffeningOpts);
    return r.value / kPi;
}

double lower_bound_closed(const Kernel& k, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("bounds: lambda must be positive");
    if (k.is_zero()) return 0.0;
    const double upper = k.spectral_cutoff() + 2.0;
    const double root = std::sqrt(lambda);
    // The integrand turns over where the stiffness term overtakes lambda in
    // the denominator; at small lambda that knee sits orders of magnitude
    // below sqrt(lambda) and the subdivision must be pointed at it.
    const double knee = std::sqrt(lambda / (0.5 + stiffening(k, lambda, 0.0)));
    auto r = integrate(
        [&](double p) {
            const double kp = stiffening(k, lambda, p);
            return k.b_hat(p) / (lambda + 0.5 * p * p + kp * p * p);
        },
        0.0, upper, {knee, root, 10.0 * root}, kClosedOuterOpts);
    return r.value / kPi;
}

FrequencyGrid variational_grid(const Kernel& k, double lambda, std::size_t points_per_side) {
    if (!(lambda > 0.0)) throw std::invalid_argument("bounds: lambda must be positive");
    if (points_per_side < 8)
        throw std::invalid_argument("variational_grid: need at least 8 points per side");
    const double alpha = k.infrared_exponent().value_or(0.0);
    const double p_min = std::pow(lambda, (3.0 - alpha) / 4.0) / 10.0;
    const double p_max = k.spectral_cutoff();
    if (!(p_min < p_max))
        throw std::invalid_argument("variational_grid: lambda too large for this kernel");

    const std::size_t n_half = points_per_side;
    const double ratio = std::log(p_max / p_min) / static_cast<double>(n_half - 1);
    std::vector<double> half(n_half);
    for (std::size_t i = 0; i < n_half; ++i)
        half[i] = p_min * std::exp(ratio * static_cast<double>(i));
    half.back() = p_max;

    FrequencyGrid g;
    const std::size_t n = 2 * n_half;
    g.p.resize(n);
    for (std::size_t i = 0; i < n_half; ++i) {
        g.p[i] = -half[n_half - 1 - i];
        g.p[n_half + i] = half[i];
    }
    g.w.resize(n);
    g.w[0] = 0.5 * (g.p[1] - g.p[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) g.w[i] = 0.5 * (g.p[i + 1] - g.p[i - 1]);
    g.w[n - 1] = 0.5 * (g.p[n - 1] - g.p[n - 2]);
    return g;
}

double lower_bound_variational(const Kernel& k, double lambda, const FrequencyGrid& grid) {
    if (k.is_zero()) return 0.0;
    if (grid.p.size() != grid.w.size() || grid.p.empty())
        throw std::invalid_argument("lower_bound_variational: malformed grid");
    const auto n = static_cast<Eigen::Index>(grid.p.size());

    Eigen::VectorXd p(n), ell(n), d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double pi_ = grid.p[static_cast<std::size_t>(i)];
        const double wi = grid.w[static_cast<std::size_t>(i)];
        const double bh = k.b_hat(pi_);
        p(i) = pi_;
        ell(i) = wi * bh;
        d(i) = wi * (lambda + 0.5 * pi_ * pi_) * bh;
    }

    Eigen::MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double dp = p(i) - p(j);
            c(i, j) = ell(i) * ell(j) / (lambda + 0.5 * dp * dp);
        }
    const Eigen::VectorXd row_sum = c.rowwise().sum();

    Eigen::MatrixXd quad_form =
        (p.array().square() * row_sum.array()).matrix().asDiagonal();
    quad_form.noalias() -= (p * p.transpose()).cwiseProduct(c);
    quad_form /= 2.0 * kPi;
    quad_form += d.asDiagonal();

    Eigen::LLT<Eigen::MatrixXd> llt(quad_form);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error(
            "lower_bound_variational: quadratic form is not positive definite; "
            "the grid or kernel is misconfigured");
    const Eigen::VectorXd u = llt.solve(ell);
    return ell.dot(u) / (2.0 * kPi);
}

double lower_bound_variational(const Kernel& k, double lambda) {
    if (k.is_zero()) return 0.0;
    return lower_bound_variational(k, lambda, variational_grid(k, lambda));
}

BoundsReport sandwich_report(const Kernel& k, const std::vector<double>& lambdas,
                             std::size_t points_per_side) {
    BoundsReport rep;
    rep.lambdas = lambdas;
    for (const double lam : lambdas) {
        const double up = resolvent_upper(k, lam);
        const double lo_closed = lower_bound_closed(k, lam);
        const double lo_var =
            k.is_zero() ? 0.0
                        : lower_bound_variational(k, lam, variational_grid(k, lam, points_per_side));
        rep.resolvent_upper.push_back(up);
        rep.lower_closed.push_back(lo_closed);
        rep.lower_variational.push_back(lo_var);
        const double inv2 = 1.0 / (lam * lam);
        rep.e_hat_upper.push_back(inv2 * (1.0 + 2.0 * up));
        rep.e_hat_lower.push_back(inv2 * (1.0 + 2.0 * lo_var));
    }
    if (lambdas.size() >= 2) {
        const double lo = *std::min_element(lambdas.begin(), lambdas.end());
        const double hi = *std::max_element(lambdas.begin(), lambdas.end());
        rep.upper_exponent = fit_exponent(lambdas, rep.e_hat_upper, lo, hi);
        rep.lower_exponent = fit_exponent(lambdas, rep.e_hat_lower, lo, hi);
    }
    return rep;
}

}  // namespace polymer
