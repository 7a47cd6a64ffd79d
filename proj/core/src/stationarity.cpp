#include "polymerlab/stationarity.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "polymerlab/spectral.hpp"

namespace polymer {

namespace {

std::size_t index_of(const std::vector<double>& xs, double x, const char* what) {
    const double tol = 1e-9 * std::max(1.0, std::fabs(x));
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (std::fabs(xs[i] - x) <= tol) return i;
    throw std::invalid_argument(std::string("stationarity: missing required ") + what);
}

double effective_b_hat(const Kernel& k, const GridSpec& spec, std::size_t fft_index) {
    if (fft_index == 0) return zero_mode_weight(k, spec);
    return k.b_hat(spec.frequency(fft_index));
}

}  // namespace

TestFunction random_test_function(const Kernel& k, const GridSpec& spec, RngStream& rng,
                                  double target_pairing, double p_cut) {
    spec.validate();
    const std::size_t n = spec.num_points_N;
    const double c0 = rng.normal();
    const double c1 = rng.normal();
    const double c2 = rng.normal();
    const double c3 = rng.normal();

    TestFunction tf;
    tf.spec = spec;
    tf.u_hat.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double p = spec.frequency(j);
        if (std::fabs(p) > p_cut) continue;
        const double p2 = p * p;
        tf.u_hat[j] = (c0 + c1 * p2 + c2 * p2 * p2 + c3 * p2 * p2 * p2) * std::exp(-p2);
    }

    const double q = pairing(k, tf, tf);
    if (!k.is_zero() && q > 0.0) {
        const double scale = std::sqrt(target_pairing / q);
        for (double& c : tf.u_hat) c *= scale;
    }

    std::vector<std::complex<double>> buf(n);
    for (std::size_t j = 0; j < n; ++j) buf[j] = tf.u_hat[j];
    fft_inverse(buf);
    tf.u.resize(n);
    const double inv_l = 1.0 / spec.length_L;
    for (std::size_t j = 0; j < n; ++j) tf.u[j] = buf[j].real() * inv_l;
    return tf;
}

double pairing(const Kernel& k, const TestFunction& u, const TestFunction& v) {
    if (u.spec.num_points_N != v.spec.num_points_N || u.spec.length_L != v.spec.length_L)
        throw std::invalid_argument("pairing: grid mismatch");
    double acc = 0.0;
    for (std::size_t j = 0; j < u.u_hat.size(); ++j)
        acc += u.u_hat[j] * v.u_hat[j] * effective_b_hat(k, u.spec, j);
    return acc / u.spec.length_L;
}

double field_functional(const TestFunction& u, const FieldGrid& f) {
    if (u.u.size() != f.values.size())
        throw std::invalid_argument("field_functional: grid mismatch");
    double acc = 0.0;
    for (std::size_t j = 0; j < u.u.size(); ++j) acc += u.u[j] * f.values[j];
    return acc * u.spec.spacing();
}

double lattice_integral(const TestFunction& u) {
    double acc = 0.0;
    for (double x : u.u) acc += x;
    return acc * u.spec.spacing();
}

double mgf_drift(const Kernel& k, const TestFunction& u, bool mutate_gradient_sign) {
    const std::size_t n = u.spec.num_points_N;
    const double inv_l = 1.0 / u.spec.length_L;

    // The two quadratic terms are accumulated in the same index order from
    // exactly negated summands, so the half-sum below cancels bitwise rather
    // than to roundoff.
    double second_deriv_term = 0.0;  // <u'', b*u>
    double gradient_term = 0.0;      // <u', b*u'>
    std::complex<double> first_deriv_acc{0.0, 0.0};
    double mean_term = 0.0;  // <u, b>
    for (std::size_t j = 0; j < n; ++j) {
        const double bh = effective_b_hat(k, u.spec, j);
        const double uh = u.u_hat[j];
        const double p = (j == n / 2) ? 0.0 : u.spec.frequency(j);  // derivative convention
        const double core = uh * uh * bh;
        second_deriv_term += (-(p * p)) * core;
        gradient_term += (p * p) * core;
        first_deriv_acc += std::complex<double>{0.0, p * core};
        mean_term += uh * bh;
    }
    second_deriv_term *= inv_l;
    gradient_term *= inv_l;
    mean_term *= inv_l;
    const double t3 = first_deriv_acc.real() * inv_l;

    if (mutate_gradient_sign) gradient_term = -gradient_term;

    const double q = pairing(k, u, u);
    const double bracket =
        0.5 * second_deriv_term + 0.5 * gradient_term + 0.5 * t3 * t3 - t3 * mean_term;
    return std::exp(0.5 * q) * bracket;
}

GaussianIdentityCheck gaussian_identity_check(const Kernel& k, const TestFunction& u,
                                              const TestFunction& v, const TestFunction& w,
                                              RngStream& rng, std::uint64_t n_samples) {
    const double q_uu = pairing(k, u, u);
    const double q_uv = pairing(k, u, v);
    const double q_uw = pairing(k, u, w);
    const double q_vw = pairing(k, v, w);

    std::vector<double> first(n_samples), second(n_samples);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const FieldGrid f = sample_stationary(k, u.spec, rng, 0.0);
        const double x = field_functional(u, f);
        const double y = field_functional(v, f);
        const double z = field_functional(w, f);
        const double ex = std::exp(x);
        first[i] = y * ex;
        second[i] = y * z * ex;
    }

    GaussianIdentityCheck out;
    out.first_moment = jackknife_mean(first);
    out.first_expected = std::exp(0.5 * q_uu) * q_uv;
    out.second_moment = jackknife_mean(second);
    out.second_expected = std::exp(0.5 * q_uu) * (q_vw + q_uv * q_uw);
    return out;
}

std::vector<CovarianceCheckRow> covariance_preservation(const StationaryEnsemble& ens,
                                                        const Kernel& k) {
    const std::size_t ref = index_of(ens.lags, 0.0, "zero lag");
    const std::size_t n = ens.records.size();
    if (n < 2) throw std::invalid_argument("covariance_preservation: need at least 2 replicas");

    std::vector<CovarianceCheckRow> rows;
    std::vector<double> vals(n), loo(n);
    for (std::size_t ci = 0; ci < ens.t_checks.size(); ++ci) {
        for (std::size_t li = 0; li < ens.lags.size(); ++li) {
            CovarianceCheckRow row;
            row.t = ens.t_checks[ci];
            row.lag = ens.lags[li];
            row.mean_target = ens.mean_v;
            row.cov_target = synthesis_covariance(k, ens.grid, ens.lags[li]);

            double sx = 0.0, sy = 0.0, sxy = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const double x = ens.records[r].eta[ci][ref];
                const double y = ens.records[r].eta[ci][li];
                vals[r] = y;
                sx += x;
                sy += y;
                sxy += x * y;
            }
            row.mean_eta = jackknife_mean(vals);

            const auto nn = static_cast<double>(n);
            auto cov_of = [](double m, double a, double b, double ab) {
                return (ab - a * b / m) / (m - 1.0);
            };
            double loo_mean = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const double x = ens.records[r].eta[ci][ref];
                const double y = ens.records[r].eta[ci][li];
                loo[r] = cov_of(nn - 1.0, sx - x, sy - y, sxy - x * y);
                loo_mean += loo[r];
            }
            loo_mean /= nn;
            double ss = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const double d = loo[r] - loo_mean;
                ss += d * d;
            }
            row.cov = {cov_of(nn, sx, sy, sxy), std::sqrt(ss * (nn - 1.0) / nn)};
            rows.push_back(row);
        }
    }
    return rows;
}

FlipCheck yaglom_flip_check(const StationaryEnsemble& ens) {
    double t_full = 0.0;
    for (double t : ens.t_checks) t_full = std::max(t_full, t);
    const std::size_t i0 = index_of(ens.t_checks, 0.0, "check time 0");
    const std::size_t ih = index_of(ens.t_checks, 0.5 * t_full, "check time T/2");
    const std::size_t it = index_of(ens.t_checks, t_full, "check time T");

    const std::size_t n = ens.records.size();
    std::vector<double> m1(n), m3(n), fwd(n), bwd(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& rec = ens.records[r];
        const double p_end = rec.phi[it];
        m1[r] = p_end;
        m3[r] = p_end * p_end * p_end;
        fwd[r] = (rec.x[it] - rec.x[ih]) * p_end;
        bwd[r] = (rec.x[ih] - rec.x[i0]) * rec.phi[i0];
    }

    FlipCheck out;
    out.t_half = ens.t_checks[ih];
    out.t_full = t_full;
    out.odd_first = jackknife_mean(m1);
    out.odd_third = jackknife_mean(m3);
    out.forward_cross = jackknife_mean(fwd);
    out.backward_cross = jackknife_mean(bwd);
    return out;
}

}  // namespace polymer
