#include "polymerlab/estimators.hpp"

#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polymer {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

bool same_grid(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

std::size_t index_of_time(const std::vector<double>& times, double t) {
    const double tol = 1e-9 * std::max(1.0, std::fabs(t));
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::fabs(times[i] - t) <= tol) return i;
    throw std::invalid_argument("requested time is not on the output grid");
}

double uniform_step(const std::vector<double>& times) {
    if (times.size() < 2) throw std::invalid_argument("autocorrelation: need at least 2 times");
    const double dt = times[1] - times[0];
    for (std::size_t i = 1; i + 1 < times.size(); ++i)
        if (std::fabs(times[i + 1] - times[i] - dt) > 1e-9 * std::max(1.0, std::fabs(dt)))
            throw std::invalid_argument("autocorrelation: output grid must be uniform");
    return dt;
}

}  // namespace

ReplicaSet merge(ReplicaSet a, ReplicaSet b) {
    if (a.records.empty() && a.times.empty()) return b;
    if (b.records.empty() && b.times.empty()) return a;
    if (!same_grid(a.times, b.times))
        throw std::invalid_argument("merge: output-time grids differ");
    a.records.reserve(a.records.size() + b.records.size());
    for (auto& r : b.records) a.records.push_back(std::move(r));
    std::sort(a.records.begin(), a.records.end(),
              [](const PathRecord& x, const PathRecord& y) { return x.replica < y.replica; });
    for (std::size_t i = 1; i < a.records.size(); ++i)
        if (a.records[i - 1].replica == a.records[i].replica)
            throw std::invalid_argument("merge: duplicate replica index");
    return a;
}

MeanSe jackknife_mean(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n == 0) return {kNan, kNan};
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);
    if (n < 2) return {mean, kNan};
    double ss = 0.0;
    for (double v : values) {
        const double d = v - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / (static_cast<double>(n) * static_cast<double>(n - 1)))};
}

MeanSe jackknife_variance(const std::vector<double>& values) {
    const auto n = static_cast<double>(values.size());
    if (values.empty()) return {kNan, kNan};
    double s1 = 0.0, s2 = 0.0;
    for (double v : values) {
        s1 += v;
        s2 += v * v;
    }
    if (values.size() < 2) return {kNan, kNan};
    auto var_of = [](double m, double a, double aa) { return (aa - a * a / m) / (m - 1.0); };
    if (values.size() < 3) return {var_of(n, s1, s2), kNan};
    std::vector<double> loo(values.size());
    double loo_mean = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        loo[i] = var_of(n - 1.0, s1 - values[i], s2 - values[i] * values[i]);
        loo_mean += loo[i];
    }
    loo_mean /= n;
    double ss = 0.0;
    for (double l : loo) {
        const double d = l - loo_mean;
        ss += d * d;
    }
    return {var_of(n, s1, s2), std::sqrt(ss * (n - 1.0) / n)};
}

EnsembleStats merge_stats(const ReplicaSet& set) {
    EnsembleStats out;
    out.times = set.times;
    out.replica_count = set.records.size();
    out.se_flagged = out.replica_count < 2;

    const std::size_t nt = set.times.size();
    std::vector<double> xs(set.records.size()), x2(set.records.size());
    out.mean_x.resize(nt);
    out.e_of_t.resize(nt);
    out.d_of_t.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t r = 0; r < set.records.size(); ++r) {
            xs[r] = set.records[r].x[i];
            x2[r] = xs[r] * xs[r];
        }
        out.mean_x[i] = jackknife_mean(xs);
        out.e_of_t[i] = jackknife_mean(x2);
        const double t = set.times[i];
        if (t > 0.0) {
            out.d_of_t[i] = {out.e_of_t[i].mean / t, out.e_of_t[i].se / t};
        } else {
            out.d_of_t[i] = {kNan, kNan};
        }
    }
    return out;
}

ExponentFit fit_exponent(const std::vector<double>& times, const std::vector<double>& values,
                         double t_min, double t_max) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit_exponent: size mismatch");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const double tol = 1e-9 * std::max(1.0, std::fabs(t));
        if (t < t_min - tol || t > t_max + tol) continue;
        if (!(t > 0.0) || !(values[i] > 0.0))
            throw std::invalid_argument("fit_exponent: needs positive times and values");
        lx.push_back(std::log(t));
        ly.push_back(std::log(values[i]));
    }
    const std::size_t n = lx.size();
    if (n < 2) throw std::invalid_argument("fit_exponent: fewer than 2 points in window");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = lx[i] - mx;
        sxx += dx * dx;
        sxy += dx * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_exponent: degenerate time window");

    ExponentFit fit;
    fit.exponent = sxy / sxx;
    fit.log_prefactor = my - fit.exponent * mx;
    if (n < 3) {
        fit.exponent_se = kNan;
        return fit;
    }
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.log_prefactor + fit.exponent * lx[i]);
        rss += r * r;
    }
    fit.exponent_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    return fit;
}

LaplaceEstimate laplace_transform(const std::vector<double>& times,
                                  const std::vector<double>& e_of_t,
                                  const std::vector<double>& lambdas) {
    if (times.size() != e_of_t.size() || times.size() < 2)
        throw std::invalid_argument("laplace_transform: bad input sizes");
    if (std::fabs(times.front()) > 1e-12)
        throw std::invalid_argument("laplace_transform: grid must start at t = 0");
    const double horizon = times.back();
    LaplaceEstimate out;
    out.lambdas = lambdas;
    out.value.reserve(lambdas.size());
    out.tail_part.reserve(lambdas.size());
    for (const double lam : lambdas) {
        if (!(lam * horizon >= 5.0 * (1.0 - 1e-12)))
            throw std::invalid_argument(
                "laplace_transform: lambda below 5/horizon, tail would dominate");
        double acc = 0.0;
        double g_prev = e_of_t[0];  // e^{-lam*0}
        for (std::size_t i = 1; i < times.size(); ++i) {
            const double g = std::exp(-lam * times[i]) * e_of_t[i];
            acc += 0.5 * (g_prev + g) * (times[i] - times[i - 1]);
            g_prev = g;
        }
        const double tail = e_of_t.back() * std::pow(horizon, -1.5) * std::pow(lam, -2.5) *
                            gsl_sf_gamma_inc(2.5, lam * horizon);
        out.value.push_back(acc + tail);
        out.tail_part.push_back(tail);
    }
    return out;
}

std::vector<TauberRow> tauber_report(const std::vector<double>& times,
                                     const std::vector<double>& e_of_t) {
    const double horizon = times.empty() ? 0.0 : times.back();
    std::vector<double> usable;
    for (const double t : times)
        if (t > 0.0 && 1.0 / t >= 5.0 / horizon * (1.0 - 1e-12)) usable.push_back(t);
    std::vector<TauberRow> rows;
    if (usable.empty()) return rows;
    std::vector<double> lams;
    lams.reserve(usable.size());
    for (const double t : usable) lams.push_back(1.0 / t);
    const LaplaceEstimate lap = laplace_transform(times, e_of_t, lams);
    for (std::size_t i = 0; i < usable.size(); ++i) {
        const double t = usable[i];
        const double e_here = e_of_t[index_of_time(times, t)];
        rows.push_back({t, e_here * t / lap.value[i]});
    }
    return rows;
}

Autocorrelation autocorrelation(const ReplicaSet& set, double t_from, double max_lag) {
    const double dt = uniform_step(set.times);
    const std::size_t nt = set.times.size();
    std::size_t i0 = 0;
    while (i0 < nt && set.times[i0] < t_from - 1e-9) ++i0;
    const auto m_max = static_cast<std::size_t>(std::floor(max_lag / dt + 1e-9));
    if (i0 >= nt || i0 + m_max >= nt)
        throw std::invalid_argument("autocorrelation: window exceeds the output grid");

    Autocorrelation out;
    out.lags.reserve(m_max + 1);
    out.c.reserve(m_max + 1);
    std::vector<double> per_replica(set.records.size());
    for (std::size_t m = 0; m <= m_max; ++m) {
        for (std::size_t r = 0; r < set.records.size(); ++r) {
            const auto& d = set.records[r].drift;
            double acc = 0.0;
            const std::size_t last = nt - 1 - m;
            for (std::size_t i = i0; i <= last; ++i) acc += d[i] * d[i + m];
            per_replica[r] = acc / static_cast<double>(last - i0 + 1);
        }
        out.lags.push_back(static_cast<double>(m) * dt);
        out.c.push_back(jackknife_mean(per_replica));
    }
    return out;
}

double mc_resolvent(const Autocorrelation& corr, double lambda) {
    if (corr.lags.size() < 2) throw std::invalid_argument("mc_resolvent: need at least 2 lags");
    if (!(lambda > 0.0)) throw std::invalid_argument("mc_resolvent: lambda must be positive");
    double acc = 0.0;
    double g_prev = corr.c[0].mean;
    for (std::size_t i = 1; i < corr.lags.size(); ++i) {
        const double g = std::exp(-lambda * corr.lags[i]) * corr.c[i].mean;
        acc += 0.5 * (g_prev + g) * (corr.lags[i] - corr.lags[i - 1]);
        g_prev = g;
    }
    const double s_max = corr.lags.back();
    return acc + corr.c.back().mean * std::exp(-lambda * s_max) / lambda;
}

std::vector<YaglomWindow> yaglom_decomposition(
    const ReplicaSet& set, const std::vector<std::pair<double, double>>& windows) {
    std::vector<YaglomWindow> out;
    const std::size_t n = set.records.size();
    std::vector<double> dx2(n), db2(n), dp2(n), cr(n);
    for (const auto& [s, t] : windows) {
        const std::size_t is = index_of_time(set.times, s);
        const std::size_t it = index_of_time(set.times, t);
        YaglomWindow w;
        w.s = s;
        w.t = t;
        double sb = 0.0, sp = 0.0, sbb = 0.0, spp = 0.0, sbp = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const auto& rec = set.records[r];
            const double ddx = rec.x[it] - rec.x[is];
            const double ddb = rec.brownian[it] - rec.brownian[is];
            const double ddp = rec.drift_integral[it] - rec.drift_integral[is];
            dx2[r] = ddx * ddx;
            db2[r] = ddb * ddb;
            dp2[r] = ddp * ddp;
            cr[r] = ddb * ddp;
            sb += ddb;
            sp += ddp;
            sbb += ddb * ddb;
            spp += ddp * ddp;
            sbp += ddb * ddp;
        }
        w.lhs = jackknife_mean(dx2);
        w.martingale_part = jackknife_mean(db2);
        w.drift_part = jackknife_mean(dp2);
        w.cross = jackknife_mean(cr);

        // Jackknife of the increment correlation via leave-one-out sums.
        if (n >= 2) {
            const auto nn = static_cast<double>(n);
            auto corr_of = [](double m, double b, double p, double bb, double pp, double bp) {
                const double vb = bb / m - (b / m) * (b / m);
                const double vp = pp / m - (p / m) * (p / m);
                const double cv = bp / m - (b / m) * (p / m);
                const double denom = std::sqrt(vb * vp);
                return denom > 0.0 ? cv / denom : 0.0;
            };
            const double full = corr_of(nn, sb, sp, sbb, spp, sbp);
            std::vector<double> loo(n);
            double loo_mean = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const auto& rec = set.records[r];
                const double ddb = rec.brownian[it] - rec.brownian[is];
                const double ddp = rec.drift_integral[it] - rec.drift_integral[is];
                loo[r] = corr_of(nn - 1.0, sb - ddb, sp - ddp, sbb - ddb * ddb,
                                 spp - ddp * ddp, sbp - ddb * ddp);
                loo_mean += loo[r];
            }
            loo_mean /= nn;
            double ss = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const double d = loo[r] - loo_mean;
                ss += d * d;
            }
            w.cross_corr = {full, std::sqrt(ss * (nn - 1.0) / nn)};
        } else {
            w.cross_corr = {kNan, kNan};
        }
        out.push_back(w);
    }
    return out;
}

}  // namespace polymer
