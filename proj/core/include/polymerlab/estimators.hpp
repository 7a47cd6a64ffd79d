#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace polymer {

// Observables of one replica sampled on a shared output-time grid.
struct PathRecord {
    std::uint64_t replica = 0;
    std::vector<double> x;               // X(t_i)
    std::vector<double> brownian;        // B(t_i)
    std::vector<double> drift_integral;  // Phi(t_i) = \int_0^{t_i} zeta(s, X(s)) ds
    std::vector<double> drift;           // zeta(t_i, X(t_i)), the drift integrand
};

struct ReplicaSet {
    std::vector<double> times;
    std::vector<PathRecord> records;  // sorted by replica index, indices unique
};

// Combination is concatenate + sort by replica index, and every statistic is
// a single fold over the sorted set, so any merge tree gives bit-identical
// numbers. Duplicate replica indices are rejected: they would make the sort
// order depend on merge shape.
ReplicaSet merge(ReplicaSet a, ReplicaSet b);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

// mean with jackknife standard error; se is NaN for fewer than 2 values
MeanSe jackknife_mean(const std::vector<double>& values);

// sample variance with a leave-one-out standard error; se is NaN below 3 values
MeanSe jackknife_variance(const std::vector<double>& values);

struct EnsembleStats {
    std::vector<double> times;
    std::uint64_t replica_count = 0;
    bool se_flagged = false;  // single replica: se columns carry NaN
    std::vector<MeanSe> mean_x;
    std::vector<MeanSe> e_of_t;  // E(t) = E[X(t)^2]
    std::vector<MeanSe> d_of_t;  // E(t)/t, NaN at t = 0
};

EnsembleStats merge_stats(const ReplicaSet& set);

struct ExponentFit {
    double exponent = 0.0;
    double exponent_se = 0.0;  // NaN with fewer than 3 points
    double log_prefactor = 0.0;
};

// least-squares slope of log y against log t over t in [t_min, t_max]
ExponentFit fit_exponent(const std::vector<double>& times, const std::vector<double>& values,
                         double t_min, double t_max);

struct LaplaceEstimate {
    std::vector<double> lambdas;
    std::vector<double> value;      // \int_0^\infty e^{-lambda t} E(t) dt estimate
    std::vector<double> tail_part;  // contribution beyond the horizon
};

// Trapezoid transform of E on its grid plus a tail extrapolated with a
// t^{3/2} growth model. The grid must start at t = 0, and every lambda must
// satisfy lambda >= 5/horizon so the tail stays a small correction.
LaplaceEstimate laplace_transform(const std::vector<double>& times,
                                  const std::vector<double>& e_of_t,
                                  const std::vector<double>& lambdas);

// Tauberian consistency table: for E(t) ~ t^kappa the ratio
// E(t) * t / laplace(1/t) tends to 1/Gamma(kappa+1). Rows cover the grid
// times with 1/t inside the admissible lambda range.
struct TauberRow {
    double t = 0.0;
    double ratio = 0.0;
};

std::vector<TauberRow> tauber_report(const std::vector<double>& times,
                                     const std::vector<double>& e_of_t);

// Stationary autocovariance of the drift integrand phi(eta(t)), averaged over
// time pairs from t_from on and over replicas (jackknife se across replicas).
// Lags are multiples of the uniform grid step.
struct Autocorrelation {
    std::vector<double> lags;
    std::vector<MeanSe> c;
};

Autocorrelation autocorrelation(const ReplicaSet& set, double t_from, double max_lag);

// Truncated Laplace transform of the autocovariance with the tail frozen at
// its last value: \int_0^\infty e^{-lambda s} C(s) ds.
double mc_resolvent(const Autocorrelation& corr, double lambda);

// Second-moment decomposition of an increment window (s, t) through
// X = B + Phi: E dX^2 against (t-s) + E dPhi^2 + 2 E dB dPhi.
struct YaglomWindow {
    double s = 0.0;
    double t = 0.0;
    MeanSe lhs;              // E (X_t - X_s)^2
    MeanSe martingale_part;  // E (B_t - B_s)^2, equals t - s in law
    MeanSe drift_part;       // E (Phi_t - Phi_s)^2
    MeanSe cross;            // E (B_t - B_s)(Phi_t - Phi_s)
    MeanSe cross_corr;       // normalized correlation of the two increments
};

std::vector<YaglomWindow> yaglom_decomposition(
    const ReplicaSet& set, const std::vector<std::pair<double, double>>& windows);

}  // namespace polymer
