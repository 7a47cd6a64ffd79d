#pragma once

#include <cstdint>
#include <vector>

#include "polymerlab/estimators.hpp"
#include "polymerlab/field.hpp"
#include "polymerlab/kernels.hpp"
#include "polymerlab/rng.hpp"

namespace polymer {

// Real even test profile on the frequency lattice. u_hat is stored per FFT
// index and is even under j -> N-j, which makes the node samples u real and
// even; u_hat is the continuum-normalized transform, so lattice pairings
// approximate their integral counterparts with the 1/L frequency measure.
struct TestFunction {
    GridSpec spec;
    std::vector<double> u_hat;
    std::vector<double> u;
};

// Smooth random profile u_hat(p) = (c0 + c1 p^2 + c2 p^4 + c3 p^6) e^{-p^2}
// supported on |p| <= p_cut, with standard normal coefficients, scaled so
// that pairing(u, u) = target. The zero kernel admits no such normalization
// and gets the unscaled profile.
TestFunction random_test_function(const Kernel& k, const GridSpec& spec, RngStream& rng,
                                  double target_pairing = 0.01, double p_cut = 4.0);

// Covariance pairing <u, b * v> = (1/L) sum_k u_hat_k v_hat_k b_hat_eff(p_k).
// Equals Cov(phi_u, phi_v) of the synthesized field exactly, zero mode
// included, because both sides share the same effective spectrum.
double pairing(const Kernel& k, const TestFunction& u, const TestFunction& v);

// phi_u(omega) = h sum_j u_j omega_j, the lattice linear functional whose law
// under the stationary field is N(mean_v * integral(u), pairing(u, u)).
double field_functional(const TestFunction& u, const FieldGrid& f);

double lattice_integral(const TestFunction& u);  // h sum_j u_j = u_hat at p = 0

// Stationarity drift of the moment-generating functional e^{phi_u}: the
// generator of the environment-seen-from-the-particle process applied to it
// and averaged over the stationary law,
//   e^{q/2} [ (1/2)<u'', b*u> + (1/2)<u', b*u'> + (1/2)t3^2 - t3 <u, b> ],
// t3 = <u', b*u>, q = pairing(u, u). The first two terms cancel exactly and
// t3 vanishes for real u_hat, so the drift is identically zero; flipping the
// sign of the gradient term breaks the cancellation and exposes the test's
// power.
double mgf_drift(const Kernel& k, const TestFunction& u, bool mutate_gradient_sign = false);

// Monte Carlo check of the Gaussian shift identities the stationarity proof
// rests on: E[Y e^X] = e^{q_xx/2} q_xy and
// E[Y Z e^X] = e^{q_xx/2} (q_yz + q_xy q_xz) for X = phi_u, Y = phi_v,
// Z = phi_w under the mean-zero stationary field.
struct GaussianIdentityCheck {
    MeanSe first_moment;     // MC estimate of E[Y e^X]
    double first_expected;   // closed form
    MeanSe second_moment;    // MC estimate of E[Y Z e^X]
    double second_expected;  // closed form
};

GaussianIdentityCheck gaussian_identity_check(const Kernel& k, const TestFunction& u,
                                              const TestFunction& v, const TestFunction& w,
                                              RngStream& rng, std::uint64_t n_samples);

// Observables of one polymer replica taken at fixed check times: the
// environment seen from the particle sampled at a set of spatial lags, the
// drift at the particle, and the position.
struct StationaryObservation {
    std::uint64_t replica = 0;
    std::vector<std::vector<double>> eta;  // [check][lag]
    std::vector<double> phi;               // drift at the particle per check
    std::vector<double> x;                 // position per check
};

struct StationaryEnsemble {
    GridSpec grid;
    double mean_v = 0.0;
    std::vector<double> t_checks;
    std::vector<double> lags;
    std::vector<StationaryObservation> records;
};

// Mean and covariance of the environment seen from the particle against the
// stationary law: mean_eta should stay at mean_v and the lag covariance at
// the synthesis covariance for every check time.
struct CovarianceCheckRow {
    double t = 0.0;
    double lag = 0.0;
    MeanSe mean_eta;
    double mean_target = 0.0;
    MeanSe cov;
    double cov_target = 0.0;
};

std::vector<CovarianceCheckRow> covariance_preservation(const StationaryEnsemble& ens,
                                                        const Kernel& k);

// Time-reversal symmetry of the stationary increments: odd moments of the
// drift integrand vanish and the forward cross moment
// E[(X(T) - X(T/2)) phi(eta(T))] matches the backward one
// E[(X(T/2) - X(0)) phi(eta(0))]. Requires check times {0, T/2, T}.
struct FlipCheck {
    double t_half = 0.0;
    double t_full = 0.0;
    MeanSe odd_first;   // E[phi(eta(T))]
    MeanSe odd_third;   // E[phi(eta(T))^3]
    MeanSe forward_cross;
    MeanSe backward_cross;
};

FlipCheck yaglom_flip_check(const StationaryEnsemble& ens);

}  // namespace polymer
