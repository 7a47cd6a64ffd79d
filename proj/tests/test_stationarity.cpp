#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "polymerlab/estimators.hpp"
#include "polymerlab/field.hpp"
#include "polymerlab/kernels.hpp"
#include "polymerlab/rng.hpp"
#include "polymerlab/runner.hpp"
#include "polymerlab/stationarity.hpp"

using namespace polymer;

namespace {

const GridSpec kSpec{64.0, 512};

std::vector<Kernel> nonzero_catalog() {
    return {Kernel::make("gaussian", 1.0, 0.0, 1.0), Kernel::make("summable", 1.0, 0.0, 1.0),
            Kernel::make("power-ir", 1.0, 0.5, 1.0), Kernel::make("power-ir", 1.0, -0.5, 1.0)};
}

TestFunction draw_profile(const Kernel& k, std::uint64_t replica) {
    RngStream rng(31337, replica, StreamPurpose::test_function);
    return random_test_function(k, kSpec, rng);
}

// One moderately sized gaussian run shared by the statistical checks below.
const StationaryEnsemble& shared_gaussian_ensemble() {
    static const StationaryEnsemble ens = [] {
        StationaryRunParams p;
        p.kernel = KernelParams{};
        p.grid = kSpec;
        p.dt = 2e-3;
        p.mean_v = 0.0;
        p.t_checks = {0.0, 1.0, 2.0};
        p.lags = {-1.0, -0.25, 0.0, 0.25, 1.0};
        p.replicas = 600;
        p.seed = 777;
        p.threads = 2;
        return run_stationary_ensemble(p);
    }();
    return ens;
}

}  // namespace

TEST_CASE("random test profiles are even, band limited, and normalized") {
    auto k = Kernel::make("gaussian", 1.0, 0.0, 1.0);
    TestFunction tf = draw_profile(k, 0);
    REQUIRE(tf.u_hat.size() == 512);
    REQUIRE(tf.u.size() == 512);

    for (std::size_t j : {1u, 5u, 37u, 100u}) CHECK(tf.u_hat[j] == tf.u_hat[512 - j]);
    // p_cut = 4 on this grid keeps indices up to 40 and kills the rest.
    CHECK(tf.u_hat[40] != 0.0);
    CHECK(tf.u_hat[41] == 0.0);
    CHECK(tf.u_hat[256] == 0.0);
    for (std::size_t j : {1u, 17u, 200u}) CHECK(std::abs(tf.u[j] - tf.u[512 - j]) < 1e-12);

    CHECK(pairing(k, tf, tf) == doctest::Approx(0.01).epsilon(1e-12));

    auto zero = Kernel::make("gaussian", 0.0, 0.0, 1.0);
    TestFunction tz = draw_profile(zero, 1);
    CHECK(pairing(zero, tz, tz) == 0.0);
    bool any = false;
    for (double c : tz.u_hat) any = any || c != 0.0;
    CHECK(any);  // no normalization possible, profile left unscaled
}

TEST_CASE("pairing is symmetric, bilinear, and rejects grid mismatch") {
    auto k = Kernel::make("gaussian", 1.0, 0.0, 1.0);
    TestFunction u = draw_profile(k, 10);
    TestFunction v = draw_profile(k, 11);

    CHECK(pairing(k, u, v) == pairing(k, v, u));

    TestFunction w;
    w.spec = kSpec;
    w.u_hat.resize(512);
    w.u.resize(512);
    for (std::size_t j = 0; j < 512; ++j) {
        w.u_hat[j] = 2.0 * u.u_hat[j] + 3.0 * v.u_hat[j];
        w.u[j] = 2.0 * u.u[j] + 3.0 * v.u[j];
    }
    const double expanded =
        4.0 * pairing(k, u, u) + 12.0 * pairing(k, u, v) + 9.0 * pairing(k, v, v);
    CHECK(pairing(k, w, w) == doctest::Approx(expanded).epsilon(1e-10));

    TestFunction other;
    other.spec = GridSpec{64.0, 256};
    other.u_hat.resize(256, 0.0);
    other.u.resize(256, 0.0);
    CHECK_THROWS_AS(pairing(k, u, other), std::invalid_argument);

    RngStream rng(1, 0, StreamPurpose::field_sample);
    FieldGrid small = sample_stationary(k, GridSpec{64.0, 256}, rng);
    CHECK_THROWS_AS(field_functional(u, small), std::invalid_argument);
}

TEST_CASE("lattice integral equals the zero frequency coefficient") {
    for (const auto& k : nonzero_catalog()) {
        TestFunction tf = draw_profile(k, 20);
        CHECK(std::abs(lattice_integral(tf) - tf.u_hat[0]) < 1e-12);
    }
}

TEST_CASE("functional moments under sampled fields match the pairing") {
    auto k = Kernel::make("gaussian", 1.0, 0.0, 1.0);
    TestFunction u = draw_profile(k, 30);
    TestFunction v = draw_profile(k, 31);
    const double mean_v = 1.5;
    const std::size_t n = 4000;

    std::vector<double> xu(n), xv(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng(20202, i, StreamPurpose::field_sample);
        FieldGrid f = sample_stationary(k, kSpec, rng, mean_v);
        xu[i] = field_functional(u, f);
        xv[i] = field_functional(v, f);
    }

    MeanSe mu = jackknife_mean(xu);
    CHECK(std::abs(mu.mean - mean_v * lattice_integral(u)) < 4.0 * mu.se);

    MeanSe mv = jackknife_mean(xv);
    std::vector<double> var_terms(n), cov_terms(n);
    for (std::size_t i = 0; i < n; ++i) {
        var_terms[i] = (xu[i] - mu.mean) * (xu[i] - mu.mean);
        cov_terms[i] = (xu[i] - mu.mean) * (xv[i] - mv.mean);
    }
    MeanSe var = jackknife_mean(var_terms);
    CHECK(std::abs(var.mean - pairing(k, u, u)) < 4.0 * var.se);
    MeanSe cov = jackknife_mean(cov_terms);
    CHECK(std::abs(cov.mean - pairing(k, u, v)) < 4.0 * cov.se);
}

TEST_CASE("generator drift of the exponential functional vanishes identically") {
    for (const auto& k : nonzero_catalog()) {
        for (std::uint64_t d = 0; d < 20; ++d) {
            TestFunction tf = draw_profile(k, 100 + d);
            CHECK(mgf_drift(k, tf) == 0.0);
            // Flipping the gradient term leaves -<u', b*u'> < 0: the exact
            // cancellation is load bearing, not an accident of small numbers.
            CHECK(mgf_drift(k, tf, true) < 0.0);
        }
    }

    auto zero = Kernel::make("gaussian", 0.0, 0.0, 1.0);
    TestFunction tz = draw_profile(zero, 2);
    CHECK(mgf_drift(zero, tz) == 0.0);
    CHECK(mgf_drift(zero, tz, true) == 0.0);
}

TEST_CASE("Gaussian shift identities hold at Monte Carlo accuracy") {
    auto k = Kernel::make("gaussian", 1.0, 0.0, 1.0);
    TestFunction u = draw_profile(k, 40);
    TestFunction v = draw_profile(k, 41);
    TestFunction w = draw_profile(k, 42);

    // Strong-signal configuration: all three slots share one profile, so the
    // expected values sit tens of standard errors away from zero.
    RngStream rng1(555, 0, StreamPurpose::field_sample);
    GaussianIdentityCheck strong = gaussian_identity_check(k, u, u, u, rng1, 100000);
    CHECK(strong.first_expected > 0.009);
    CHECK(strong.first_moment.se > 0.0);
    CHECK(strong.first_moment.se < strong.first_expected / 6.0);
    CHECK(std::abs(strong.first_moment.mean - strong.first_expected) <
          4.0 * strong.first_moment.se);
    CHECK(strong.second_expected > 0.009);
    CHECK(strong.second_moment.se < strong.second_expected / 6.0);
    CHECK(std::abs(strong.second_moment.mean - strong.second_expected) <
          4.0 * strong.second_moment.se);

    RngStream rng2(556, 0, StreamPurpose::field_sample);
    GaussianIdentityCheck generic = gaussian_identity_check(k, u, v, w, rng2, 50000);
    CHECK(std::abs(generic.first_moment.mean - generic.first_expected) <
          4.0 * generic.first_moment.se);
    CHECK(std::abs(generic.second_moment.mean - generic.second_expected) <
          4.0 * generic.second_moment.se);

    auto zero = Kernel::make("gaussian", 0.0, 0.0, 1.0);
    RngStream rng3(557, 0, StreamPurpose::field_sample);
    GaussianIdentityCheck zc = gaussian_identity_check(zero, u, u, u, rng3, 100);
    CHECK(zc.first_expected == 0.0);
    CHECK(zc.first_moment.mean == 0.0);
    CHECK(zc.second_expected == 0.0);
    CHECK(zc.second_moment.mean == 0.0);
}

TEST_CASE("seen environment keeps its mean and lag covariance at later times") {
    const StationaryEnsemble& ens = shared_gaussian_ensemble();
    REQUIRE(ens.records.size() == 600);
    auto k = Kernel::make("gaussian", 1.0, 0.0, 1.0);

    auto rows = covariance_preservation(ens, k);
    REQUIRE(rows.size() == 15);  // 3 check times x 5 lags

    // Row layout is check-major: row 2 is t = 0, lag = 0.
    CHECK(rows[2].t == 0.0);
    CHECK(rows[2].lag == 0.0);
    CHECK(rows[2].cov_target == doctest::Approx(0.28209479177387814).epsilon(1e-9));

    for (const auto& row : rows) {
        CHECK(row.mean_target == 0.0);
        CHECK(row.mean_eta.se > 0.0);
        CHECK(std::abs(row.mean_eta.mean - row.mean_target) < 4.0 * row.mean_eta.se);
        CHECK(row.cov.se > 0.0);
        CHECK(std::abs(row.cov.mean - row.cov_target) < 4.0 * row.cov.se);
    }
}

TEST_CASE("drift carries the field mean through the dynamics") {
    StationaryRunParams p;
    p.kernel = KernelParams{};
    p.grid = kSpec;
    p.dt = 2e-3;
    p.mean_v = 1.5;
    p.t_checks = {0.0, 0.5};
    p.lags = {0.0, 0.25};
    p.replicas = 200;
    p.seed = 888;
    p.threads = 2;
    StationaryEnsemble ens = run_stationary_ensemble(p);

    auto rows = covariance_preservation(ens, Kernel::make("gaussian", 1.0, 0.0, 1.0));
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        CHECK(row.mean_target == 1.5);
        CHECK(std::abs(row.mean_eta.mean - 1.5) < 4.0 * row.mean_eta.se);
    }
}

TEST_CASE("time reversal symmetry of stationary increments") {
    const StationaryEnsemble& ens = shared_gaussian_ensemble();
    FlipCheck fc = yaglom_flip_check(ens);
    CHECK(fc.t_half == 1.0);
    CHECK(fc.t_full == 2.0);
    CHECK(fc.odd_first.se > 0.0);
    CHECK(std::abs(fc.odd_first.mean) < 4.0 * fc.odd_first.se);
    CHECK(fc.odd_third.se > 0.0);
    CHECK(std::abs(fc.odd_third.mean) < 4.0 * fc.odd_third.se);
    const double gap_se = std::hypot(fc.forward_cross.se, fc.backward_cross.se);
    CHECK(gap_se > 0.0);
    CHECK(std::abs(fc.forward_cross.mean - fc.backward_cross.mean) < 4.0 * gap_se);
}

TEST_CASE("diagnostics reject ensembles missing their reference points") {
    StationaryEnsemble ens;
    ens.grid = kSpec;
    ens.t_checks = {0.0, 2.0};  // no half-time observation
    ens.lags = {0.25};          // no zero lag
    ens.records.resize(3);
    for (auto& rec : ens.records) {
        rec.eta = {{0.0}, {0.0}};
        rec.phi = {0.0, 0.0};
        rec.x = {0.0, 0.0};
    }
    auto k = Kernel::make("gaussian", 1.0, 0.0, 1.0);
    CHECK_THROWS_AS(covariance_preservation(ens, k), std::invalid_argument);
    CHECK_THROWS_AS(yaglom_flip_check(ens), std::invalid_argument);

    StationaryEnsemble lone;
    lone.grid = kSpec;
    lone.t_checks = {0.0};
    lone.lags = {0.0};
    lone.records.resize(1);
    lone.records[0].eta = {{0.0}};
    lone.records[0].phi = {0.0};
    lone.records[0].x = {0.0};
    CHECK_THROWS_AS(covariance_preservation(lone, k), std::invalid_argument);
}
