#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "polymerlab/estimators.hpp"
#include "polymerlab/rng.hpp"

using namespace polymer;

namespace {

std::vector<double> uniform_times(double step, double horizon) {
    std::vector<double> t;
    for (double x = 0.0; x <= horizon + 1e-12; x += step) t.push_back(x);
    return t;
}

PathRecord random_record(std::uint64_t replica, std::size_t nt, std::uint64_t seed) {
    RngStream rng(seed, replica, StreamPurpose::path_noise);
    PathRecord r;
    r.replica = replica;
    r.x.resize(nt);
    r.brownian.resize(nt);
    r.drift_integral.resize(nt);
    r.drift.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        r.brownian[i] = rng.normal();
        r.drift_integral[i] = rng.normal();
        r.x[i] = r.brownian[i] + r.drift_integral[i];
        r.drift[i] = rng.normal();
    }
    return r;
}

ReplicaSet random_set(std::uint64_t first, std::uint64_t count, std::size_t nt,
                      std::uint64_t seed) {
    ReplicaSet s;
    s.times = uniform_times(1.0, static_cast<double>(nt - 1));
    for (std::uint64_t r = first; r < first + count; ++r) {
        s.records.push_back(random_record(r, nt, seed));
    }
    return s;
}

}  // namespace

TEST_CASE("merge is associative and order-insensitive, bit for bit") {
    auto a = random_set(0, 3, 5, 11);
    auto b = random_set(3, 2, 5, 11);
    auto c = random_set(5, 4, 5, 11);
    auto left = merge(merge(a, b), c);
    auto right = merge(a, merge(b, c));
    auto swapped = merge(c, merge(b, a));
    REQUIRE(left.records.size() == 9);
    for (std::size_t r = 0; r < 9; ++r) {
        for (std::size_t i = 0; i < left.times.size(); ++i) {
            CHECK(left.records[r].x[i] == right.records[r].x[i]);
            CHECK(left.records[r].x[i] == swapped.records[r].x[i]);
        }
    }
    auto ls = merge_stats(left);
    auto rs = merge_stats(swapped);
    for (std::size_t i = 0; i < ls.times.size(); ++i) {
        CHECK(ls.e_of_t[i].mean == rs.e_of_t[i].mean);
        CHECK(ls.e_of_t[i].se == rs.e_of_t[i].se);
    }
}

TEST_CASE("merge rejects duplicates and mismatched grids; empty is identity") {
    auto a = random_set(0, 3, 5, 7);
    auto dup = random_set(2, 2, 5, 7);
    CHECK_THROWS_AS(merge(a, dup), std::invalid_argument);

    auto other = random_set(10, 1, 6, 7);
    CHECK_THROWS_AS(merge(a, other), std::invalid_argument);

    ReplicaSet empty;
    auto m = merge(empty, a);
    CHECK(m.records.size() == a.records.size());
}

TEST_CASE("single-record statistics are flagged") {
    ReplicaSet s;
    s.times = {0.0, 1.0};
    PathRecord r;
    r.replica = 0;
    r.x = {0.0, 2.0};
    r.brownian = {0.0, 2.0};
    r.drift_integral = {0.0, 0.0};
    r.drift = {0.0, 0.0};
    s.records.push_back(r);
    auto st = merge_stats(s);
    CHECK(st.se_flagged);
    CHECK(st.e_of_t[1].mean == 4.0);
    CHECK(std::isnan(st.e_of_t[1].se));
    CHECK(std::isnan(st.d_of_t[0].mean));  // t = 0 leaves the ratio undefined
    CHECK(st.d_of_t[1].mean == 4.0);
}

TEST_CASE("two symmetric records") {
    ReplicaSet s;
    s.times = {0.0, 1.0};
    for (int sign : {-1, +1}) {
        PathRecord r;
        r.replica = sign < 0 ? 0 : 1;
        const double a = 1.5 * sign;
        r.x = {0.0, a};
        r.brownian = {0.0, a};
        r.drift_integral = {0.0, 0.0};
        r.drift = {0.0, 0.0};
        s.records.push_back(r);
    }
    auto st = merge_stats(s);
    CHECK(st.mean_x[1].mean == 0.0);
    CHECK(st.e_of_t[1].mean == doctest::Approx(2.25).epsilon(1e-15));
}

TEST_CASE("jackknife error equals sd over sqrt(n)") {
    std::vector<double> v = {1.0, 2.0, 4.0, 8.0, 16.0};
    auto m = jackknife_mean(v);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= 5.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    CHECK(m.mean == doctest::Approx(mean).epsilon(1e-15));
    CHECK(m.se == doctest::Approx(std::sqrt(ss / (5.0 * 4.0))).epsilon(1e-14));
}

TEST_CASE("standard errors shrink like one over root replica count") {
    const std::size_t nt = 3;
    auto full = random_set(0, 4000, nt, 313);
    ReplicaSet half;
    half.times = full.times;
    half.records.assign(full.records.begin(), full.records.begin() + 2000);
    auto sf = merge_stats(full);
    auto sh = merge_stats(half);
    for (std::size_t i = 0; i < nt; ++i) {
        const double ratio = sh.e_of_t[i].se / sf.e_of_t[i].se;
        CHECK(ratio > 1.30);
        CHECK(ratio < 1.53);
    }
}

TEST_CASE("transform of linear growth") {
    auto t = uniform_times(0.1, 100.0);
    std::vector<double> e(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) e[i] = t[i];
    auto lap = laplace_transform(t, e, {0.1, 0.5, 1.0});
    for (std::size_t i = 0; i < lap.lambdas.size(); ++i) {
        const double lam = lap.lambdas[i];
        CHECK(lap.value[i] == doctest::Approx(1.0 / (lam * lam)).epsilon(0.01));
    }
    CHECK(lap.tail_part[0] < 0.01 * lap.value[0]);
}

TEST_CASE("transform of quadratic growth") {
    auto t = uniform_times(0.1, 100.0);
    std::vector<double> e(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) e[i] = t[i] * t[i];
    auto lap = laplace_transform(t, e, {0.1, 0.5, 1.0});
    for (std::size_t i = 0; i < lap.lambdas.size(); ++i) {
        const double lam = lap.lambdas[i];
        CHECK(lap.value[i] == doctest::Approx(2.0 / (lam * lam * lam)).epsilon(0.01));
    }
}

TEST_CASE("transform of fractional growth against the Gamma form") {
    auto t = uniform_times(0.1, 100.0);
    std::vector<double> e(t.size());
    const double C = 3.0;
    for (std::size_t i = 0; i < t.size(); ++i) e[i] = C * std::pow(t[i], 1.4);
    auto lap = laplace_transform(t, e, {0.1, 0.5, 1.0});
    const double gamma_2_4 = 1.242169344504305;
    for (std::size_t i = 0; i < lap.lambdas.size(); ++i) {
        const double lam = lap.lambdas[i];
        CHECK(lap.value[i] ==
              doctest::Approx(C * gamma_2_4 * std::pow(lam, -2.4)).epsilon(0.02));
    }
}

TEST_CASE("truncation guard and input validation") {
    auto t = uniform_times(0.1, 100.0);
    std::vector<double> e(t.size(), 1.0);
    CHECK_THROWS_AS(laplace_transform(t, e, {0.04}), std::invalid_argument);
    CHECK_NOTHROW(laplace_transform(t, e, {0.05}));

    std::vector<double> shifted(t.begin() + 1, t.end());
    std::vector<double> es(e.begin() + 1, e.end());
    CHECK_THROWS_AS(laplace_transform(shifted, es, {1.0}), std::invalid_argument);
}

TEST_CASE("time-domain to transform-domain ratio for linear growth") {
    auto t = uniform_times(0.1, 100.0);
    std::vector<double> e(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) e[i] = t[i];
    auto rows = tauber_report(t, e);
    REQUIRE(!rows.empty());
    for (const auto& row : rows) {
        CHECK(row.t <= 20.0 + 1e-9);
        if (row.t >= 0.5) {
            CHECK(row.ratio == doctest::Approx(1.0).epsilon(0.01));
        }
    }
}

TEST_CASE("ratio picks up the reciprocal Gamma factor for t^{3/2} growth") {
    auto t = uniform_times(0.1, 100.0);
    std::vector<double> e(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) e[i] = std::pow(t[i], 1.5);
    auto rows = tauber_report(t, e);
    REQUIRE(!rows.empty());
    bool saw_window = false;
    for (const auto& row : rows) {
        if (row.t >= 2.0 && row.t <= 20.0) {
            saw_window = true;
            CHECK(row.ratio == doctest::Approx(0.752252778063675).epsilon(0.01));
        }
    }
    CHECK(saw_window);
}

TEST_CASE("exact power laws fit exactly") {
    std::vector<double> t, v, w;
    for (int i = 1; i <= 10; ++i) {
        t.push_back(static_cast<double>(i));
        v.push_back(3.0 * std::pow(static_cast<double>(i), 1.5));
        w.push_back(std::pow(static_cast<double>(i), -2.5));
    }
    auto f = fit_exponent(t, v, 1.0, 10.0);
    CHECK(f.exponent == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(f.exponent_se < 1e-10);
    CHECK(f.log_prefactor == doctest::Approx(std::log(3.0)).epsilon(1e-10));

    auto g = fit_exponent(t, w, 1.0, 10.0);
    CHECK(g.exponent == doctest::Approx(-2.5).epsilon(1e-12));
}

TEST_CASE("fit window filters before validating") {
    std::vector<double> t = {1.0, 2.0, 4.0, 8.0, 100.0};
    std::vector<double> v = {1.0, 2.0, 4.0, 8.0, -5.0};  // junk outside the window
    auto f = fit_exponent(t, v, 1.0, 10.0);
    CHECK(f.exponent == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(fit_exponent(t, v, 1.0, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(fit_exponent(t, v, 50.0, 60.0), std::invalid_argument);
}

TEST_CASE("white-noise drift decorrelates instantly") {
    const std::size_t nt = 81;
    ReplicaSet s;
    s.times = uniform_times(0.25, 20.0);
    REQUIRE(s.times.size() == nt);
    for (std::uint64_t r = 0; r < 200; ++r) s.records.push_back(random_record(r, nt, 99));
    auto corr = autocorrelation(s, 0.0, 2.0);
    REQUIRE(corr.lags.size() == 9);
    CHECK(std::abs(corr.c[0].mean - 1.0) < 4.0 * corr.c[0].se);
    for (std::size_t m = 1; m < corr.lags.size(); ++m) {
        CHECK(std::abs(corr.c[m].mean) < 4.0 * corr.c[m].se);
    }
}

TEST_CASE("autocorrelation demands a uniform grid inside the window") {
    ReplicaSet s;
    s.times = {0.0, 1.0, 3.0, 7.0};
    s.records.push_back(random_record(0, 4, 5));
    s.records.push_back(random_record(1, 4, 5));
    CHECK_THROWS_AS(autocorrelation(s, 0.0, 2.0), std::invalid_argument);
}

TEST_CASE("resolvent of an exponential autocovariance") {
    Autocorrelation corr;
    for (double sv = 0.0; sv <= 20.0 + 1e-12; sv += 0.01) {
        corr.lags.push_back(sv);
        corr.c.push_back({std::exp(-sv), 0.0});
    }
    for (double lam : {0.05, 0.2, 1.0}) {
        CHECK(mc_resolvent(corr, lam) ==
              doctest::Approx(1.0 / (1.0 + lam)).epsilon(1e-4));
    }
}

TEST_CASE("variance decomposition closes algebraically") {
    auto s = random_set(0, 50, 6, 1234);
    auto rep = yaglom_decomposition(s, {{1.0, 3.0}, {0.0, 5.0}});
    REQUIRE(rep.size() == 2);
    for (const auto& w : rep) {
        const double rhs = w.martingale_part.mean + w.drift_part.mean + 2.0 * w.cross.mean;
        CHECK(w.lhs.mean == doctest::Approx(rhs).epsilon(1e-12));
        CHECK(std::abs(w.cross_corr.mean) <= 1.0);
        CHECK(w.cross_corr.se > 0.0);
    }
    CHECK_THROWS_AS(yaglom_decomposition(s, {{0.0, 2.5}}), std::invalid_argument);
}

TEST_CASE("decomposition of a drift-free ensemble") {
    ReplicaSet s;
    s.times = {0.0, 1.0, 2.0};
    for (std::uint64_t r = 0; r < 20; ++r) {
        auto rec = random_record(r, 3, 777);
        for (auto& p : rec.drift_integral) p = 0.0;
        for (std::size_t i = 0; i < rec.x.size(); ++i) rec.x[i] = rec.brownian[i];
        s.records.push_back(rec);
    }
    auto rep = yaglom_decomposition(s, {{0.0, 2.0}});
    REQUIRE(rep.size() == 1);
    CHECK(rep[0].drift_part.mean == 0.0);
    CHECK(rep[0].cross.mean == 0.0);
    CHECK(rep[0].cross_corr.mean == 0.0);
    CHECK(rep[0].lhs.mean == rep[0].martingale_part.mean);
}
