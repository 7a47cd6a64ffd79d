#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polymerlab/acceptance.hpp"
#include "polymerlab/bounds.hpp"
#include "polymerlab/config.hpp"
#include "polymerlab/dynamics.hpp"
#include "polymerlab/estimators.hpp"
#include "polymerlab/field.hpp"
#include "polymerlab/io.hpp"
#include "polymerlab/kernels.hpp"
#include "polymerlab/rng.hpp"
#include "polymerlab/runner.hpp"
#include "polymerlab/stationarity.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace polymer;

namespace {

// Flags shared by the run-producing subcommands. Overrides are applied onto
// the ConfigMap only when the flag was actually given, so the config hash
// embedded in every artifact reflects the effective settings. --threads never
// touches the config: worker count must not change any output byte.
struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    unsigned threads = 1;
    std::uint64_t seed = 0;
    std::uint64_t replicas = 0;
    double dt = 0.0;
    std::string kernel_family;
    double kernel_a = 1.0;
    double kernel_alpha = 0.0;
    double kernel_s = 1.0;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* replicas_opt = nullptr;
    CLI::Option* dt_opt = nullptr;
    CLI::Option* a_opt = nullptr;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* s_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_dt) {
    cmd->add_option("--config,-c", o.config_path, "configuration file (key = value lines)");
    cmd->add_option("--out,-o", o.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--threads,-j", o.threads, "worker threads")->capture_default_str();
    o.seed_opt = cmd->add_option("--seed", o.seed, "master seed (overrides config)");
    o.replicas_opt = cmd->add_option("--replicas", o.replicas, "replica count (overrides config)");
    if (with_dt) o.dt_opt = cmd->add_option("--dt", o.dt, "time step (overrides config)");
    cmd->add_option("--kernel", o.kernel_family, "kernel family: gaussian, power-ir, summable");
    o.a_opt = cmd->add_option("--a", o.kernel_a, "kernel amplitude (overrides config)");
    o.alpha_opt = cmd->add_option("--alpha", o.kernel_alpha, "infrared exponent (overrides config)");
    o.s_opt = cmd->add_option("--s", o.kernel_s, "envelope width (overrides config)");
}

ConfigMap load_config(const CommonOpts& o) {
    ConfigMap cfg = o.config_path.empty() ? ConfigMap() : ConfigMap::parse_file(o.config_path);
    if (!o.kernel_family.empty()) cfg.set("kernel.family", o.kernel_family);
    if (o.a_opt != nullptr && o.a_opt->count() > 0) cfg.set("kernel.a", format_g17(o.kernel_a));
    if (o.alpha_opt != nullptr && o.alpha_opt->count() > 0)
        cfg.set("kernel.alpha", format_g17(o.kernel_alpha));
    if (o.s_opt != nullptr && o.s_opt->count() > 0) cfg.set("kernel.s", format_g17(o.kernel_s));
    if (o.seed_opt != nullptr && o.seed_opt->count() > 0) cfg.set("seed", std::to_string(o.seed));
    if (o.replicas_opt != nullptr && o.replicas_opt->count() > 0)
        cfg.set("sim.replicas", std::to_string(o.replicas));
    if (o.dt_opt != nullptr && o.dt_opt->count() > 0) cfg.set("sim.dt", format_g17(o.dt));
    return cfg;
}

// Comment block for every CSV: subcommand, config hash, canonical settings.
// Deliberately free of timestamps and worker counts so reruns byte-match.
void comment_block(CsvWriter& w, const std::string& subcommand, const ConfigMap& cfg) {
    w.comment("polymerlab " + subcommand);
    w.comment("config_hash=" + cfg.hash_hex());
    std::stringstream ss(cfg.canonical_text());
    std::string line;
    while (std::getline(ss, line)) w.comment(line);
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
    return out;
}

json json_meanse(const MeanSe& m) { return json{{"value", m.mean}, {"stderr", m.se}}; }

// |residual| in units of the standard error; exact zeros count as zero pulls
// even when the se collapses (degenerate all-equal samples).
double pull(double residual, double se) {
    if (residual == 0.0) return 0.0;
    if (!(se > 0.0)) return std::numeric_limits<double>::infinity();
    return std::fabs(residual) / se;
}

std::vector<double> split_doubles(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            while (used < item.size() && (item[used] == ' ' || item[used] == '\t')) ++used;
            if (used != item.size()) throw std::invalid_argument("junk");
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": not a number: '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
    return out;
}

int cmd_field(const CommonOpts& o) {
    const ConfigMap cfg = load_config(o);
    const RunSettings s = settings_from_config(cfg);
    const Kernel k = Kernel::make(s.kernel);
    fs::create_directories(o.out_dir);
    const double h = s.grid.spacing();

    RngStream sample_rng(s.seed, 0, StreamPurpose::field_sample);
    const FieldGrid f = sample_stationary(k, s.grid, sample_rng, s.mean_v);
    CsvWriter sample(o.out_dir + "/field_sample.csv");
    comment_block(sample, "field", cfg);
    sample.header({"x", "value"});
    for (std::size_t j = 0; j < f.values.size(); ++j)
        sample.row({static_cast<double>(j) * h, f.values[j]});

    // Lag covariance across independent draws against the synthesis target.
    std::vector<std::size_t> lag_idx;
    for (const std::size_t l : {0u, 1u, 2u, 3u, 4u, 6u, 8u, 12u, 16u, 24u, 32u, 48u, 64u, 96u, 128u})
        if (l < s.grid.num_points_N / 2 && (lag_idx.empty() || l > lag_idx.back()))
            lag_idx.push_back(l);
    std::vector<std::vector<double>> per_lag(lag_idx.size(), std::vector<double>(s.replicas));
    parallel_for_indexed(s.replicas, o.threads, [&](std::uint64_t r) {
        RngStream rng(s.seed, r, StreamPurpose::field_sample);
        const FieldGrid g = sample_stationary(k, s.grid, rng, s.mean_v);
        const std::size_t n = g.values.size();
        for (std::size_t li = 0; li < lag_idx.size(); ++li) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                acc += (g.values[j] - s.mean_v) * (g.values[(j + lag_idx[li]) % n] - s.mean_v);
            per_lag[li][r] = acc / static_cast<double>(n);
        }
    });

    CsvWriter cov(o.out_dir + "/field_covariance.csv");
    comment_block(cov, "field", cfg);
    cov.header({"lag", "sample_cov", "stderr", "target"});
    double worst = 0.0;
    for (std::size_t li = 0; li < lag_idx.size(); ++li) {
        const double lag = static_cast<double>(lag_idx[li]) * h;
        const MeanSe m = jackknife_mean(per_lag[li]);
        const double target = synthesis_covariance(k, s.grid, lag);
        cov.row({lag, m.mean, m.se, target});
        worst = std::max(worst, pull(m.mean - target, m.se));
    }
    std::cout << "field: " << f.values.size() << " nodes sampled, covariance over " << s.replicas
              << " draws at " << lag_idx.size() << " lags, worst pull " << format_g17(worst)
              << " se\n";
    return 0;
}

int cmd_simulate(const CommonOpts& o, bool trajectories) {
    const ConfigMap cfg = load_config(o);
    const RunSettings s = settings_from_config(cfg);
    const Kernel k = Kernel::make(s.kernel);
    fs::create_directories(o.out_dir);

    PolymerRunParams p;
    p.kernel = s.kernel;
    p.grid = s.grid;
    p.dt = s.dt;
    p.mean_v = s.mean_v;
    p.output_times = s.output_times;
    p.replicas = s.replicas;
    p.seed = s.seed;
    p.threads = o.threads;
    const ReplicaSet set = run_polymer_ensemble(p);
    const EnsembleStats st = merge_stats(set);
    const double t_last = st.times.back();

    CsvWriter moments(o.out_dir + "/moments.csv");
    comment_block(moments, "simulate", cfg);
    moments.header({"t", "E", "stderr"});
    std::vector<double> e_mean(st.times.size());
    for (std::size_t i = 0; i < st.times.size(); ++i) {
        e_mean[i] = st.e_of_t[i].mean;
        moments.row({st.times[i], st.e_of_t[i].mean, st.e_of_t[i].se});
    }

    // Drift-integrand autocovariance; needs a uniform output grid.
    try {
        const Autocorrelation ac = autocorrelation(set, 0.0, t_last / 2.0);
        CsvWriter accsv(o.out_dir + "/autocorrelation.csv");
        comment_block(accsv, "simulate", cfg);
        accsv.header({"s", "C", "stderr"});
        for (std::size_t i = 0; i < ac.lags.size(); ++i)
            accsv.row({ac.lags[i], ac.c[i].mean, ac.c[i].se});
    } catch (const std::exception& e) {
        std::cerr << "simulate: skipping autocorrelation.csv (" << e.what() << ")\n";
    }

    // Laplace transform of E on the admissible grid lambda >= 5/horizon,
    // with the Tauberian ratio table monitored alongside.
    json tauber = json::array();
    try {
        const auto lams = geometric_grid(5.0 / t_last, 50.0 / t_last, 13);
        const LaplaceEstimate le = laplace_transform(st.times, e_mean, lams);
        CsvWriter tr(o.out_dir + "/transform.csv");
        comment_block(tr, "simulate", cfg);
        tr.header({"lambda", "E_hat", "tail_bound"});
        for (std::size_t i = 0; i < le.lambdas.size(); ++i)
            tr.row({le.lambdas[i], le.value[i], le.tail_part[i]});
        for (const TauberRow& row : tauber_report(st.times, e_mean))
            tauber.push_back(json{{"t", row.t}, {"ratio", row.ratio}});
    } catch (const std::exception& e) {
        std::cerr << "simulate: skipping transform.csv (" << e.what() << ")\n";
    }

    if (trajectories) {
        CsvWriter traj(o.out_dir + "/trajectories.csv");
        comment_block(traj, "simulate", cfg);
        traj.header({"replica", "t", "x", "brownian", "phi_integral"});
        for (const PathRecord& r : set.records)
            for (std::size_t i = 0; i < set.times.size(); ++i)
                traj.row({static_cast<double>(r.replica), set.times[i], r.x[i], r.brownian[i],
                          r.drift_integral[i]});
    }

    json summary;
    summary["subcommand"] = "simulate";
    summary["config_hash"] = cfg.hash_hex();
    summary["kernel"] = k.name();
    summary["replicas"] = st.replica_count;
    summary["dt"] = s.dt;
    summary["horizon"] = t_last;
    try {
        const ExponentFit fit = fit_exponent(st.times, e_mean, t_last / 5.0, t_last);
        summary["e_growth"] = {{"exponent", fit.exponent},
                               {"stderr", fit.exponent_se},
                               {"log_prefactor", fit.log_prefactor},
                               {"t_min", t_last / 5.0},
                               {"t_max", t_last}};
    } catch (const std::exception& e) {
        summary["e_growth"] = {{"error", e.what()}};
    }
    if (const auto alpha = k.infrared_exponent())
        summary["conjectured_exponent_reference"] = 4.0 / (3.0 + *alpha);
    const std::size_t last = st.times.size() - 1;
    summary["final_time"] = {{"t", t_last},
                             {"mean_x", json_meanse(st.mean_x[last])},
                             {"E", json_meanse(st.e_of_t[last])},
                             {"D", json_meanse(st.d_of_t[last])}};
    summary["tauber_ratio"] = tauber;
    write_text_file(o.out_dir + "/summary.json", summary.dump(2) + "\n");

    std::cout << "simulate: " << st.replica_count << " replicas to t=" << format_g17(t_last)
              << ", E(t)=" << format_g17(st.e_of_t[last].mean) << " +- "
              << format_g17(st.e_of_t[last].se) << "\n";
    return 0;
}

int cmd_drs(const CommonOpts& o) {
    const ConfigMap cfg = load_config(o);
    const RunSettings s = settings_from_config(cfg);
    const Kernel k = Kernel::make(s.kernel);
    fs::create_directories(o.out_dir);

    SceneryRunParams p;
    p.kernel = s.kernel;
    p.grid = s.grid;
    p.dt = s.dt;
    p.output_times = s.output_times;
    p.replicas = s.replicas;
    p.seed = s.seed;
    p.threads = o.threads;
    const SceneryEnsemble ens = run_scenery_ensemble(p);

    CsvWriter rates(o.out_dir + "/scenery_rate.csv");
    comment_block(rates, "drs", cfg);
    rates.header({"t", "rate", "stderr", "expected_rate"});
    double rate_last = 0.0, se_last = 0.0, expected_last = 0.0, t_final = 0.0;
    for (std::size_t i = 0; i < ens.times.size(); ++i) {
        const double t = ens.times[i];
        if (!(t > 0.0)) continue;
        std::vector<double> acc(ens.records.size());
        for (std::size_t r = 0; r < acc.size(); ++r) acc[r] = ens.records[r].accum[i];
        const MeanSe var = jackknife_variance(acc);
        rate_last = var.mean / t;
        se_last = var.se / t;
        expected_last = scenery_rate_reference(k, t);
        t_final = t;
        rates.row({t, rate_last, se_last, expected_last});
    }

    std::cout << "drs: " << ens.records.size() << " replicas, Var/t at t=" << format_g17(t_final)
              << ": " << format_g17(rate_last) << " +- " << format_g17(se_last) << " (expected "
              << format_g17(expected_last) << ")";
    const InfraredConstants ir = k.infrared();
    if (ir.rho_finite)
        std::cout << ", limit 2 rho^2 / pi = "
                  << format_g17(2.0 * ir.rho_squared / std::numbers::pi);
    std::cout << "\n";
    return 0;
}

struct BoundsFlags {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::uint64_t points = 0;
    std::uint64_t p_grid = 0;
    CLI::Option* lmin_opt = nullptr;
    CLI::Option* lmax_opt = nullptr;
    CLI::Option* pts_opt = nullptr;
    CLI::Option* pgrid_opt = nullptr;
};

int cmd_bounds(const CommonOpts& o, const BoundsFlags& bf) {
    ConfigMap cfg = load_config(o);
    if (bf.lmin_opt->count() > 0) cfg.set("bounds.lambda_min", format_g17(bf.lambda_min));
    if (bf.lmax_opt->count() > 0) cfg.set("bounds.lambda_max", format_g17(bf.lambda_max));
    if (bf.pts_opt->count() > 0) cfg.set("bounds.points", std::to_string(bf.points));
    if (bf.pgrid_opt->count() > 0) cfg.set("bounds.p_grid", std::to_string(bf.p_grid));
    const RunSettings s = settings_from_config(cfg);
    const Kernel k = Kernel::make(s.kernel);
    fs::create_directories(o.out_dir);

    const auto lams = geometric_grid(s.lambda_min, s.lambda_max, s.lambda_points);
    const BoundsReport rep = sandwich_report(k, lams, s.grid_points_per_side);

    CsvWriter csv(o.out_dir + "/bounds.csv");
    comment_block(csv, "bounds", cfg);
    csv.header(
        {"lambda", "resolvent_upper", "lower_closed", "lower_variational", "e_hat_upper",
         "e_hat_lower"});
    for (std::size_t i = 0; i < rep.lambdas.size(); ++i)
        csv.row({rep.lambdas[i], rep.resolvent_upper[i], rep.lower_closed[i],
                 rep.lower_variational[i], rep.e_hat_upper[i], rep.e_hat_lower[i]});

    json j;
    j["subcommand"] = "bounds";
    j["config_hash"] = cfg.hash_hex();
    j["kernel"] = k.name();
    j["lambda"] = {{"min", s.lambda_min}, {"max", s.lambda_max}, {"points", s.lambda_points}};
    j["p_grid"] = 2 * s.grid_points_per_side;
    const auto alpha = k.infrared_exponent();
    json upper = {{"fitted", rep.upper_exponent.exponent},
                  {"stderr", rep.upper_exponent.exponent_se}};
    json lower = {{"fitted", rep.lower_exponent.exponent},
                  {"stderr", rep.lower_exponent.exponent_se}};
    if (alpha) {
        const double a = *alpha;
        upper["target"] = -(5.0 - a) / 2.0;
        lower["bound"] = -(9.0 - 2.0 * a + a * a) / 4.0;
    } else {
        upper["target"] = nullptr;
        lower["bound"] = nullptr;
    }
    j["e_hat_upper_exponent"] = upper;
    j["e_hat_lower_exponent"] = lower;
    write_text_file(o.out_dir + "/bounds.json", j.dump(2) + "\n");

    std::cout << "bounds: " << rep.lambdas.size() << " lambdas in ["
              << format_g17(s.lambda_min) << ", " << format_g17(s.lambda_max)
              << "], upper slope " << format_g17(rep.upper_exponent.exponent) << ", lower slope "
              << format_g17(rep.lower_exponent.exponent) << "\n";
    return 0;
}

int cmd_stationarity(const CommonOpts& o, const std::string& t_checks_text,
                     const std::string& lags_text) {
    const ConfigMap cfg = load_config(o);
    const RunSettings s = settings_from_config(cfg);
    const Kernel k = Kernel::make(s.kernel);
    fs::create_directories(o.out_dir);

    // Check times snap to the dt lattice, lags to the node lattice.
    std::vector<double> t_checks;
    for (const double t : split_doubles(t_checks_text, "t-checks")) {
        const double snapped = std::round(t / s.dt) * s.dt;
        if (snapped < 0.0) throw ConfigError("t-checks: negative time");
        if (t_checks.empty() || snapped > t_checks.back() + 0.5 * s.dt) t_checks.push_back(snapped);
    }
    const double h = s.grid.spacing();
    std::vector<double> lags;
    for (const double l : split_doubles(lags_text, "lags")) {
        const double snapped = std::round(l / h) * h;
        if (lags.empty() || snapped > lags.back() + 0.5 * h) lags.push_back(snapped);
    }

    StationaryRunParams p;
    p.kernel = s.kernel;
    p.grid = s.grid;
    p.dt = s.dt;
    p.mean_v = s.mean_v;
    p.t_checks = t_checks;
    p.lags = lags;
    p.replicas = s.replicas;
    p.seed = s.seed;
    p.threads = o.threads;
    const StationaryEnsemble ens = run_stationary_ensemble(p);
    const auto rows = covariance_preservation(ens, k);

    json j;
    j["subcommand"] = "stationarity";
    j["config_hash"] = cfg.hash_hex();
    j["kernel"] = k.name();
    j["replicas"] = ens.records.size();
    j["t_checks"] = t_checks;
    j["lags"] = lags;
    double max_mean_pull = 0.0, max_cov_pull = 0.0;
    json rows_json = json::array();
    for (const CovarianceCheckRow& r : rows) {
        const double mp = pull(r.mean_eta.mean - r.mean_target, r.mean_eta.se);
        const double cp = pull(r.cov.mean - r.cov_target, r.cov.se);
        max_mean_pull = std::max(max_mean_pull, mp);
        max_cov_pull = std::max(max_cov_pull, cp);
        rows_json.push_back(json{{"t", r.t},
                                 {"lag", r.lag},
                                 {"mean", json_meanse(r.mean_eta)},
                                 {"mean_target", r.mean_target},
                                 {"mean_pull", mp},
                                 {"cov", json_meanse(r.cov)},
                                 {"cov_target", r.cov_target},
                                 {"cov_pull", cp}});
    }
    j["rows"] = rows_json;
    j["max_mean_pull"] = max_mean_pull;
    j["max_cov_pull"] = max_cov_pull;
    j["pass"] = max_mean_pull <= 4.0 && max_cov_pull <= 4.0;

    // Increment flip symmetry needs check times of the form {0, T/2, T}.
    if (t_checks.size() == 3 && t_checks.front() == 0.0 &&
        std::fabs(t_checks[2] - 2.0 * t_checks[1]) < 0.75 * s.dt) {
        const FlipCheck f = yaglom_flip_check(ens);
        const double gap = f.forward_cross.mean - f.backward_cross.mean;
        const double gap_se = std::hypot(f.forward_cross.se, f.backward_cross.se);
        j["flip"] = {{"t_half", f.t_half},
                     {"t_full", f.t_full},
                     {"odd_first", json_meanse(f.odd_first)},
                     {"odd_third", json_meanse(f.odd_third)},
                     {"forward_cross", json_meanse(f.forward_cross)},
                     {"backward_cross", json_meanse(f.backward_cross)},
                     {"cross_gap", gap},
                     {"cross_gap_stderr", gap_se}};
    } else {
        j["flip"] = nullptr;
    }
    write_text_file(o.out_dir + "/stationarity.json", j.dump(2) + "\n");

    std::cout << "stationarity: " << ens.records.size() << " replicas, " << rows.size()
              << " rows, max mean pull " << format_g17(max_mean_pull) << ", max cov pull "
              << format_g17(max_cov_pull) << (j["pass"].get<bool>() ? " (pass)" : " (FAIL)")
              << "\n";
    return 0;
}

int cmd_fit(const std::string& csv_path, double t_min, double t_max, std::size_t x_col,
            std::size_t y_col, const std::string& out_dir) {
    std::ifstream in(csv_path);
    if (!in) throw ConfigError("fit: cannot open " + csv_path);
    std::vector<double> ts, ys;
    std::size_t dropped = 0;
    std::string line;
    bool header_skipped = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() <= std::max(x_col, y_col)) continue;
        double t = 0.0, y = 0.0;
        try {
            t = std::stod(cells[x_col]);
            y = std::stod(cells[y_col]);
        } catch (const std::exception&) {
            if (header_skipped) throw ConfigError("fit: non-numeric row in " + csv_path);
            header_skipped = true;
            continue;
        }
        header_skipped = true;
        if (t > 0.0 && y > 0.0 && std::isfinite(t) && std::isfinite(y)) {
            ts.push_back(t);
            ys.push_back(y);
        } else {
            ++dropped;
        }
    }
    if (ts.empty()) throw ConfigError("fit: no usable rows in " + csv_path);
    const double lo = t_min > 0.0 ? t_min : *std::min_element(ts.begin(), ts.end());
    const double hi = std::isfinite(t_max) ? t_max : *std::max_element(ts.begin(), ts.end());
    const ExponentFit fit = fit_exponent(ts, ys, lo, hi);
    std::size_t used = 0;
    for (const double t : ts)
        if (t >= lo - 1e-9 * std::max(1.0, std::fabs(t)) &&
            t <= hi + 1e-9 * std::max(1.0, std::fabs(t)))
            ++used;

    json j;
    j["subcommand"] = "fit";
    j["csv"] = csv_path;
    j["t_min"] = lo;
    j["t_max"] = hi;
    j["points_used"] = used;
    j["points_dropped"] = dropped;
    j["exponent"] = fit.exponent;
    j["stderr"] = fit.exponent_se;
    j["log_prefactor"] = fit.log_prefactor;
    fs::create_directories(out_dir);
    write_text_file(out_dir + "/fit.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_reproduce(std::uint64_t seed, bool seed_given, unsigned threads, std::uint64_t scale) {
    AcceptanceConfig cfg;
    if (seed_given) cfg.seed = seed;
    cfg.threads = threads;
    cfg.scale = scale < 1 ? 1 : scale;
    const AcceptanceReport report = run_acceptance(cfg, std::cerr);
    print_report(report, cfg, std::cout);
    return report.gate_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for a self-interacting Brownian polymer"};
    app.require_subcommand(1);

    CommonOpts field_o, sim_o, drs_o, bounds_o, stat_o;
    bool trajectories = false;
    BoundsFlags bf;
    std::string t_checks_text = "0,1,2";
    std::string lags_text = "-2,-1,-0.5,-0.25,0,0.25,0.5,1,2,4";
    std::string fit_csv;
    double fit_t_min = 0.0, fit_t_max = std::numeric_limits<double>::infinity();
    std::size_t fit_x_col = 0, fit_y_col = 1;
    std::string fit_out = "out";
    std::uint64_t rep_seed = 0, rep_scale = 1;
    unsigned rep_threads = 1;

    CLI::App* field = app.add_subcommand("field", "sample the stationary field and check its covariance");
    add_common(field, field_o, false);

    CLI::App* simulate = app.add_subcommand("simulate", "run a polymer ensemble and write its statistics");
    add_common(simulate, sim_o, true);
    simulate->add_flag("--trajectories", trajectories, "also write per-replica trajectories");

    CLI::App* drs = app.add_subcommand("drs", "run the diffusion-in-random-scenery reference process");
    add_common(drs, drs_o, true);

    CLI::App* bounds = app.add_subcommand("bounds", "evaluate the analytic bound faces over a lambda grid");
    add_common(bounds, bounds_o, false);
    bf.lmin_opt = bounds->add_option("--lambda-min", bf.lambda_min, "smallest lambda");
    bf.lmax_opt = bounds->add_option("--lambda-max", bf.lambda_max, "largest lambda");
    bf.pts_opt = bounds->add_option("--points", bf.points, "lambda grid size");
    bf.pgrid_opt = bounds->add_option("--p-grid", bf.p_grid, "frequency grid size");

    CLI::App* stationarity = app.add_subcommand("stationarity", "check the environment law along the run");
    add_common(stationarity, stat_o, true);
    stationarity->add_option("--t-checks", t_checks_text, "comma list of check times")
        ->capture_default_str();
    stationarity->add_option("--lags", lags_text, "comma list of spatial lags")
        ->capture_default_str();

    CLI::App* fit = app.add_subcommand("fit", "fit a power-law exponent to a CSV column pair");
    fit->add_option("--csv", fit_csv, "input CSV ('#' comments and one header row allowed)")
        ->required();
    fit->add_option("--t-min", fit_t_min, "fit window lower edge (default: data minimum)");
    fit->add_option("--t-max", fit_t_max, "fit window upper edge (default: data maximum)");
    fit->add_option("--x-col", fit_x_col, "time column index")->capture_default_str();
    fit->add_option("--y-col", fit_y_col, "value column index")->capture_default_str();
    fit->add_option("--out,-o", fit_out, "output directory")->capture_default_str();

    CLI::App* reproduce = app.add_subcommand("reproduce", "run the full acceptance suite");
    CLI::Option* rep_seed_opt = reproduce->add_option("--seed", rep_seed, "master seed");
    reproduce->add_option("--threads,-j", rep_threads, "worker threads")->capture_default_str();
    reproduce->add_option("--scale", rep_scale,
                          "ensemble divisor for smoke runs (1 = full scale)")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (field->parsed()) return cmd_field(field_o);
        if (simulate->parsed()) return cmd_simulate(sim_o, trajectories);
        if (drs->parsed()) return cmd_drs(drs_o);
        if (bounds->parsed()) return cmd_bounds(bounds_o, bf);
        if (stationarity->parsed()) return cmd_stationarity(stat_o, t_checks_text, lags_text);
        if (fit->parsed())
            return cmd_fit(fit_csv, fit_t_min, fit_t_max, fit_x_col, fit_y_col, fit_out);
        if (reproduce->parsed())
            return cmd_reproduce(rep_seed, rep_seed_opt->count() > 0, rep_threads, rep_scale);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainExceeded& e) {
        std::cerr << "domain exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
