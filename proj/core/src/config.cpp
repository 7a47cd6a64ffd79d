#include "polymerlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace polymer {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail_at(const std::string& source, int line, const std::string& what) {
    std::ostringstream os;
    os << source << ":" << line << ": " << what;
    throw ConfigError(os.str());
}

std::vector<double> parse_number_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(std::string(what) + ": empty entry in list");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": not a number: '" + item + "'");
        }
        if (used != item.size())
            throw ConfigError(std::string(what) + ": trailing junk in '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
    return out;
}

}  // namespace

ConfigMap ConfigMap::parse_text(const std::string& text, const std::string& source_name) {
    ConfigMap cfg;
    cfg.source_ = source_name;
    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        const auto hash_pos = raw.find('#');
        if (hash_pos != std::string::npos) raw = raw.substr(0, hash_pos);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail_at(source_name, line_no, "expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail_at(source_name, line_no, "empty key");
        if (value.empty()) fail_at(source_name, line_no, "empty value for key '" + key + "'");
        if (cfg.kv_.count(key))
            fail_at(source_name, line_no, "duplicate key '" + key + "'");
        cfg.kv_[key] = value;
        cfg.line_[key] = line_no;
    }
    return cfg;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(it->second, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != it->second.size()) {
        std::ostringstream os;
        os << source_ << ":" << line_.at(key) << ": key '" << key << "' is not a number: '"
           << it->second << "'";
        throw ConfigError(os.str());
    }
    return v;
}

std::uint64_t ConfigMap::get_u64(const std::string& key, std::uint64_t fallback) const {
    const double v = get_double(key, static_cast<double>(fallback));
    if (!(v >= 0.0) || std::floor(v) != v) {
        std::ostringstream os;
        os << source_ << ":" << (line_.count(key) ? line_.at(key) : 0) << ": key '" << key
           << "' must be a non-negative integer";
        throw ConfigError(os.str());
    }
    return static_cast<std::uint64_t>(v);
}

void ConfigMap::set(const std::string& key, const std::string& value) {
    kv_[key] = value;
    if (!line_.count(key)) line_[key] = 0;
}

void ConfigMap::require_known(const std::vector<std::string>& allowed) const {
    std::string bad;
    for (const auto& [key, value] : kv_) {
        if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
        if (!bad.empty()) bad += "; ";
        std::ostringstream os;
        os << "unknown key '" << key << "' (" << source_ << ":" << line_.at(key) << ")";
        bad += os.str();
    }
    if (!bad.empty()) throw ConfigError(bad);
}

std::string ConfigMap::canonical_text() const {
    std::string out;
    for (const auto& [key, value] : kv_) {  // std::map iterates sorted
        out += key;
        out += '=';
        out += value;
        out += '\n';
    }
    return out;
}

std::uint64_t ConfigMap::hash() const {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : canonical_text()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string ConfigMap::hash_hex() const {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << hash();
    return os.str();
}

std::vector<double> parse_output_times(const std::string& text, double horizon) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ConfigError("output_times: expected 'uniform:...', 'geom:...' or 'list:...'");
    const std::string mode = trim(text.substr(0, colon));
    const std::string rest = trim(text.substr(colon + 1));

    if (mode == "uniform") {
        const auto nums = parse_number_list(rest, "output_times uniform");
        if (nums.size() != 1 || !(nums[0] > 0.0))
            throw ConfigError("output_times: uniform needs one positive step");
        const double step = nums[0];
        std::vector<double> out;
        const auto count = static_cast<std::uint64_t>(std::floor(horizon / step + 1e-9));
        out.reserve(count + 1);
        for (std::uint64_t i = 0; i <= count; ++i) out.push_back(static_cast<double>(i) * step);
        return out;
    }
    if (mode == "geom") {
        const auto nums = parse_number_list(rest, "output_times geom");
        if (nums.size() != 3 || !(nums[0] > 0.0) || !(nums[1] > nums[0]) || !(nums[2] >= 2))
            throw ConfigError("output_times: geom needs FIRST,LAST,COUNT with 0<FIRST<LAST, COUNT>=2");
        const auto count = static_cast<std::size_t>(nums[2]);
        std::vector<double> out{0.0};
        const double ratio = std::log(nums[1] / nums[0]) / static_cast<double>(count - 1);
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(nums[0] * std::exp(ratio * static_cast<double>(i)));
        return out;
    }
    if (mode == "list") {
        auto nums = parse_number_list(rest, "output_times list");
        std::sort(nums.begin(), nums.end());
        return nums;
    }
    throw ConfigError("output_times: unknown mode '" + mode + "'");
}

RunSettings settings_from_config(const ConfigMap& cfg) {
    cfg.require_known({
        "kernel.family", "kernel.a", "kernel.alpha", "kernel.s",
        "grid.L", "grid.N",
        "sim.dt", "sim.horizon", "sim.replicas", "sim.output_times", "sim.mean_v",
        "seed",
        "bounds.lambda_min", "bounds.lambda_max", "bounds.points", "bounds.p_grid",
    });

    RunSettings s;
    const std::string family = cfg.get_string("kernel.family", "gaussian");
    s.kernel = Kernel::make(family, cfg.get_double("kernel.a", 1.0),
                            cfg.get_double("kernel.alpha", 0.0), cfg.get_double("kernel.s", 1.0))
                   .params();
    s.grid.length_L = cfg.get_double("grid.L", 256.0);
    s.grid.num_points_N = cfg.get_u64("grid.N", 4096);
    s.grid.validate();
    s.dt = cfg.get_double("sim.dt", RunSettings{}.dt);
    if (!(s.dt > 0.0)) throw ConfigError("sim.dt must be positive");
    s.horizon = cfg.get_double("sim.horizon", 10.0);
    if (!(s.horizon > 0.0)) throw ConfigError("sim.horizon must be positive");
    s.mean_v = cfg.get_double("sim.mean_v", 0.0);
    s.replicas = cfg.get_u64("sim.replicas", 100);
    s.seed = cfg.get_u64("seed", 12345);

    const std::string times_spec = cfg.get_string("sim.output_times", "uniform:0.5");
    std::vector<double> raw = parse_output_times(times_spec, s.horizon);
    // Snap to the dt lattice; the step scheduler refuses off-lattice times.
    std::vector<double> snapped;
    for (const double t : raw) {
        const double on_lattice = std::round(t / s.dt) * s.dt;
        if (!snapped.empty() && !(on_lattice > snapped.back())) continue;
        snapped.push_back(on_lattice);
    }
    s.output_times = std::move(snapped);

    s.lambda_min = cfg.get_double("bounds.lambda_min", 1e-4);
    s.lambda_max = cfg.get_double("bounds.lambda_max", 1e-2);
    if (!(s.lambda_min > 0.0) || !(s.lambda_max > s.lambda_min))
        throw ConfigError("bounds: need 0 < lambda_min < lambda_max");
    s.lambda_points = cfg.get_u64("bounds.points", 13);
    if (s.lambda_points < 2) throw ConfigError("bounds.points must be at least 2");
    s.grid_points_per_side = cfg.get_u64("bounds.p_grid", 512) / 2;
    if (s.grid_points_per_side < 8) throw ConfigError("bounds.p_grid must be at least 16");
    return s;
}

}  // namespace polymer
