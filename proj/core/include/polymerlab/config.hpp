#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "polymerlab/field.hpp"
#include "polymerlab/kernels.hpp"

namespace polymer {

// Carries the offending file and line: "runs/a.cfg:12: expected key=value".
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat dotted-key configuration ("kernel.family = gaussian"). '#' starts a
// comment; blank lines are skipped. Keys keep their first-seen line number so
// validation errors can point back at the file.
class ConfigMap {
  public:
    ConfigMap() = default;
    static ConfigMap parse_file(const std::string& path);
    static ConfigMap parse_text(const std::string& text, const std::string& source_name);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    void set(const std::string& key, const std::string& value);  // CLI overrides

    // Unknown keys are configuration bugs; the error lists each with its line.
    void require_known(const std::vector<std::string>& allowed) const;

    // Sorted "key=value" lines; the hash of this text identifies the
    // effective configuration in every output artifact.
    std::string canonical_text() const;
    std::uint64_t hash() const;       // FNV-1a over canonical_text
    std::string hash_hex() const;

  private:
    std::map<std::string, std::string> kv_;
    std::map<std::string, int> line_;
    std::string source_ = "<memory>";
};

// Output-time grammar: "uniform:STEP" (0, STEP, ..., horizon),
// "geom:FIRST,LAST,COUNT" (geometric, 0 prepended), "list:T1,T2,...".
std::vector<double> parse_output_times(const std::string& text, double horizon);

// Settings shared by the simulation-facing subcommands, resolved from a
// ConfigMap with catalog defaults. Output times are snapped to the dt
// lattice and deduplicated so the step scheduler accepts them verbatim.
struct RunSettings {
    KernelParams kernel;
    GridSpec grid{256.0, 4096};
    double dt = 0.0009765625;  // spacing^2/4 on the default grid, the largest stable step
    double horizon = 10.0;
    double mean_v = 0.0;
    std::vector<double> output_times;
    std::uint64_t replicas = 100;
    std::uint64_t seed = 12345;
    unsigned threads = 1;
    double lambda_min = 1e-4;
    double lambda_max = 1e-2;
    std::size_t lambda_points = 13;
    std::size_t grid_points_per_side = 256;
};

RunSettings settings_from_config(const ConfigMap& cfg);

}  // namespace polymer
