#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace polymer {

// Verdict for one numbered acceptance criterion. `known_limit` marks the one
// documented case whose stated target exceeds what the model itself permits:
// the line stays FAIL but carries the companion evidence in `detail` and does
// not sink the overall gate. It is only set when every attainable part of
// that criterion, including the companion cross-check, is green.
struct CriterionVerdict {
    int id = 0;
    std::string label;
    bool pass = false;
    bool known_limit = false;
    std::string detail;
};

struct AcceptanceReport {
    std::vector<CriterionVerdict> verdicts;  // ordered by id
    bool gate_pass = false;                  // pass or known_limit on every line
    double wall_seconds = 0.0;
};

struct AcceptanceConfig {
    std::uint64_t seed = 20260822;
    unsigned threads = 2;
    // Divides the replica counts for development smoke runs. Anything other
    // than 1 weakens the statistical gates and the report says so; the test
    // registration always runs at scale 1.
    std::uint64_t scale = 1;
};

AcceptanceReport run_acceptance(const AcceptanceConfig& cfg, std::ostream& log);

void print_report(const AcceptanceReport& report, const AcceptanceConfig& cfg, std::ostream& out);

}  // namespace polymer
