#pragma once

#include "qdimer/experiments.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qdimer::cli {

enum class Command { spectrum, rates, evolve, steady, sweep };
enum class SweepVary { p, tlambda, t1t2 };

// Inclusive linear axis specification <start>:<stop>:<count>.
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
};

struct RunConfig {
    Command command = Command::spectrum;
    model::SystemParams params;
    std::string initial_text = "onebit:p=0.5";
    experiments::InitialStateSpec initial;
    std::optional<double> t_max_ns;  // default: derived from the damping rates
    int samples = 201;
    std::string out;  // empty or "-" = standard output
    bool full_state = false;
    std::optional<SweepVary> vary;
    std::map<std::string, GridSpec> grids;
    double rtol = 1e-10;
    double atol = 1e-12;
};

// Thrown by parse_args when --help was requested.
struct HelpRequested {
    std::string text;
};

// Parses argv into a validated RunConfig. Throws HelpRequested, UsageError
// (unknown flags, malformed values), ParseError (initial-state grammar) or
// ValidationError (physical parameter invariants).
RunConfig parse_args(int argc, const char* const* argv);

// Initial-state mini-grammar:
//   basis:<00|01|10|11> | eigen:<a|b|c|d> | onebit:p=<float> |
//   twobit:p=<float>    | ket:<c>,<c>,<c>,<c>
// with <c> := <float>[<sign><float>i]; kets are normalized on parse.
experiments::InitialStateSpec parse_initial_state(std::string_view text);

std::vector<double> linspace(const GridSpec& spec);

// CSV writers: UTF-8, LF line endings, header row, %.12g numbers.
void write_csv(const dynamics::Trajectory& trajectory, bool full_state, std::ostream& os);
void write_csv(const experiments::SweepGrid& grid, std::ostream& os);

// Entry point used by the qdimer executable. Returns the process exit
// status: 0 success, 1 validation/runtime failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qdimer::cli
