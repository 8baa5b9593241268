#pragma once

// Command-line front end. Every run is reproducible from its RunConfig, which is
// echoed (with a hash and the toolkit version) into each output header.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ferrohopf::cli {

inline constexpr const char* toolkit_version = "1.0.0";

enum ExitCode : int {
    exit_ok = 0,
    exit_bad_config = 2,
    exit_numerical = 3,
    exit_not_found = 4,
};

struct RunConfig {
    std::string subcommand;
    std::string law;  // JSON text, @file, or kind:key=value,... short form

    // dispersion / spectrum
    double beta0 = 0.0;
    double alpha0 = 0.0;
    // dispersion / hopf-locus
    double q_min = 0.01;
    double q_max = 0.0;  // 0 selects the automatic root bound for dispersion
    std::optional<int> count;  // grid size; defaults per subcommand

    // coeffs
    std::string regime = "deep";
    double q = 0.0;

    // regions
    std::string family = "linear";
    std::string grid;
    int workers = 1;

    // homoclinic / profile
    double beta0q = 1.0;
    double eps = 1e-3;
    std::optional<double> c1, c2, c3, c4, c5, c6, c7;
    int pulses = 1;
    std::string branch = "+";
    double step = 5e-3;
    double delta = 1e-6;
    double horizon = 0.0;
    int stride = 10;
    std::optional<double> x_min, x_max;

    // spectrum
    int N = 64;
    std::string window = "-1:1:-10:10";

    std::string out;
    std::string report;
};

/// Canonical JSON of the fields that affect results (output paths excluded).
std::string canonical_config(const RunConfig& cfg);
/// FNV-1a 64-bit hash of the canonical config, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Execute a parsed configuration. Primary output goes to cfg.out or, when empty,
/// to `out`; the JSON report of subcommands that have one goes to cfg.report or
/// follows on `out`. Nothing is written unless the whole run succeeds.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parse argv and run. Parse errors map to exit_bad_config.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ferrohopf::cli
