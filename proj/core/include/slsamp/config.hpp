#pragma once

// INI-style run configuration. Sections and keys are fixed:
//   [interval]     a, c1, c2, b
//   [potential]    seg1|seg2|seg3 = poly:[c0,c1,...] | table:path
//   [boundary]     beta1, beta2, alpha1, alpha2, alpha1p, alpha2p
//   [transmission] delta, gamma
//   [solver]       tol_ode, tol_root, n_eigs, lambda_min, lambda_max
//   [sampling]     g, probes, n_schedule
// Unknown keys are rejected; every parse diagnostic carries path:line.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "slsamp/problem.hpp"

namespace slsamp {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    double tol_ode = 1e-10;
    double tol_root = 1e-12;
    int n_eigs = 30;
    // NaN means not set (solver picks its own window)
    double lambda_min = std::numeric_limits<double>::quiet_NaN();
    double lambda_max = std::numeric_limits<double>::quiet_NaN();
};

struct SamplingConfig {
    PiecewiseFn g;                // finalized against the interval; zero if absent
    bool g_given = false;
    std::vector<double> probes;   // empty = default probe window
    std::vector<int> n_schedule;  // empty = {25, 50, 100, 200}
};

struct RunConfig {
    Problem problem;
    SolverConfig solver;
    SamplingConfig sampling;
    std::uint64_t fingerprint = 0;  // FNV-1a over the raw config bytes
    std::string path;
};

RunConfig load_config(const std::string& path);

// `path` only labels diagnostics; table references resolve relative to its
// directory
RunConfig parse_config(const std::string& text, const std::string& path);

}  // namespace slsamp
