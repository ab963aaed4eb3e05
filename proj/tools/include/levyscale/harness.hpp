#pragma once

#include "levyscale/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace levyscale::harness {

struct GridSpec {
    double min = 0.0;
    double max = 3.0;
    double step = 0.01;
};

// Per-verb solver parameters; `kind` selects the policy.
struct SolverSpec {
    std::string kind;        // classic | bailout | terminal | impulse
    double phi = 1.3;        // bail-out injection cost
    double S = 0.0;          // terminal value intercept
    double K = 0.0;          // terminal value slope
    double delta_cost = 0.5; // impulse transaction cost
};

struct RunConfig {
    SpectralModel model;
    double q = 0.03;
    std::size_t m = 25;      // truncation order (meromorphic families only)
    double tol = 1e-10;      // bisection tolerance
    GridSpec grid;
    std::optional<SolverSpec> solver;
    std::vector<double> betas{1.0, 0.5, 0.25, 0.125}; // cgmy-sweep sequence
    std::string out_dir = ".";
};

// Parses a config document:
//   { "model": {...} | "model_file": "path", "q", "m", "tol",
//     "grid": {"min","max","step"} | "a:b:step", "solver": {...},
//     "betas": [...], "out_dir" }
// Relative model_file paths resolve against the config file's directory.
RunConfig config_from_json(const std::string& text, const std::string& base_dir = ".");
RunConfig config_from_json_file(const std::string& path);

// "a:b:step" -> GridSpec; malformed input throws ValidationError.
GridSpec parse_grid(const std::string& text);

// Enforces the config invariants: grid step > 0, tol in (0, 1e-4], m >= 1,
// q > 0, grid min <= max. Throws ValidationError.
void validate(const RunConfig& cfg);

// Verb drivers. Each writes its artifacts plus manifest.json into
// cfg.out_dir (created if missing) and returns the manifest text. The
// manifest carries the run scalars (zeta_q, varrho_q, kappa_q, theta,
// delta_m, epsilon_m), the identity residuals and the Laplace-oracle worst
// error; status is "failed" when either residual exceeds 1e-6.
std::string run_scale(const RunConfig& cfg);
std::string run_roots(const RunConfig& cfg);
std::string run_solve(const RunConfig& cfg);
std::string run_bounds(const RunConfig& cfg);
std::string run_cgmy_sweep(const RunConfig& cfg);

// Regenerates a bundled experiment suite ("5.1" or "5.2") into out_dir:
// one CSV per figure panel plus summary.json comparing the computed
// barrier/policy levels against the recorded reference values. Unknown
// section names throw ValidationError.
std::string reproduce_figures(const std::string& section, const std::string& out_dir);

// Locates a bundled data file: $LEVYSCALE_DATA_DIR overrides the
// compiled-in default directory.
std::string data_file(const std::string& name);

} // namespace levyscale::harness
