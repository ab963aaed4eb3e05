#pragma once

#include "levyscale/exp_sum.hpp"
#include "levyscale/model.hpp"
#include "levyscale/scale.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace levyscale {

enum class PolicyKind { ClassicBarrier, BailOut, TerminalValue, Impulse };

struct PolicyDiagnostics {
    double residual = 0.0;       // first-order-condition residual at the solution
    bool run_strategy = false;   // terminal value: optimal to liquidate immediately
    bool boundary = false;       // impulse: lower threshold pinned at 0
    bool monotone_tail = true;   // W' non-decreasing beyond the barrier (optimality check)
    double w_min_lower = 0.0;    // bounds mode: certified min of w_lower
    double w_min_upper = 0.0;    // bounds mode: certified upper envelope minimum
    double delta_m = 0.0;        // bounds mode: truncation defect
};

// Solver output. `levels` holds the optimal thresholds ({a*}, {d*}, {b*} or
// {c1*, c2*}); bounds-mode solvers fill `level_interval` with a certified
// enclosure instead of a point claim. The value function is value_head(x) on
// [0, threshold] continued linearly with unit slope beyond.
struct PolicyResult {
    PolicyKind kind = PolicyKind::ClassicBarrier;
    std::vector<double> levels;
    std::optional<std::pair<double, double>> level_interval;
    std::optional<ExpSum> value_head;
    double threshold = 0.0;
    std::optional<ExpSum> u_lower, u_upper; // bounds mode: value sandwich W_bound / w_env
    PolicyDiagnostics diagnostics;
};

// v(x) for x >= 0 under the reported policy (0 for x < 0).
double eval_value(const PolicyResult& r, double x);

// Classic de Finetti barrier: a* is the unique minimiser of W' (the root of
// W'' when W''(0+) < 0, else 0).
PolicyResult classic_barrier(const ScaleBundle& b, double tol = 1e-8);

// Bail-out double barrier (injection cost phi > 1):
//   d* = inf{ a > 0 : G(a) <= 0 },  G = (phi Z - 1) W' - phi q W^2.
// G's e^{2 zeta x} coefficient cancels analytically; it is removed
// symbolically and the surviving leading coefficient decides whether a root
// can exist at all (NoSignChange when G stays positive).
PolicyResult bailout_barrier(const ScaleBundle& b, double phi, double tol = 1e-8);

// Terminal value at ruin P(y) = S + K y:
//   b* = argmax F,  F = (1 - A)/W',  A = K (Z - psi'(0+) W) + S q W.
// Reports run_strategy when the maximum sits at 0.
PolicyResult terminal_barrier(const ScaleBundle& b, double S, double K, double tol = 1e-8);

// Impulse (c1, c2) policy with unit transaction cost delta:
// minimises g(c1,c2) = (W(c2) - W(c1))/(c2 - c1 - delta). Interior candidates
// come from the common-tangent condition W'(c1) = W'(c2) = g (outer bisection
// on the slope level, inner bisections on the two W' crossings); the c1 = 0
// boundary candidate is minimised directly.
PolicyResult impulse_policy(const ScaleBundle& b, double delta, double tol = 1e-8);

// Certified classic-barrier enclosure from truncation bounds: levels = {argmin
// of w_lower}, level_interval = {x : w_lower(x) <= min(w_upper*, w_tilde*)},
// u sandwich W_lower/w_upper* <= u <= W_upper/w_lower*.
PolicyResult classic_bounds(const TruncationBounds& tb, double tol = 1e-8);

// Certified bail-out enclosure: roots of the lower/upper G envelopes.
PolicyResult bailout_bounds(const TruncationBounds& tb, double phi, double tol = 1e-8);

// Convergence sweep towards a CGMY target along the coupled beta-family
// (c_beta = c * beta^shape, alpha_beta = alpha / beta).
struct SweepPoint {
    double beta = 0.0;
    double zeta = 0.0;
    double delta_m = 0.0;
    std::pair<double, double> interval{0.0, 0.0};
    std::vector<double> u_mid;       // midpoint of the value sandwich on the grid
    double density_at_m1 = 0.0;      // nu(-1) of the coupled model
};

struct ConvergenceReport {
    std::vector<double> grid;
    std::vector<SweepPoint> points;
    std::vector<double> sup_diffs;   // sup |u_mid_{i+1} - u_mid_i| over the grid
    bool monotone = false;           // strictly decreasing sup_diffs
    double target_density_at_m1 = 0.0;
};

ConvergenceReport cgmy_sweep(const CgmyTarget& target, double sigma, double drift, double q,
                             const std::vector<double>& betas, std::size_t m,
                             double tol = 1e-10, double grid_max = 3.0,
                             std::size_t grid_points = 501);

} // namespace levyscale
