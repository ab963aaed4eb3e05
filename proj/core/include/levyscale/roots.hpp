#pragma once

#include "levyscale/model.hpp"

#include <cstddef>
#include <vector>

namespace levyscale {

// Certified root inventory of psi(s) = q on the real line.
//
// zeta is the unique positive root. xis holds the magnitudes of the negative
// roots (the roots themselves are -xi_k), ascending, interlaced with the
// poles -eta_k of psi. For finite models (hyperexponential / phase-type with
// m phases) xis holds all of them: m+1 when sigma > 0, m when sigma = 0.
// For meromorphic models xis holds the first m of infinitely many and next_xi
// carries xi_{m+1}, which the truncation bounds need.
struct RootSystem {
    double q = 0.0;
    double tol = 0.0;
    double zeta = 0.0;
    double zeta_residual = 0.0;           // |psi(zeta) - q|
    std::vector<double> xis;
    std::vector<double> xi_residuals;     // |psi(-xi_k) - q|
    std::vector<double> poles;            // eta_k, ascending
    bool truncated = false;               // meromorphic family
    double next_xi = 0.0;                 // xi_{m+1} when truncated
    PathVariation variation = PathVariation::UnboundedVariation;
};

// Positive root of psi(s) = q (q > 0) by doubling bracket + bisection;
// terminates when the bracket width is <= tol.
double solve_positive_root(const SpectralModel& m, double q, double tol = 1e-10);

// First `count` poles eta_k (ascending). For finite models count must be 0
// (auto) or the natural phase count. Phase-type generators with non-real or
// coincident eigenvalues throw ComplexPoles / MultiplicityDetected.
std::vector<double> enumerate_poles(const SpectralModel& m, std::size_t count = 0);

// Magnitudes of the negative roots, ascending. `count` = 0 selects the
// natural count for finite models; meromorphic models require count >= 1.
std::vector<double> solve_negative_roots(const SpectralModel& m, double q,
                                         std::size_t count = 0, double tol = 1e-10);

// Full inventory with residual certificates and interlacing validation.
// For meromorphic models `count` negative roots are extracted and xi_{m+1}
// is solved additionally into next_xi.
RootSystem solve_roots(const SpectralModel& m, double q, std::size_t count = 0,
                       double tol = 1e-10);

// Structural checks on an (xis, poles) ladder: strict ascending order,
// pairwise separation above the multiplicity floor (1e-8 relative, throws
// MultiplicityDetected), strict interlacing eta_{k-1} < xi_k < eta_k.
void validate_root_system(const std::vector<double>& xis, const std::vector<double>& poles);

} // namespace levyscale
