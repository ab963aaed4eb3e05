#pragma once

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

namespace levyscale {

// Compound-Poisson jumps whose magnitude density is a mixture of
// exponentials: nu(dz) = lambda * sum_i alpha_i eta_i e^{eta_i z} dz, z < 0.
// lambda = 0 with empty lists degenerates to a pure Brownian-with-drift model.
struct Hyperexponential {
    double lambda = 0.0;
    std::vector<double> weights; // alpha_i, sum to 1, all > 0
    std::vector<double> rates;   // eta_i, strictly increasing, all > 0
};

// Compound-Poisson jumps with phase-type magnitude (initial row vector alpha,
// sub-generator T; exit vector t = -T*1).
struct PhaseType {
    double lambda = 0.0;
    std::vector<double> alpha;
    std::vector<std::vector<double>> T;
};

// One-sided beta-family: nu(z) = c * e^{alpha beta z} / (1 - e^{beta z})^shape, z < 0.
// shape in (0,3) \ {1,2}; infinite activity iff shape >= 1.
struct BetaFamily {
    double c = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
    double shape = 0.5;
};

// Spectrally one-sided CGMY target: nu(z) = c * e^{alpha z} / |z|^shape, z < 0.
// No closed-form Laplace exponent is exposed here; it is approached through
// the coupled beta-family (c_beta = c * beta^shape, alpha_beta = alpha / beta).
struct CgmyTarget {
    double c = 0.0;
    double alpha = 1.0;
    double shape = 0.5;
};

using JumpModel = std::variant<Hyperexponential, PhaseType, BetaFamily, CgmyTarget>;

enum class PathVariation { BoundedVariation, UnboundedVariation };

// X_t = drift * t + sigma * B_t - (jumps). For Hyperexponential/PhaseType the
// drift is the canonical linear coefficient of that decomposition; for
// BetaFamily it is the linear coefficient of the compensated exponent form.
struct SpectralModel {
    double sigma = 0.0;
    double drift = 0.0;
    JumpModel jumps;
};

// Validates and returns the model; throws ValidationError on bad parameters.
SpectralModel make_model(double sigma, double drift, JumpModel jumps);
void validate(const SpectralModel& m);

PathVariation path_variation(const SpectralModel& m);
bool infinite_activity(const SpectralModel& m);
// Total jump-measure mass nu(-inf, 0); +inf for infinite-activity models.
double jump_mass(const SpectralModel& m);

// psi(s) = log E[e^{s X_1}], real and complex overloads.
double laplace_exponent(const SpectralModel& m, double s);
std::complex<double> laplace_exponent(const SpectralModel& m, std::complex<double> s);
// psi'(s), analytic (no finite differences).
double laplace_exponent_derivative(const SpectralModel& m, double s);

// Levy density at z < 0 (density of nu with respect to Lebesgue measure).
double levy_density(const SpectralModel& m, double z);

// Number of exponential phases (poles of psi): list size for HE, matrix order
// for PT. Meromorphic families have infinitely many; returns 0 for those.
std::size_t finite_pole_count(const SpectralModel& m);
bool is_meromorphic(const SpectralModel& m);

struct BoundaryConstants {
    double W0;     // W^{(q)}(0+): 0 in the unbounded-variation case, 1/drift otherwise
    double Wp0;    // W^{(q)}'(0+): 2/sigma^2, or (q+Lambda)/drift^2, or +inf
    double theta;  // 2/sigma^2, or -zeta/drift + (q+Lambda)/drift^2 (needs zeta)
};
// zeta is the positive root of psi = q (only used in the sigma = 0 case).
BoundaryConstants boundary_constants(const SpectralModel& m, double q, double zeta);

} // namespace levyscale
