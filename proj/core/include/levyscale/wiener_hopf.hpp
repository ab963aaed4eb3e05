#pragma once

#include "levyscale/model.hpp"
#include "levyscale/roots.hpp"

#include <optional>
#include <vector>

namespace levyscale {

// Partial-fraction data of the running-infimum factor.
//
// A[k] is the residue weight of root -xi_k; for truncated (meromorphic)
// systems these are the truncation-consistent A^{(m)}_k, which increase to
// the true A_k as m grows. C[k] = (zeta/q) * xi_k * A[k] / (zeta + xi_k).
struct FactorCoefficients {
    std::vector<double> A;
    std::vector<double> C;
    double varrho = 0.0;         // sum A_k xi_k (partial sum when truncated)
    double theta = 0.0;          // boundary constant; +inf when sigma=0 and activity is infinite
    double psi_prime_zeta = 0.0;
    double kappa = 0.0;          // 1/psi'(zeta) - W(0)
    double delta_m = 0.0;        // kappa - sum C_k       (0 for finite systems)
    double epsilon_m = 0.0;      // theta - (zeta/q) varrho (0 for finite; may be +inf)
    double atom = 0.0;           // infimum mass at 0: prod xi_i/eta_i (sigma=0 finite case)
    bool truncated = false;
};

// Residue weights for a root/pole ladder:
//   A_k = prod_i (1 - xi_k/eta_i) / prod_{i != k} (1 - xi_k/xi_i),
// evaluated in log space with sign tracking. Factors below the safe-division
// floor throw DivisionNearZero; a negative assembled weight (broken
// interlacing) throws NumericalError.
std::vector<double> compute_A(const std::vector<double>& xis, const std::vector<double>& poles);

FactorCoefficients compute_coefficients(const SpectralModel& m, const RootSystem& rs);

// Cross-checks tying the expansion back to the model. Residuals are relative;
// each is present only where the identity applies (finite vs truncated,
// finite vs infinite theta).
struct IdentityReport {
    std::optional<double> mass_residual;     // |sum A + atom - 1|
    std::optional<double> lemma_residual;    // |zeta/q - theta/varrho| / (zeta/q)
    std::optional<double> kappa_residual;    // |kappa - sum C| / kappa
    std::optional<double> residue_worst;     // WH product vs q/(q - psi) at random s
    std::optional<bool> partial_sums_grow;   // truncated: varrho^(m/4) < varrho^(m/2) < varrho^(m)
    double worst() const;                    // largest present residual (inf if growth fails)
};

IdentityReport check_identities(const SpectralModel& m, const RootSystem& rs,
                                const FactorCoefficients& fc, unsigned seed = 12345);

} // namespace levyscale
