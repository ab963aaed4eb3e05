#include "levyscale/wiener_hopf.hpp"
#include "levyscale/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace levyscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDivisionFloor = 1e-14;

} // namespace

std::vector<double> compute_A(const std::vector<double>& xis, const std::vector<double>& poles) {
    const std::size_t n = xis.size();
    std::vector<double> A(n);
    for (std::size_t k = 0; k < n; ++k) {
        double log_mag = 0.0;
        int sign = 1;
        for (double eta : poles) {
            const double f = 1.0 - xis[k] / eta;
            if (std::abs(f) < kDivisionFloor)
                throw DivisionNearZero("factor (1 - xi/eta) vanished for xi = " +
                                       std::to_string(xis[k]));
            log_mag += std::log(std::abs(f));
            if (f < 0) sign = -sign;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const double f = 1.0 - xis[k] / xis[i];
            if (std::abs(f) < kDivisionFloor)
                throw DivisionNearZero("factor (1 - xi_k/xi_i) vanished for xi = " +
                                       std::to_string(xis[k]));
            log_mag -= std::log(std::abs(f));
            if (f < 0) sign = -sign;
        }
        if (sign < 0)
            throw NumericalError("residue weight A_" + std::to_string(k + 1) +
                                 " came out negative; interlacing is broken");
        A[k] = std::exp(log_mag);
    }
    return A;
}

FactorCoefficients compute_coefficients(const SpectralModel& m, const RootSystem& rs) {
    FactorCoefficients fc;
    fc.truncated = rs.truncated;
    fc.A = compute_A(rs.xis, rs.poles);

    fc.psi_prime_zeta = laplace_exponent_derivative(m, rs.zeta);
    if (!(fc.psi_prime_zeta > 0))
        throw NumericalError("psi'(zeta) must be positive at the right-most root");

    const BoundaryConstants bc = boundary_constants(m, rs.q, rs.zeta);
    fc.theta = bc.theta;
    fc.kappa = 1.0 / fc.psi_prime_zeta - bc.W0;

    const double zq = rs.zeta / rs.q;
    double sumC = 0.0;
    fc.C.resize(fc.A.size());
    for (std::size_t k = 0; k < fc.A.size(); ++k) {
        fc.varrho += fc.A[k] * rs.xis[k];
        fc.C[k] = zq * rs.xis[k] * fc.A[k] / (rs.zeta + rs.xis[k]);
        sumC += fc.C[k];
    }

    if (rs.truncated) {
        fc.delta_m = fc.kappa - sumC;
        if (fc.delta_m < 0) {
            if (fc.delta_m < -1e-10 * std::max(1.0, fc.kappa))
                throw NumericalError("truncation defect delta_m came out negative");
            fc.delta_m = 0.0;
        }
        fc.epsilon_m = std::isinf(fc.theta) ? kInf : fc.theta - zq * fc.varrho;
        if (!std::isinf(fc.epsilon_m) && fc.epsilon_m < 0) {
            if (fc.epsilon_m < -1e-10 * std::max(1.0, fc.theta))
                throw NumericalError("truncation defect epsilon_m came out negative");
            fc.epsilon_m = 0.0;
        }
    } else if (m.sigma == 0.0) {
        // Bounded variation: the infimum law carries an atom at the origin.
        double log_ratio = 0.0;
        for (std::size_t k = 0; k < rs.xis.size(); ++k)
            log_ratio += std::log(rs.xis[k] / rs.poles[k]);
        fc.atom = std::exp(log_ratio);
    }
    return fc;
}

double IdentityReport::worst() const {
    double w = 0.0;
    if (mass_residual) w = std::max(w, *mass_residual);
    if (lemma_residual) w = std::max(w, *lemma_residual);
    if (kappa_residual) w = std::max(w, *kappa_residual);
    if (residue_worst) w = std::max(w, *residue_worst);
    if (partial_sums_grow && !*partial_sums_grow) w = kInf;
    return w;
}

IdentityReport check_identities(const SpectralModel& m, const RootSystem& rs,
                                const FactorCoefficients& fc, unsigned seed) {
    IdentityReport rep;
    const double zq = rs.zeta / rs.q;

    if (!fc.truncated) {
        double sumA = 0.0, sumC = 0.0;
        for (double a : fc.A) sumA += a;
        for (double c : fc.C) sumC += c;
        rep.mass_residual = std::abs(sumA + fc.atom - 1.0);
        if (!std::isinf(fc.theta))
            rep.lemma_residual = std::abs(zq - fc.theta / fc.varrho) / zq;
        if (fc.kappa != 0.0)
            rep.kappa_residual = std::abs(fc.kappa - sumC) / std::abs(fc.kappa);

        // Wiener-Hopf reconstruction: q/(q - psi(s)) must equal the product of
        // the two factors  [zeta/(zeta - s)] * [sum A xi/(xi + s) + atom]
        // at arbitrary s > 0 away from the roots.
        std::mt19937 gen(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        int done = 0;
        while (done < 10) {
            const double s = u(gen) * 2.0 * rs.zeta;
            if (std::abs(s - rs.zeta) < 0.05 * rs.zeta) continue;
            bool near_pole = false;
            for (double eta : rs.poles)
                if (std::abs(s - eta) < 1e-6 * (1 + eta)) near_pole = true;
            if (near_pole) continue;
            const double lhs = rs.q / (rs.q - laplace_exponent(m, s));
            double inf_factor = fc.atom;
            for (std::size_t k = 0; k < fc.A.size(); ++k)
                inf_factor += fc.A[k] * rs.xis[k] / (rs.xis[k] + s);
            const double rhs = rs.zeta / (rs.zeta - s) * inf_factor;
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
            ++done;
        }
        rep.residue_worst = worst;
        return rep;
    }

    // Truncated systems: the exact identities hold only in the m -> inf
    // limit; certify that the partial sums march in the right direction.
    const std::size_t mfull = rs.xis.size();
    auto partial_varrho = [&](std::size_t mm) {
        std::vector<double> xs(rs.xis.begin(), rs.xis.begin() + mm);
        std::vector<double> ps(rs.poles.begin(), rs.poles.begin() + mm);
        const std::vector<double> A = compute_A(xs, ps);
        double v = 0.0;
        for (std::size_t k = 0; k < mm; ++k) v += A[k] * xs[k];
        return v;
    };
    if (mfull >= 4) {
        const double v1 = partial_varrho(mfull / 4);
        const double v2 = partial_varrho(mfull / 2);
        rep.partial_sums_grow = (v1 < v2) && (v2 < fc.varrho);
    } else {
        rep.partial_sums_grow = true;
    }
    // When theta is finite the partial sums must stay below it.
    if (!std::isinf(fc.theta) && zq * fc.varrho > fc.theta * (1 + 1e-12))
        rep.partial_sums_grow = false;
    return rep;
}

} // namespace levyscale
