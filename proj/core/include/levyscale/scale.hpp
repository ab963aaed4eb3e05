#pragma once

#include "levyscale/exp_sum.hpp"
#include "levyscale/model.hpp"
#include "levyscale/roots.hpp"
#include "levyscale/wiener_hopf.hpp"

#include <cstddef>
#include <iosfwd>

namespace levyscale {

// Exact scale-function package for a finite (rational) model.
// Conventions off the half-line: W, W', W'' are 0 for x < 0; Z is 1 for
// x <= 0; intZ(x) = x for x < 0. At the origin W(0) = W0 and W'(0+) = Wp0
// (the bounded-variation case has W0 = 1/drift > 0).
struct ScaleBundle {
    ExpSum W, Wp, Wpp, Z, intZ;
    double q = 0.0;
    double zeta = 0.0;
    double psi_prime_zeta = 0.0;
    double psi_prime_zero = 0.0; // psi'(0+)
    double W0 = 0.0;
    double Wp0 = 0.0;
};

ScaleBundle build_scale_finite(const SpectralModel& m, const RootSystem& rs,
                               const FactorCoefficients& fc);

enum class Curve { W, Wprime, Wsecond, Z, IntZ };
double eval(const ScaleBundle& b, Curve c, double x);

// Certified two-sided envelopes for a truncated meromorphic model.
//   W_upper(x) = e^{zeta x}/psi'(zeta) - sum C_k e^{-xi_k x}
//   W_lower  = W_upper - delta_m (1 + e^{-xi_{m+1} x})
//   w_lower  = W_upper' (term-by-term derivative)
//   w_upper  = w_lower + [max_k xi_k e^{-xi_k x} + tail(x)] delta_m,
//              tail(x) = 1/(e x) while xi_{m+1} <= 1/x, else xi_{m+1} e^{-xi_{m+1} x}
//   w_tilde  = w_lower + max_k xi_k e^{-xi_k x} delta_m + e^{-xi_{m+1} x} epsilon_m
//   Z bounds = 1 + q * antiderivative of the corresponding W bound
// w_upper and w_tilde diverge as x -> 0+; epsilon_m = +inf makes w_tilde
// unusable (the minimisation then falls back to w_upper alone).
struct TruncationBounds {
    ExpSum W_upper, W_lower, w_lower, Z_upper, Z_lower;
    std::vector<double> xis;
    double next_xi = 0.0;
    std::size_t m = 0;
    double q = 0.0;
    double zeta = 0.0;
    double psi_prime_zeta = 0.0;
    double psi_prime_zero = 0.0;
    double delta_m = 0.0;
    double epsilon_m = 0.0;
};

TruncationBounds build_scale_meromorphic(const SpectralModel& m, const RootSystem& rs,
                                         const FactorCoefficients& fc);

enum class BoundCurve { WUpper, WLower, WpLower, WpUpper, WpTilde, ZUpper, ZLower };
double eval(const TruncationBounds& b, BoundCurve c, double x);

// Worst relative error of  W^(s) * (psi(s) - q) = 1  over n points strictly
// inside (zeta + 0.1, zeta + 10); the primary correctness oracle.
double laplace_check(const SpectralModel& m, const ScaleBundle& b, int n = 10);

// Certified-envelope form of the same oracle for truncated systems: the true
// transform 1/(psi(s) - q) must lie between the transforms of W_lower and
// W_upper. Returns the worst relative violation (0 when the sandwich holds
// exactly), so it stays near machine precision for any truncation order.
double laplace_check(const SpectralModel& m, const TruncationBounds& b, int n = 10);

// e^{-zeta x} W(x): the zeta-tilted scale function, increasing to 1/psi'(zeta).
ExpSum w_zeta_version(const ScaleBundle& b);

// CSV export on the grid {a, a+step, ..., <= b}, 12 significant digits.
void export_csv(std::ostream& os, const ScaleBundle& b, double a, double bnd, double step);
void export_csv(std::ostream& os, const TruncationBounds& b, double a, double bnd, double step);

} // namespace levyscale
