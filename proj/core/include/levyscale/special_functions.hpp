#pragma once

#include <complex>

namespace levyscale::special {

// digamma(x) for real non-pole x (negative non-integers handled by reflection).
double digamma(double x);

// log|Gamma(x)|; *sign receives the sign of Gamma(x) (+1/-1).
// Throws PoleEvaluation at non-positive integers.
double log_gamma_signed(double x, int* sign);

// log|B(x,y)| with sign, B(x,y) = Gamma(x)Gamma(y)/Gamma(x+y).
// Poles of Gamma(x+y) are zeros of B and yield -inf (sign +1).
double log_beta_signed(double x, double y, int* sign);

// B(x,y) evaluated through the signed-log route (safe for large/negative args
// where the direct Gamma ratio would overflow or lose the sign).
double beta(double x, double y);

// Principal-branch complex log-Gamma (Lanczos g=7, n=9, with reflection).
std::complex<double> log_gamma(std::complex<double> z);

// Complex Beta via complex log-Gamma.
std::complex<double> beta(std::complex<double> x, std::complex<double> y);

} // namespace levyscale::special
