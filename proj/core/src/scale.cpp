#include "levyscale/scale.hpp"
#include "levyscale/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace levyscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kE = 2.71828182845904523536;

ExpSum z_from_w(const ExpSum& W, double q) {
    ExpSum Z = W.antiderivative().scaled(q);
    Z.add_term(1.0, 0.0, 0);
    return Z;
}

} // namespace

ScaleBundle build_scale_finite(const SpectralModel& m, const RootSystem& rs,
                               const FactorCoefficients& fc) {
    if (fc.truncated)
        throw ValidationError("build_scale_finite requires a finite (rational) model");
    const BoundaryConstants bc = boundary_constants(m, rs.q, rs.zeta);

    ScaleBundle b;
    b.q = rs.q;
    b.zeta = rs.zeta;
    b.psi_prime_zeta = fc.psi_prime_zeta;
    b.psi_prime_zero = laplace_exponent_derivative(m, 0.0);
    b.W0 = bc.W0;
    b.Wp0 = bc.Wp0;

    // W(x) = (W0 + sum C) e^{zeta x} - sum C_k e^{-xi_k x}; the coefficients
    // C_k carry the (zeta/q) prefactor, equal to theta/varrho by the boundary
    // lemma (cross-checked in check_identities).
    double sumC = 0.0;
    for (double c : fc.C) sumC += c;
    b.W.add_term(bc.W0 + sumC, rs.zeta, 0);
    for (std::size_t k = 0; k < fc.C.size(); ++k) b.W.add_term(-fc.C[k], -rs.xis[k], 0);

    b.Wp = b.W.derivative();
    b.Wpp = b.Wp.derivative();
    b.Z = z_from_w(b.W, rs.q);
    b.intZ = b.Z.antiderivative();
    return b;
}

double eval(const ScaleBundle& b, Curve c, double x) {
    if (x < 0) {
        switch (c) {
            case Curve::W:
            case Curve::Wprime:
            case Curve::Wsecond: return 0.0;
            case Curve::Z: return 1.0;
            case Curve::IntZ: return x;
        }
    }
    switch (c) {
        case Curve::W: return b.W.eval(x);
        case Curve::Wprime: return b.Wp.eval(x);
        case Curve::Wsecond: return b.Wpp.eval(x);
        case Curve::Z: return b.Z.eval(x);
        case Curve::IntZ: return b.intZ.eval(x);
    }
    return 0.0;
}

TruncationBounds build_scale_meromorphic(const SpectralModel& m, const RootSystem& rs,
                                         const FactorCoefficients& fc) {
    if (!fc.truncated)
        throw ValidationError("build_scale_meromorphic requires a meromorphic model");
    TruncationBounds b;
    b.xis = rs.xis;
    b.next_xi = rs.next_xi;
    b.m = rs.xis.size();
    b.q = rs.q;
    b.zeta = rs.zeta;
    b.psi_prime_zeta = fc.psi_prime_zeta;
    b.psi_prime_zero = laplace_exponent_derivative(m, 0.0);
    b.delta_m = fc.delta_m;
    b.epsilon_m = fc.epsilon_m;

    b.W_upper.add_term(1.0 / fc.psi_prime_zeta, rs.zeta, 0);
    for (std::size_t k = 0; k < fc.C.size(); ++k)
        b.W_upper.add_term(-fc.C[k], -rs.xis[k], 0);

    b.W_lower = b.W_upper;
    b.W_lower.add_term(-fc.delta_m, 0.0, 0);
    b.W_lower.add_term(-fc.delta_m, -rs.next_xi, 0);

    b.w_lower = b.W_upper.derivative();
    b.Z_upper = z_from_w(b.W_upper, rs.q);
    b.Z_lower = z_from_w(b.W_lower, rs.q);
    return b;
}

namespace {

double max_discrete_peak(const std::vector<double>& xis, double x) {
    // max over the solved roots of xi * e^{-xi x}; unimodal in xi with peak
    // at 1/x, but the list is short enough to scan.
    double best = 0.0;
    for (double xi : xis) best = std::max(best, xi * std::exp(-xi * x));
    return best;
}

double tail_peak(double next_xi, double x) {
    // sup over xi >= xi_{m+1} of xi * e^{-xi x}
    if (x <= 0) return kInf;
    if (next_xi <= 1.0 / x) return 1.0 / (kE * x);
    return next_xi * std::exp(-next_xi * x);
}

} // namespace

double eval(const TruncationBounds& b, BoundCurve c, double x) {
    if (x < 0) {
        switch (c) {
            case BoundCurve::WUpper:
            case BoundCurve::WLower:
            case BoundCurve::WpLower:
            case BoundCurve::WpUpper:
            case BoundCurve::WpTilde: return 0.0;
            case BoundCurve::ZUpper:
            case BoundCurve::ZLower: return 1.0;
        }
    }
    switch (c) {
        case BoundCurve::WUpper: return b.W_upper.eval(x);
        case BoundCurve::WLower: return b.W_lower.eval(x);
        case BoundCurve::WpLower: return b.w_lower.eval(x);
        case BoundCurve::WpUpper:
            return b.w_lower.eval(x) +
                   (max_discrete_peak(b.xis, x) + tail_peak(b.next_xi, x)) * b.delta_m;
        case BoundCurve::WpTilde:
            if (std::isinf(b.epsilon_m)) return kInf;
            return b.w_lower.eval(x) + max_discrete_peak(b.xis, x) * b.delta_m +
                   std::exp(-b.next_xi * x) * b.epsilon_m;
        case BoundCurve::ZUpper: return b.Z_upper.eval(x);
        case BoundCurve::ZLower: return b.Z_lower.eval(x);
    }
    return 0.0;
}

double laplace_check(const SpectralModel& m, const ScaleBundle& b, int n) {
    double worst = 0.0;
    for (int j = 1; j <= n; ++j) {
        const double s = b.zeta + 0.1 + 9.9 * j / (n + 1.0);
        const double lhs = b.W.laplace_transform(s) * (laplace_exponent(m, s) - b.q);
        worst = std::max(worst, std::abs(lhs - 1.0));
    }
    return worst;
}

double laplace_check(const SpectralModel& m, const TruncationBounds& b, int n) {
    double worst = 0.0;
    for (int j = 1; j <= n; ++j) {
        const double s = b.zeta + 0.1 + 9.9 * j / (n + 1.0);
        const double truth = 1.0 / (laplace_exponent(m, s) - b.q);
        const double lo = b.W_lower.laplace_transform(s);
        const double hi = b.W_upper.laplace_transform(s);
        const double viol = std::max({0.0, lo - truth, truth - hi});
        worst = std::max(worst, viol / truth);
    }
    return worst;
}

ExpSum w_zeta_version(const ScaleBundle& b) {
    ExpSum t;
    for (const auto& term : b.W.terms()) t.add_term(term.weight, term.rate - b.zeta, term.power);
    return t;
}

namespace {

void write_cell(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    os << buf;
}

template <typename Row>
void write_grid(std::ostream& os, double a, double bnd, double step, const Row& row) {
    const double n_steps = std::floor((bnd - a) / step + 1e-9);
    for (long i = 0; i <= static_cast<long>(n_steps); ++i) {
        const double x = a + step * i;
        row(x);
        os << "\n";
    }
}

} // namespace

void export_csv(std::ostream& os, const ScaleBundle& b, double a, double bnd, double step) {
    if (!(step > 0) || bnd < a) throw ValidationError("bad CSV grid");
    os << "x,W,W_prime,W_second,Z,intZ\n";
    write_grid(os, a, bnd, step, [&](double x) {
        write_cell(os, x);
        for (Curve c : {Curve::W, Curve::Wprime, Curve::Wsecond, Curve::Z, Curve::IntZ}) {
            os << ",";
            write_cell(os, eval(b, c, x));
        }
    });
}

void export_csv(std::ostream& os, const TruncationBounds& b, double a, double bnd, double step) {
    if (!(step > 0) || bnd < a) throw ValidationError("bad CSV grid");
    os << "x,W_lower,W_upper,w_lower,w_upper,w_tilde,Z_lower,Z_upper\n";
    write_grid(os, a, bnd, step, [&](double x) {
        write_cell(os, x);
        for (BoundCurve c : {BoundCurve::WLower, BoundCurve::WUpper, BoundCurve::WpLower,
                             BoundCurve::WpUpper, BoundCurve::WpTilde, BoundCurve::ZLower,
                             BoundCurve::ZUpper}) {
            os << ",";
            write_cell(os, eval(b, c, x));
        }
    });
}

} // namespace levyscale
