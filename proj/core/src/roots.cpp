#include "levyscale/roots.hpp"
#include "levyscale/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace levyscale {

namespace {

constexpr double kPoleInset = 2e-9;     // stays outside the 1e-9 pole guard band
constexpr double kMultiplicityTol = 1e-8;
constexpr int kProbePoints = 65;

int sign_of(double v) {
    if (std::isnan(v)) throw NumericalError("root objective evaluated to NaN");
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

// Plain bisection on [lo, hi] with f(lo), f(hi) of opposite sign; stops when
// the bracket is narrower than tol and returns the midpoint.
double bisect(const std::function<double(double)>& f, double lo, double hi, double flo,
              double tol) {
    int slo = sign_of(flo);
    if (slo == 0) return lo;
    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // bracket at double resolution
        const double fm = f(mid);
        const int sm = sign_of(fm);
        if (sm == 0) return mid;
        if (sm == slo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double solve_positive_root(const SpectralModel& m, double q, double tol) {
    if (!(q > 0)) throw ValidationError("q must be > 0");
    if (!(tol > 0)) throw ValidationError("tol must be > 0");
    auto f = [&](double s) { return laplace_exponent(m, s) - q; };
    // psi(0) = 0 < q and psi -> +inf: double the right edge until it crosses.
    double lo = 0.0, hi = 1.0;
    while (f(hi) < 0) {
        lo = hi;
        hi *= 2;
        if (hi > 1e12)
            throw BracketFailure("positive root bracket not found below 1e12");
    }
    return bisect(f, lo, hi, -q, tol);
}

std::vector<double> enumerate_poles(const SpectralModel& m, std::size_t count) {
    if (const auto* h = std::get_if<Hyperexponential>(&m.jumps)) {
        if (count != 0 && count != h->rates.size())
            throw ValidationError("pole count fixed at the number of phases");
        return h->rates;
    }
    if (const auto* p = std::get_if<PhaseType>(&m.jumps)) {
        const std::size_t n = p->alpha.size();
        if (count != 0 && count != n)
            throw ValidationError("pole count fixed at the phase-type order");
        if (n == 0) return {};
        Eigen::MatrixXd T(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = p->T[i][k];
        Eigen::EigenSolver<Eigen::MatrixXd> es(T, /*computeEigenvectors=*/false);
        std::vector<double> poles;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const auto ev = es.eigenvalues()(i);
            if (std::abs(ev.imag()) > 1e-10 * (1.0 + std::abs(ev)))
                throw ComplexPoles("phase-type generator has non-real eigenvalue " +
                                   std::to_string(ev.real()) + " + " +
                                   std::to_string(ev.imag()) + "i");
            poles.push_back(-ev.real());
        }
        std::sort(poles.begin(), poles.end());
        for (std::size_t i = 0; i + 1 < poles.size(); ++i)
            if (poles[i + 1] - poles[i] <= kMultiplicityTol * (1.0 + std::abs(poles[i + 1])))
                throw MultiplicityDetected("phase-type eigenvalues coincide near " +
                                           std::to_string(-poles[i]));
        if (poles.front() <= 0)
            throw ComplexPoles("phase-type generator has a non-negative eigenvalue");
        return poles;
    }
    if (const auto* b = std::get_if<BetaFamily>(&m.jumps)) {
        std::vector<double> poles;
        poles.reserve(count);
        for (std::size_t k = 1; k <= count; ++k)
            poles.push_back(b->beta * (b->alpha + static_cast<double>(k) - 1.0));
        return poles;
    }
    throw ValidationError("CGMY target has no pole ladder; use the coupled beta-family");
}

namespace {

// One negative root -xi with xi in (lo, hi) between consecutive poles.
// The bracket edges are inset to stay clear of the pole guard band; when the
// edge signs agree (possible for the beta family, whose Beta-function signs
// alternate), an interior probe scan locates the sign change.
double root_in_rung(const std::function<double(double)>& g, double lo, double hi,
                    double tol, std::size_t k) {
    const double lo_in = lo == 0.0 ? 0.0 : lo + kPoleInset * (1.0 + lo);
    const double hi_in = hi - kPoleInset * (1.0 + hi);
    if (!(hi_in > lo_in))
        throw BracketFailure("pole gap too narrow for rung " + std::to_string(k));
    const double glo = g(lo_in);
    const double ghi = g(hi_in);
    if (sign_of(glo) == 0) return lo_in;
    if (sign_of(ghi) == 0) return hi_in;
    if (sign_of(glo) != sign_of(ghi)) return bisect(g, lo_in, hi_in, glo, tol);

    double t_prev = lo_in, g_prev = glo;
    for (int j = 1; j <= kProbePoints + 1; ++j) {
        const double t = lo_in + (hi_in - lo_in) * j / (kProbePoints + 1.0);
        const double gt = j <= kProbePoints ? g(t) : ghi;
        if (sign_of(gt) == 0) return t;
        if (sign_of(gt) != sign_of(g_prev)) return bisect(g, t_prev, t, g_prev, tol);
        t_prev = t;
        g_prev = gt;
    }
    throw BracketFailure("no sign change in rung " + std::to_string(k) +
                         " after interior probing");
}

} // namespace

std::vector<double> solve_negative_roots(const SpectralModel& m, double q, std::size_t count,
                                         double tol) {
    if (!(q > 0)) throw ValidationError("q must be > 0");
    if (!(tol > 0)) throw ValidationError("tol must be > 0");
    const bool meromorphic = is_meromorphic(m);
    if (meromorphic && count == 0)
        throw ValidationError("meromorphic models need an explicit truncation size");

    auto g = [&](double t) { return laplace_exponent(m, -t) - q; };

    std::vector<double> poles = enumerate_poles(m, meromorphic ? count : 0);
    std::vector<double> xis;

    const std::size_t rungs = meromorphic ? count : poles.size();
    double lo = 0.0;
    for (std::size_t k = 0; k < rungs; ++k) {
        xis.push_back(root_in_rung(g, lo, poles[k], tol, k + 1));
        lo = poles[k];
    }

    // sigma > 0 adds one root beyond the last pole of a finite model.
    if (!meromorphic && m.sigma > 0) {
        const double base = poles.empty() ? 0.0 : poles.back();
        double a = base == 0.0 ? 0.0 : base + kPoleInset * (1.0 + base);
        double ga = g(a);
        // Just right of the last pole psi(-t) - q is negative (it climbs back
        // from -inf); expand until the quadratic term wins.
        double width = std::max(1.0, 0.1 * (1.0 + base));
        double b = a + width;
        int it = 0;
        while (sign_of(g(b)) == sign_of(ga)) {
            a = b;
            ga = g(a);
            b += width;
            width *= 2;
            if (++it > 200)
                throw BracketFailure("no sign change beyond the last pole");
        }
        xis.push_back(bisect(g, a, b, ga, tol));
    }
    return xis;
}

void validate_root_system(const std::vector<double>& xis, const std::vector<double>& poles) {
    for (std::size_t i = 0; i + 1 < xis.size(); ++i) {
        if (xis[i + 1] <= xis[i])
            throw NumericalError("negative roots are not strictly ascending");
        if (xis[i + 1] - xis[i] <= kMultiplicityTol * (1.0 + xis[i + 1]))
            throw MultiplicityDetected("roots " + std::to_string(xis[i]) + " and " +
                                       std::to_string(xis[i + 1]) + " coincide");
    }
    for (std::size_t i = 0; i + 1 < poles.size(); ++i) {
        if (poles[i + 1] <= poles[i])
            throw NumericalError("poles are not strictly ascending");
        if (poles[i + 1] - poles[i] <= kMultiplicityTol * (1.0 + poles[i + 1]))
            throw MultiplicityDetected("poles " + std::to_string(poles[i]) + " and " +
                                       std::to_string(poles[i + 1]) + " coincide");
    }
    // Interlacing: eta_{k-1} < xi_k < eta_k (the final root may exceed the
    // last pole when sigma > 0, covered by the lower-edge rule only).
    for (std::size_t k = 0; k < xis.size(); ++k) {
        if (k < poles.size() && !(xis[k] < poles[k]))
            throw NumericalError("interlacing violated: xi_" + std::to_string(k + 1) +
                                 " >= eta_" + std::to_string(k + 1));
        if (k > 0 && k - 1 < poles.size() && !(xis[k] > poles[k - 1]))
            throw NumericalError("interlacing violated: xi_" + std::to_string(k + 1) +
                                 " <= eta_" + std::to_string(k));
        if (!(xis[k] > 0)) throw NumericalError("negative-root magnitudes must be positive");
    }
}

RootSystem solve_roots(const SpectralModel& m, double q, std::size_t count, double tol) {
    validate(m);
    RootSystem rs;
    rs.q = q;
    rs.tol = tol;
    rs.variation = path_variation(m);
    rs.truncated = is_meromorphic(m);
    rs.zeta = solve_positive_root(m, q, tol);
    rs.zeta_residual = std::abs(laplace_exponent(m, rs.zeta) - q);

    if (rs.truncated) {
        if (count == 0) throw ValidationError("meromorphic models need a truncation size");
        std::vector<double> xs = solve_negative_roots(m, q, count + 1, tol);
        rs.next_xi = xs.back();
        xs.pop_back();
        rs.xis = std::move(xs);
        rs.poles = enumerate_poles(m, count);
    } else {
        rs.xis = solve_negative_roots(m, q, 0, tol);
        rs.poles = enumerate_poles(m, 0);
    }
    for (double x : rs.xis) rs.xi_residuals.push_back(std::abs(laplace_exponent(m, -x) - q));
    validate_root_system(rs.xis, rs.poles);
    return rs;
}

} // namespace levyscale
