#include "levyscale/dividends.hpp"
#include "levyscale/errors.hpp"
#include "levyscale/roots.hpp"
#include "levyscale/wiener_hopf.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace levyscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.61803398874989484820; // (sqrt(5)-1)/2
constexpr double kScanStep = 0.01;

using Fn = std::function<double(double)>;

// |f|-magnitude at x (same terms, absolute weights): the natural scale
// against which a cancellation residual should be measured.
double magnitude_at(const ExpSum& f, double x) {
    ExpSum a;
    for (const auto& t : f.terms()) a.add_term(std::abs(t.weight), t.rate, t.power);
    return a.eval(x);
}

double bisect(const Fn& f, double lo, double hi, double flo, double tol) {
    int slo = flo > 0 ? 1 : (flo < 0 ? -1 : 0);
    if (slo == 0) return lo;
    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0 ? 1 : -1) == slo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double golden_min(const Fn& f, double lo, double hi, double tol) {
    double a = lo, b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 300 && b - a > tol; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// Global minimiser of a convex function on [lo, inf): doubles the right edge
// until the function starts climbing again, then golden-sections.
double convex_min(const Fn& f, double lo, double x_cap, double tol) {
    double hi = std::min(std::max(1.0, 2.0 * lo + 1.0), x_cap);
    int it = 0;
    while (hi < x_cap && f(hi) < f(0.5 * (lo + hi))) {
        hi = std::min(hi * 2.0, x_cap);
        if (++it > 200) throw NumericalError("convex minimiser bracket did not close");
    }
    return golden_min(f, lo, hi, tol);
}

// Grid argmin with right-edge expansion, then golden refinement.
double grid_then_golden_min(const Fn& f, double lo, double x_cap, double tol) {
    double hi = std::min(lo + 2.0, x_cap);
    while (true) {
        const long n = static_cast<long>(std::floor((hi - lo) / kScanStep)) + 1;
        long best = 0;
        double fbest = kInf;
        for (long i = 0; i <= n; ++i) {
            const double x = std::min(lo + kScanStep * i, hi);
            const double v = f(x);
            if (v < fbest) {
                fbest = v;
                best = i;
            }
        }
        const double xb = std::min(lo + kScanStep * best, hi);
        if (xb < hi - 0.1 * (hi - lo) || hi >= x_cap) {
            const double a = std::max(lo, xb - kScanStep);
            const double b = std::min(hi, xb + kScanStep);
            return golden_min(f, a, b, tol);
        }
        hi = std::min(hi * 2.0, x_cap);
    }
}

double overflow_cap(double zeta) { return 690.0 / std::max(zeta, 1e-6); }

// First x > from where f crosses from positive to <= 0; nullopt-ish via NaN.
double scan_first_crossing(const Fn& f, double from, double to, double tol, bool* found) {
    *found = false;
    double x_prev = from, f_prev = f(from);
    if (f_prev <= 0.0) {
        *found = true;
        return from;
    }
    for (double x = from + kScanStep; x_prev < to; x += kScanStep) {
        if (x > to) x = to;
        const double fx = f(x);
        if (fx <= 0.0) {
            *found = true;
            return bisect(f, x_prev, x, f_prev, tol);
        }
        x_prev = x;
        f_prev = fx;
        if (x >= to) break;
    }
    return 0.0;
}

bool wp_nondecreasing_after(const ExpSum& Wp, double from, double span, double x_cap) {
    const double to = std::min(from + span, x_cap);
    double prev = Wp.eval(from);
    for (int i = 1; i <= 50; ++i) {
        const double x = from + (to - from) * i / 50.0;
        const double v = Wp.eval(x);
        if (v < prev * (1.0 - 1e-10) - 1e-12) return false;
        prev = v;
    }
    return true;
}

// Root of W'' (unique minimiser of W' for completely monotone jump models);
// 0 when W' is non-decreasing from the start.
double wprime_argmin(const ScaleBundle& b, double tol) {
    const double wpp0 = b.Wpp.eval(0.0);
    if (wpp0 >= 0.0) return 0.0;
    const double cap = overflow_cap(b.zeta);
    double hi = 1.0;
    int it = 0;
    while (b.Wpp.eval(hi) < 0.0) {
        hi = std::min(hi * 2.0, cap);
        if (++it > 200 || hi >= cap)
            throw NumericalError("W'' stayed negative to the overflow horizon");
    }
    auto f = [&](double x) { return b.Wpp.eval(x); };
    return bisect(f, 0.0, hi, wpp0, tol);
}

} // namespace

double eval_value(const PolicyResult& r, double x) {
    if (x < 0.0) return 0.0;
    if (!r.value_head)
        throw ValidationError("policy result carries no value function");
    if (x <= r.threshold) return r.value_head->eval(x);
    return r.value_head->eval(r.threshold) + (x - r.threshold);
}

PolicyResult classic_barrier(const ScaleBundle& b, double tol) {
    PolicyResult res;
    res.kind = PolicyKind::ClassicBarrier;
    const double a = wprime_argmin(b, tol);
    res.levels = {a};
    res.threshold = a;
    res.value_head = b.W.scaled(1.0 / b.Wp.eval(a));
    res.diagnostics.residual =
        a > 0.0 ? std::abs(b.Wpp.eval(a)) / magnitude_at(b.Wpp, a) : 0.0;
    res.diagnostics.monotone_tail = wp_nondecreasing_after(b.Wp, a, 5.0, overflow_cap(b.zeta));
    return res;
}

PolicyResult bailout_barrier(const ScaleBundle& b, double phi, double tol) {
    if (!(phi > 1.0)) throw ValidationError("bail-out cost phi must exceed 1");
    PolicyResult res;
    res.kind = PolicyKind::BailOut;

    ExpSum zphi = b.Z.scaled(phi);
    zphi.add_term(-1.0, 0.0, 0);
    ExpSum G = zphi.times(b.Wp).plus(b.W.times(b.W).scaled(-phi * b.q));

    // The e^{2 zeta x} coefficient of G cancels exactly: phi*q*w^2 from
    // (phi Z) W' against phi*q*w^2 from phi q W^2, w = 1/psi'(zeta). Drop the
    // floating-point residue so it cannot manufacture sign changes at large x.
    const double w = 1.0 / b.psi_prime_zeta;
    const double removed = G.remove_rate(2.0 * b.zeta, 1e-12 * (1.0 + 2.0 * b.zeta));
    if (std::abs(removed) > 1e-6 * phi * b.q * w * w)
        throw NumericalError("e^{2 zeta x} coefficient of G failed to cancel");
    G.prune();

    // Surviving leading coefficient: zeta * w * (phi * z0 - 1) at rate zeta.
    double lead = 0.0, second_rate = -kInf, others = 0.0;
    for (const auto& t : G.terms()) {
        if (std::abs(t.rate - b.zeta) <= 1e-12 * (1.0 + b.zeta)) {
            lead += t.weight;
        } else {
            second_rate = std::max(second_rate, t.rate);
            others += std::abs(t.weight);
        }
    }
    const double gap = b.zeta - (std::isinf(second_rate) ? 0.0 : second_rate);

    auto g = [&](double x) { return G.eval(x); };
    const double g0 = g(0.0);
    if (g0 <= 0.0) {
        res.levels = {0.0};
        res.threshold = 0.0;
        res.diagnostics.boundary = true;
        const double W0v = b.W.eval(0.0);
        if (W0v > 0.0) {
            ExpSum head = b.intZ.scaled(phi);
            head.add_term(phi * b.psi_prime_zero / b.q, 0.0, 0);
            head = head.plus(b.Z.scaled((1.0 - phi * b.Z.eval(0.0)) / (b.q * W0v)));
            res.value_head = head;
        }
        return res;
    }

    const double cap = overflow_cap(b.zeta);
    double horizon;
    if (lead > 0.0) {
        // G(x) >= e^{zeta x} (lead - others e^{-gap x}): past this point no
        // crossing is possible.
        horizon = others > lead ? std::log(others / lead) / gap : 0.0;
        if (horizon <= 0.0)
            throw NoSignChange("bail-out G stays positive: no finite barrier exists");
        horizon = std::min(horizon, cap);
    } else {
        // A negative leading coefficient forces a crossing at the latest when
        // the leading term dominates the rest.
        horizon = lead < 0.0 && others > 0.0
                      ? std::min(std::log(others / -lead) / gap + 10.0, cap)
                      : cap;
    }

    bool found = false;
    const double d = scan_first_crossing(g, 0.0, horizon, tol, &found);
    if (!found)
        throw NoSignChange("bail-out G stays positive: no finite barrier exists");

    res.levels = {d};
    res.threshold = d;
    res.diagnostics.residual = std::abs(g(d)) / magnitude_at(G, d);
    ExpSum head = b.intZ.scaled(phi);
    head.add_term(phi * b.psi_prime_zero / b.q, 0.0, 0);
    head = head.plus(b.Z.scaled((1.0 - phi * b.Z.eval(d)) / (b.q * b.W.eval(d))));
    res.value_head = head;
    res.diagnostics.monotone_tail = wp_nondecreasing_after(b.Wp, d, 5.0, cap);
    return res;
}

PolicyResult terminal_barrier(const ScaleBundle& b, double S, double K, double tol) {
    PolicyResult res;
    res.kind = PolicyKind::TerminalValue;

    const ExpSum A = b.Z.scaled(K).plus(b.W.scaled(S * b.q - K * b.psi_prime_zero));
    auto F = [&](double x) { return (1.0 - A.eval(x)) / b.Wp.eval(x); };

    const double cap = overflow_cap(b.zeta);
    double hi = 2.0;
    double xb = 0.0;
    while (true) {
        const long n = static_cast<long>(std::floor(hi / kScanStep));
        long best = 0;
        double fbest = -kInf;
        for (long i = 0; i <= n; ++i) {
            const double x = kScanStep * i;
            const double v = F(x);
            if (v > fbest) {
                fbest = v;
                best = i;
            }
        }
        xb = kScanStep * best;
        if (xb < 0.9 * hi || hi >= cap) break;
        hi = std::min(hi * 2.0, cap);
    }
    auto negF = [&](double x) { return -F(x); };
    const double lo = std::max(0.0, xb - kScanStep);
    const double bstar_raw = golden_min(negF, lo, std::min(xb + kScanStep, hi), tol);
    double bs = bstar_raw;
    // The maximiser is b* = sup of the argmax set; snap to 0 when the golden
    // window collapsed onto the origin.
    if (bs < tol || F(0.0) >= F(bs)) bs = 0.0;

    res.levels = {bs};
    res.threshold = bs;
    res.diagnostics.run_strategy = (bs == 0.0);
    if (bs > 0.0) {
        const ExpSum Ap = A.derivative();
        const double wpb = b.Wp.eval(bs);
        res.diagnostics.residual =
            std::abs(-Ap.eval(bs) * wpb - (1.0 - A.eval(bs)) * b.Wpp.eval(bs)) / (wpb * wpb);
    }
    ExpSum head = A.antiderivative();
    head.add_term(S, 0.0, 0);
    head = head.plus(b.W.scaled((1.0 - A.eval(bs)) / b.Wp.eval(bs)));
    res.value_head = head;
    res.diagnostics.monotone_tail = wp_nondecreasing_after(b.Wp, bs, 5.0, cap);
    return res;
}

PolicyResult impulse_policy(const ScaleBundle& b, double delta, double tol) {
    if (!(delta > 0.0)) throw ValidationError("transaction cost delta must be > 0");
    PolicyResult res;
    res.kind = PolicyKind::Impulse;

    const double cap = overflow_cap(b.zeta);
    const double astar = wprime_argmin(b, tol);
    const double W0v = b.W.eval(0.0);

    auto g_of = [&](double c1, double c2) {
        return (b.W.eval(c2) - b.W.eval(c1)) / (c2 - c1 - delta);
    };

    // Boundary candidate: c1 = 0.
    auto g_boundary = [&](double c2) { return (b.W.eval(c2) - W0v) / (c2 - delta); };
    const double blo = delta * (1.0 + 1e-9) + 1e-12;
    const double c2_b = grid_then_golden_min(g_boundary, blo, cap, tol);
    double best_c1 = 0.0, best_c2 = c2_b, best_g = g_boundary(c2_b);

    // Interior candidate: common tangent W'(c1) = W'(c2) = g, found by an
    // outer bisection on the slope level with inner bisections on the two
    // W' = level crossings either side of the W' minimiser.
    if (astar > tol) {
        const double wp0 = b.Wp.eval(0.0);
        const double wpa = b.Wp.eval(astar);

        auto left_root = [&](double level) {
            auto f = [&](double x) { return b.Wp.eval(x) - level; };
            return bisect(f, 0.0, astar, wp0 - level, tol * 1e-2);
        };
        auto right_root = [&](double level) {
            auto f = [&](double x) { return b.Wp.eval(x) - level; };
            double hi = std::min(astar + 1.0, cap);
            int it = 0;
            while (b.Wp.eval(hi) < level) {
                hi = std::min(hi * 2.0, cap);
                if (++it > 200 || hi >= cap)
                    throw NumericalError("W' level crossing ran past the overflow horizon");
            }
            return bisect(f, astar, hi, wpa - level, tol * 1e-2);
        };
        auto width = [&](double level) { return right_root(level) - left_root(level); };

        const double lhi = wp0 * (1.0 - 1e-9);
        if (lhi > wpa && width(lhi) > delta) {
            // Feasibility threshold: the level where the tangent chord width
            // equals delta.
            double llo = wpa * (1.0 + 1e-12);
            auto wd = [&](double level) { return width(level) - delta; };
            const double lmin = wd(llo) >= 0.0
                                    ? llo
                                    : bisect(wd, llo, lhi, wd(llo), tol * (1.0 + wpa));
            auto h = [&](double level) {
                return g_of(left_root(level), right_root(level)) - level;
            };
            const double hlo_at = lmin + 1e-9 * (1.0 + lmin);
            if (hlo_at < lhi && h(lhi) < 0.0) {
                const double lstar =
                    bisect(h, hlo_at, lhi, h(hlo_at), tol * (1.0 + lhi));
                const double c1 = left_root(lstar);
                const double c2 = right_root(lstar);
                const double gi = g_of(c1, c2);
                if (gi < best_g) {
                    best_c1 = c1;
                    best_c2 = c2;
                    best_g = gi;
                }
            }
        }
    }

    if (!(best_c2 - best_c1 - delta > 0.0))
        throw Degenerate("no admissible (c1, c2) pair with c2 - c1 > delta");

    res.levels = {best_c1, best_c2};
    res.threshold = best_c2;
    res.diagnostics.boundary = (best_c1 == 0.0);
    // Stationarity in c2 gives W'(c2*) = g* at interior and boundary optima.
    res.diagnostics.residual =
        std::abs(b.Wp.eval(best_c2) * (best_c2 - best_c1 - delta) -
                 (b.W.eval(best_c2) - b.W.eval(best_c1))) /
        std::max(1e-300, b.W.eval(best_c2) - b.W.eval(best_c1));
    res.value_head = b.W.scaled(1.0 / b.Wp.eval(best_c2));
    res.diagnostics.monotone_tail = wp_nondecreasing_after(b.Wp, best_c2, 5.0, cap);
    return res;
}

PolicyResult classic_bounds(const TruncationBounds& tb, double tol) {
    PolicyResult res;
    res.kind = PolicyKind::ClassicBarrier;
    const double cap = overflow_cap(tb.zeta);

    auto wl = [&](double x) { return eval(tb, BoundCurve::WpLower, x); };
    auto wu = [&](double x) { return eval(tb, BoundCurve::WpUpper, x); };
    auto wt = [&](double x) { return eval(tb, BoundCurve::WpTilde, x); };

    const double x_l = convex_min(wl, 0.0, cap, tol);
    const double w_lo_min = wl(x_l);

    const double eps0 = std::min(1e-6, 0.1 / std::max(tb.next_xi, 1.0));
    const double xu = convex_min(wu, eps0, cap, tol);
    double w_hi_min = wu(xu);
    if (!std::isinf(tb.epsilon_m)) {
        const double xt = convex_min(wt, eps0, cap, tol);
        w_hi_min = std::min(w_hi_min, wt(xt));
    }
    if (w_hi_min < w_lo_min) {
        if (w_hi_min < w_lo_min * (1.0 - 1e-12))
            throw EmptyInterval("upper derivative envelope dipped below the lower envelope");
        w_hi_min = w_lo_min;
    }

    // Sub-level set {x : w_lower(x) <= w_hi_min} of the convex lower envelope.
    double lo_edge = 0.0;
    if (wl(0.0) > w_hi_min) {
        auto f = [&](double x) { return wl(x) - w_hi_min; };
        lo_edge = bisect(f, 0.0, x_l, f(0.0), tol);
    }
    double hi_probe = std::max(x_l, 1e-3);
    int it = 0;
    while (wl(hi_probe) <= w_hi_min) {
        hi_probe = std::min(hi_probe * 2.0 + 0.1, cap);
        if (++it > 200 || hi_probe >= cap)
            throw NumericalError("sub-level set did not close before the overflow horizon");
    }
    auto f_hi = [&](double x) { return w_hi_min - wl(x); };
    const double hi_edge = bisect(f_hi, x_l, hi_probe, f_hi(x_l), tol);

    res.levels = {x_l};
    res.threshold = x_l;
    res.level_interval = {lo_edge, hi_edge};
    res.u_lower = tb.W_lower.scaled(1.0 / w_hi_min);
    res.u_upper = tb.W_upper.scaled(1.0 / w_lo_min);
    res.diagnostics.w_min_lower = w_lo_min;
    res.diagnostics.w_min_upper = w_hi_min;
    res.diagnostics.delta_m = tb.delta_m;
    return res;
}

PolicyResult bailout_bounds(const TruncationBounds& tb, double phi, double tol) {
    if (!(phi > 1.0)) throw ValidationError("bail-out cost phi must exceed 1");
    PolicyResult res;
    res.kind = PolicyKind::BailOut;
    const double cap = overflow_cap(tb.zeta);

    // Envelopes of G = (phi Z - 1) W' - phi q W^2, using the certified curve
    // bounds clamped to their analytic ranges (Z >= 1, W >= 0).
    auto g_lo = [&](double a) {
        const double z = std::max(eval(tb, BoundCurve::ZLower, a), 1.0);
        const double wp = eval(tb, BoundCurve::WpLower, a);
        const double W = eval(tb, BoundCurve::WUpper, a);
        return (phi * z - 1.0) * wp - phi * tb.q * W * W;
    };
    auto g_hi = [&](double a) {
        const double z = eval(tb, BoundCurve::ZUpper, a);
        const double wp = eval(tb, BoundCurve::WpUpper, a);
        const double W = std::max(eval(tb, BoundCurve::WLower, a), 0.0);
        return (phi * z - 1.0) * wp - phi * tb.q * W * W;
    };

    const double horizon = std::min(cap, 200.0);
    bool found_lo = false, found_hi = false;
    const double d_lo = scan_first_crossing(g_lo, kScanStep, horizon, tol, &found_lo);
    const double d_hi = scan_first_crossing(g_hi, kScanStep, horizon, tol, &found_hi);
    if (!found_lo || !found_hi)
        throw NoSignChange("bail-out envelopes found no barrier below the scan horizon");

    const double lo = std::min(d_lo, d_hi), hi = std::max(d_lo, d_hi);
    res.levels = {0.5 * (lo + hi)};
    res.threshold = res.levels[0];
    res.level_interval = {lo, hi};
    res.diagnostics.delta_m = tb.delta_m;
    return res;
}

ConvergenceReport cgmy_sweep(const CgmyTarget& target, double sigma, double drift, double q,
                             const std::vector<double>& betas, std::size_t m, double tol,
                             double grid_max, std::size_t grid_points) {
    if (betas.empty()) throw ValidationError("beta sweep needs at least one beta");
    for (std::size_t i = 0; i < betas.size(); ++i) {
        if (!(betas[i] > 0.0) || (i > 0 && !(betas[i] < betas[i - 1])))
            throw ValidationError("beta sequence must be strictly decreasing and positive");
    }
    if (grid_points < 2) throw ValidationError("grid needs at least two points");

    ConvergenceReport rep;
    rep.grid.resize(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i)
        rep.grid[i] = grid_max * static_cast<double>(i) / (grid_points - 1);

    const SpectralModel target_model = make_model(sigma, drift, target);
    rep.target_density_at_m1 = levy_density(target_model, -1.0);

    for (double beta : betas) {
        BetaFamily bf;
        bf.c = target.c * std::pow(beta, target.shape);
        bf.alpha = target.alpha / beta;
        bf.beta = beta;
        bf.shape = target.shape;
        const SpectralModel model = make_model(sigma, drift, bf);

        const RootSystem rs = solve_roots(model, q, m, tol);
        const FactorCoefficients fc = compute_coefficients(model, rs);
        const TruncationBounds tb = build_scale_meromorphic(model, rs, fc);
        const PolicyResult cb = classic_bounds(tb);

        SweepPoint pt;
        pt.beta = beta;
        pt.zeta = rs.zeta;
        pt.delta_m = fc.delta_m;
        pt.interval = *cb.level_interval;
        pt.density_at_m1 = levy_density(model, -1.0);
        pt.u_mid.resize(grid_points);
        for (std::size_t i = 0; i < grid_points; ++i) {
            const double x = rep.grid[i];
            pt.u_mid[i] = 0.5 * (cb.u_lower->eval(x) + cb.u_upper->eval(x));
        }
        rep.points.push_back(std::move(pt));
    }

    for (std::size_t i = 0; i + 1 < rep.points.size(); ++i) {
        double sup = 0.0;
        for (std::size_t k = 0; k < grid_points; ++k)
            sup = std::max(sup,
                           std::abs(rep.points[i + 1].u_mid[k] - rep.points[i].u_mid[k]));
        rep.sup_diffs.push_back(sup);
    }
    rep.monotone = true;
    for (std::size_t i = 0; i + 1 < rep.sup_diffs.size(); ++i)
        if (!(rep.sup_diffs[i + 1] < rep.sup_diffs[i])) rep.monotone = false;
    return rep;
}

} // namespace levyscale
