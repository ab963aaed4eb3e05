#include <levyscale/errors.hpp>
#include <levyscale/model.hpp>
#include <levyscale/roots.hpp>
#include <levyscale/scale.hpp>
#include <levyscale/wiener_hopf.hpp>

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

using namespace levyscale;
using doctest::Approx;

namespace {

Hyperexponential table1_jumps(double lambda = 1.0) {
    Hyperexponential j;
    j.lambda = lambda;
    j.weights = {0.000018, 0.068340, 0.476233, 0.332195, 0.093283, 0.029931};
    j.rates = {0.097, 0.248, 0.761, 4.274, 38.709, 676.178};
    return j;
}

ScaleBundle finite_bundle(const SpectralModel& m, double q) {
    const auto rs = solve_roots(m, q);
    return build_scale_finite(m, rs, compute_coefficients(m, rs));
}

TruncationBounds mero_bounds(const SpectralModel& m, double q, std::size_t count) {
    const auto rs = solve_roots(m, q, count);
    return build_scale_meromorphic(m, rs, compute_coefficients(m, rs));
}

} // namespace

TEST_CASE("Brownian motion reproduces 2 sinh(x) exactly") {
    // sigma = 1, no drift, q = 1/2: W(x) = 2 sinh(x), Z(x) = cosh(x).
    // The rate error of the solved root grows linearly in x inside the
    // exponent, so hit the 1e-10 target on [0,5] with a tight root tolerance.
    const auto m = make_model(1.0, 0.0, Hyperexponential{});
    const auto rs = solve_roots(m, 0.5, 0, 1e-13);
    const auto b = build_scale_finite(m, rs, compute_coefficients(m, rs));
    for (double x = 0.0; x <= 5.0; x += 0.25) {
        const double w = eval(b, Curve::W, x);
        const double z = eval(b, Curve::Z, x);
        CHECK(std::abs(w - 2.0 * std::sinh(x)) <= 1e-10 * std::max(1.0, 2.0 * std::sinh(x)));
        CHECK(std::abs(z - std::cosh(x)) <= 1e-10 * std::cosh(x));
    }
    CHECK(b.W0 == Approx(0.0));
    CHECK(b.Wp0 == Approx(2.0).epsilon(1e-12));
    CHECK(eval(b, Curve::Wprime, 0.0) == Approx(2.0).epsilon(1e-9));
}

TEST_CASE("toy model has the hand-derived two-term form") {
    Hyperexponential toy;
    toy.lambda = 1.0;
    toy.weights = {1.0};
    toy.rates = {1.0};
    const auto m = make_model(0.0, 1.0, toy);
    const auto b = finite_bundle(m, 1.0);

    // W(x) = 1.170820 e^{phi x} - 0.170820 e^{-(phi - 1) x} with phi the
    // golden ratio; recover both coefficients from the term list.
    REQUIRE(b.W.size() == 2);
    double pos_w = 0.0, neg_w = 0.0;
    for (const auto& t : b.W.terms()) {
        if (t.rate > 0) pos_w = t.weight;
        else neg_w = t.weight;
    }
    CHECK(pos_w == Approx(1.17082039324994).epsilon(1e-8));
    CHECK(neg_w == Approx(-0.170820393249937).epsilon(1e-8));
    CHECK(b.zeta == Approx(1.61803398874989).epsilon(1e-10));
    CHECK(eval(b, Curve::W, 0.0) == Approx(1.0).epsilon(1e-10)); // 1/drift
}

TEST_CASE("reference values of W, W' and Z on the six-phase mixture") {
    struct Row { double x, W, Wp, Z; };
    struct Fixture { double sigma; std::vector<Row> rows; };
    const Fixture fixtures[] = {
        {0.0,
         {{0.1, 24.0703381517397, 197.215757884866, 1.04868209223089},
          {0.5, 531.013334605002, 4028.92044096785, 3.03904192716088},
          {1.0, 23414.6489095935, 177209.602407217, 93.7333467587826}}},
        {0.2,
         {{0.1, 4.23799182091145, 38.6095485320544, 1.00663293006546},
          {0.5, 30.0675183524739, 118.218999884683, 1.18107183759355},
          {1.0, 202.372488731677, 760.77883004271, 2.54434264923904}}},
        {0.4,
         {{0.1, 1.19742477693197, 11.6753387457422, 1.0018165066329},
          {0.5, 6.69420423471391, 17.9920714984189, 1.04661727746336},
          {1.0, 21.8601444635158, 48.1303634831187, 1.24225386688572}}},
    };
    for (const auto& f : fixtures) {
        const auto m = make_model(f.sigma, 0.1, table1_jumps());
        const auto b = finite_bundle(m, 0.03);
        // Root tolerance 1e-10 propagates to ~1e-9 relative in the curves.
        for (const auto& r : f.rows) {
            CHECK(eval(b, Curve::W, r.x) == Approx(r.W).epsilon(1e-8));
            CHECK(eval(b, Curve::Wprime, r.x) == Approx(r.Wp).epsilon(1e-8));
            CHECK(eval(b, Curve::Z, r.x) == Approx(r.Z).epsilon(1e-8));
        }
    }
}

TEST_CASE("origin behaviour per path-variation case") {
    const auto m0 = make_model(0.0, 0.1, table1_jumps());
    const auto b0 = finite_bundle(m0, 0.03);
    CHECK(eval(b0, Curve::W, 0.0) == Approx(10.0).epsilon(1e-9));   // 1/drift
    CHECK(eval(b0, Curve::Wprime, 0.0) == Approx(103.0).epsilon(1e-8)); // (q+lambda)/mu^2
    CHECK(eval(b0, Curve::Z, 0.0) == Approx(1.0).epsilon(1e-12));

    const auto m2 = make_model(0.2, 0.1, table1_jumps());
    const auto b2 = finite_bundle(m2, 0.03);
    CHECK(std::abs(eval(b2, Curve::W, 0.0)) <= 1e-10);
    CHECK(eval(b2, Curve::Wprime, 0.0) == Approx(50.0).epsilon(1e-8)); // 2/sigma^2
    CHECK(eval(b2, Curve::Z, 0.0) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("half-line conventions for x < 0") {
    const auto m = make_model(0.2, 0.1, table1_jumps());
    const auto b = finite_bundle(m, 0.03);
    CHECK(eval(b, Curve::W, -0.5) == 0.0);
    CHECK(eval(b, Curve::Wprime, -0.5) == 0.0);
    CHECK(eval(b, Curve::Wsecond, -0.5) == 0.0);
    CHECK(eval(b, Curve::Z, -0.5) == 1.0);
    CHECK(eval(b, Curve::IntZ, -0.5) == Approx(-0.5));
}

TEST_CASE("internal consistency of the bundle calculus") {
    const auto m = make_model(0.2, 0.1, table1_jumps());
    const auto b = finite_bundle(m, 0.03);
    for (double x : {0.1, 0.4, 0.9, 1.7}) {
        // Z' = q W and intZ' = Z.
        CHECK(b.Z.derivative().eval(x) == Approx(0.03 * b.W.eval(x)).epsilon(1e-11));
        CHECK(b.intZ.derivative().eval(x) == Approx(b.Z.eval(x)).epsilon(1e-11));
        // W' and W'' are the stored derivatives.
        CHECK(b.Wp.eval(x) == Approx(b.W.derivative().eval(x)).epsilon(1e-12));
        CHECK(b.Wpp.eval(x) == Approx(b.Wp.derivative().eval(x)).epsilon(1e-12));
    }
    CHECK(b.Z.eval(0.0) == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(b.intZ.eval(0.0)) < 1e-14);
}

TEST_CASE("transform of the computed W inverts the exponent") {
    for (double sigma : {0.0, 0.2, 0.4}) {
        const auto m = make_model(sigma, 0.1, table1_jumps());
        const auto b = finite_bundle(m, 0.03);
        CHECK(laplace_check(m, b) <= 1e-8);
    }
    // Also on the phase-type test model.
    PhaseType pt;
    pt.lambda = 2.0;
    pt.alpha = {0.5, 0.5};
    pt.T = {{-2.0, 1.0}, {3.0, -6.0}};
    const auto mp = make_model(0.3, 0.5, pt);
    CHECK(laplace_check(mp, finite_bundle(mp, 0.1)) <= 1e-8);
}

TEST_CASE("phase-type and explicit-mixture paths agree") {
    PhaseType pt;
    pt.lambda = 2.0;
    pt.alpha = {0.5, 0.5};
    pt.T = {{-2.0, 1.0}, {3.0, -6.0}};
    Hyperexponential he;
    he.lambda = 2.0;
    he.weights = {0.877964473009227, 0.122035526990773};
    he.rates = {1.35424868893541, 6.64575131106459};

    const auto bp = finite_bundle(make_model(0.3, 0.5, pt), 0.1);
    const auto bh = finite_bundle(make_model(0.3, 0.5, he), 0.1);

    CHECK(eval(bp, Curve::W, 0.5) == Approx(5.19770528103149).epsilon(1e-9));
    CHECK(eval(bp, Curve::Z, 0.5) == Approx(1.13561478024204).epsilon(1e-9));
    for (double x : {0.1, 0.5, 1.0, 2.0}) {
        CHECK(eval(bp, Curve::W, x) == Approx(eval(bh, Curve::W, x)).epsilon(1e-9));
        CHECK(eval(bp, Curve::Z, x) == Approx(eval(bh, Curve::Z, x)).epsilon(1e-9));
    }
}

TEST_CASE("zeta-tilted scale function increases to 1/psi'(zeta)") {
    const auto m = make_model(0.2, 0.1, table1_jumps());
    const auto b = finite_bundle(m, 0.03);
    const auto tilted = w_zeta_version(b);
    double prev = tilted.eval(0.0);
    for (double x = 0.5; x <= 10.0; x += 0.5) {
        const double cur = tilted.eval(x);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
    CHECK(tilted.eval(50.0) == Approx(1.0 / b.psi_prime_zeta).epsilon(1e-8));
    CHECK(1.0 / b.psi_prime_zeta == Approx(4.84601266017341).epsilon(1e-9));
}

TEST_CASE("certified envelopes for the truncated beta-family") {
    const auto m = make_model(0.2, 0.1, BetaFamily{0.1, 3.0, 1.0, 1.5});
    const auto tb15 = mero_bounds(m, 0.03, 15);
    const auto tb150 = mero_bounds(m, 0.03, 150);

    CHECK(eval(tb15, BoundCurve::WLower, 1.0) == Approx(54.8066792335).epsilon(1e-8));
    CHECK(eval(tb15, BoundCurve::WUpper, 1.0) == Approx(56.3152918203).epsilon(1e-8));
    CHECK(eval(tb150, BoundCurve::WLower, 1.0) == Approx(55.8753318687).epsilon(1e-8));
    CHECK(eval(tb150, BoundCurve::WUpper, 1.0) == Approx(56.0575490922).epsilon(1e-8));

    SUBCASE("sandwich ordering on a dense grid") {
        for (const auto* tb : {&tb15, &tb150}) {
            for (int i = 0; i <= 500; ++i) {
                const double x = 2.0 * i / 500.0;
                const double lo = eval(*tb, BoundCurve::WLower, x);
                const double hi = eval(*tb, BoundCurve::WUpper, x);
                CHECK(lo <= hi);
                CHECK(eval(*tb, BoundCurve::ZLower, x) <=
                      eval(*tb, BoundCurve::ZUpper, x) + 1e-12);
                if (x > 0.0) {
                    const double wl = eval(*tb, BoundCurve::WpLower, x);
                    const double wu = eval(*tb, BoundCurve::WpUpper, x);
                    const double wt = eval(*tb, BoundCurve::WpTilde, x);
                    CHECK(wl <= wu + 1e-12 * std::abs(wu));
                    CHECK(wl <= wt + 1e-12 * std::abs(wt));
                }
            }
        }
    }

    SUBCASE("the gap is exactly the certified remainder") {
        for (const auto* tb : {&tb15, &tb150}) {
            for (double x : {0.0, 0.1, 0.5, 1.0, 1.7, 2.0}) {
                const double gap = eval(*tb, BoundCurve::WUpper, x) -
                                   eval(*tb, BoundCurve::WLower, x);
                const double predicted =
                    tb->delta_m * (1.0 + std::exp(-tb->next_xi * x));
                CHECK(gap == Approx(predicted).epsilon(1e-10));
            }
        }
    }

    SUBCASE("higher truncation order tightens everything") {
        CHECK(tb150.delta_m < tb15.delta_m);
        for (double x : {0.0, 0.5, 1.0, 2.0}) {
            const double g15 = eval(tb15, BoundCurve::WUpper, x) -
                               eval(tb15, BoundCurve::WLower, x);
            const double g150 = eval(tb150, BoundCurve::WUpper, x) -
                                eval(tb150, BoundCurve::WLower, x);
            CHECK(g150 < g15);
        }
    }

    SUBCASE("true transform lies between the envelope transforms") {
        CHECK(laplace_check(m, tb15) <= 1e-8);
        CHECK(laplace_check(m, tb150) <= 1e-8);
    }

    SUBCASE("Z envelopes start at 1") {
        CHECK(eval(tb15, BoundCurve::ZLower, 0.0) == Approx(1.0).epsilon(1e-12));
        CHECK(eval(tb15, BoundCurve::ZUpper, 0.0) == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("CSV export shape and headers") {
    const auto m = make_model(0.2, 0.1, table1_jumps());
    const auto b = finite_bundle(m, 0.03);
    std::ostringstream os;
    export_csv(os, b, 0.0, 1.0, 0.1);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "x,W,W_prime,W_second,Z,intZ");
    int rows = 0;
    while (std::getline(is, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 11);

    const auto tb = mero_bounds(make_model(0.2, 0.1, BetaFamily{0.1, 3.0, 1.0, 1.5}),
                                0.03, 15);
    std::ostringstream osb;
    export_csv(osb, tb, 0.0, 0.5, 0.05);
    std::istringstream isb(osb.str());
    REQUIRE(std::getline(isb, line));
    CHECK(line == "x,W_lower,W_upper,w_lower,w_upper,w_tilde,Z_lower,Z_upper");
}
