#include <levyscale/errors.hpp>
#include <levyscale/model.hpp>
#include <levyscale/model_io.hpp>

#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

using namespace levyscale;
using doctest::Approx;

namespace {

// Mixture from the six-phase fit used across the integration tests
// (rates ascending as the ingestion layer normalizes them).
Hyperexponential table1_jumps(double lambda = 1.0) {
    Hyperexponential j;
    j.lambda = lambda;
    j.weights = {0.000018, 0.068340, 0.476233, 0.332195, 0.093283, 0.029931};
    j.rates = {0.097, 0.248, 0.761, 4.274, 38.709, 676.178};
    return j;
}

PhaseType pt_jumps() {
    PhaseType j;
    j.lambda = 2.0;
    j.alpha = {0.5, 0.5};
    j.T = {{-2.0, 1.0}, {3.0, -6.0}};
    return j;
}

// The eigen-decomposition of pt_jumps() by hand: eigenvalues 4 -+ sqrt(7)
// with positive mixture residues, i.e. the same law as this mixture.
Hyperexponential pt_equivalent_jumps() {
    Hyperexponential j;
    j.lambda = 2.0;
    j.weights = {0.877964473009227, 0.122035526990773};
    j.rates = {1.35424868893541, 6.64575131106459};
    return j;
}

BetaFamily beta_jumps() {
    BetaFamily j;
    j.c = 0.1;
    j.alpha = 3.0;
    j.beta = 1.0;
    j.shape = 1.5;
    return j;
}

} // namespace

TEST_CASE("validation accepts the reference models") {
    CHECK_NOTHROW(make_model(0.0, 0.1, table1_jumps()));
    CHECK_NOTHROW(make_model(0.2, 0.1, table1_jumps()));
    CHECK_NOTHROW(make_model(0.3, 0.5, pt_jumps()));
    CHECK_NOTHROW(make_model(0.2, 0.1, beta_jumps()));
    CHECK_NOTHROW(make_model(0.2, 0.1, CgmyTarget{0.1, 3.0, 1.5}));
    // Pure Brownian with drift: lambda = 0, empty phase lists.
    CHECK_NOTHROW(make_model(1.0, 0.0, Hyperexponential{}));
}

TEST_CASE("validation rejects broken parameters") {
    auto bad_weight = table1_jumps();
    bad_weight.weights[2] = -bad_weight.weights[2];
    CHECK_THROWS_AS(make_model(0.2, 0.1, bad_weight), ValidationError);

    auto bad_sum = table1_jumps();
    bad_sum.weights[0] += 0.5;
    CHECK_THROWS_AS(make_model(0.2, 0.1, bad_sum), ValidationError);

    auto bad_order = table1_jumps();
    std::swap(bad_order.rates[1], bad_order.rates[2]);
    CHECK_THROWS_AS(make_model(0.2, 0.1, bad_order), ValidationError);

    CHECK_THROWS_AS(make_model(-0.1, 0.1, table1_jumps()), ValidationError);
    // sigma = 0 needs strictly positive drift.
    CHECK_THROWS_AS(make_model(0.0, 0.0, table1_jumps()), ValidationError);
    CHECK_THROWS_AS(make_model(0.0, -0.5, table1_jumps()), ValidationError);
    // Completely degenerate model.
    CHECK_THROWS_AS(make_model(0.0, 0.0, Hyperexponential{}), ValidationError);

    auto bad_pt = pt_jumps();
    bad_pt.T[0][0] = 2.0; // positive diagonal
    CHECK_THROWS_AS(make_model(0.3, 0.5, bad_pt), ValidationError);

    auto bad_rowsum = pt_jumps();
    bad_rowsum.T[0][1] = 5.0; // row sum > 0
    CHECK_THROWS_AS(make_model(0.3, 0.5, bad_rowsum), ValidationError);

    BetaFamily bad_shape = beta_jumps();
    bad_shape.shape = 2.0; // forbidden integer
    CHECK_THROWS_AS(make_model(0.2, 0.1, bad_shape), ValidationError);
    bad_shape.shape = 3.5; // outside (0,3)
    CHECK_THROWS_AS(make_model(0.2, 0.1, bad_shape), ValidationError);
}

TEST_CASE("structure predicates") {
    const auto he0 = make_model(0.0, 0.1, table1_jumps());
    const auto he2 = make_model(0.2, 0.1, table1_jumps());
    const auto bf = make_model(0.2, 0.1, beta_jumps());
    const auto cg = make_model(0.2, 0.1, CgmyTarget{0.1, 3.0, 1.5});

    CHECK(path_variation(he0) == PathVariation::BoundedVariation);
    CHECK(path_variation(he2) == PathVariation::UnboundedVariation);
    CHECK(path_variation(bf) == PathVariation::UnboundedVariation);

    CHECK_FALSE(infinite_activity(he0));
    CHECK(infinite_activity(bf)); // shape = 1.5 >= 1
    CHECK(infinite_activity(cg));

    CHECK(jump_mass(he0) == Approx(1.0));
    CHECK(std::isinf(jump_mass(bf)));

    CHECK(finite_pole_count(he2) == 6);
    CHECK(finite_pole_count(make_model(0.3, 0.5, pt_jumps())) == 2);
    CHECK(finite_pole_count(bf) == 0);

    CHECK_FALSE(is_meromorphic(he2));
    CHECK(is_meromorphic(bf));
    // The CGMY target is a limit object, not a computable meromorphic model.
    CHECK_FALSE(is_meromorphic(cg));
}

TEST_CASE("hyperexponential Laplace exponent reference values") {
    const auto m0 = make_model(0.0, 0.1, table1_jumps());
    const auto m2 = make_model(0.2, 0.1, table1_jumps());
    const auto m4 = make_model(0.4, 0.1, table1_jumps());

    CHECK(laplace_exponent(m0, 0.0) == Approx(0.0).epsilon(1e-14));
    CHECK(laplace_exponent(m0, 1.0) == Approx(-0.290589961269921).epsilon(1e-12));
    CHECK(laplace_exponent(m0, 0.35) == Approx(-0.181036712593021).epsilon(1e-12));
    CHECK(laplace_exponent(m2, 1.0) == Approx(-0.270589961269921).epsilon(1e-12));
    CHECK(laplace_exponent(m2, 0.35) == Approx(-0.178586712593021).epsilon(1e-12));
    CHECK(laplace_exponent(m4, 1.0) == Approx(-0.210589961269921).epsilon(1e-12));

    CHECK(laplace_exponent_derivative(m0, 1.0) == Approx(-0.0811268820970143).epsilon(1e-12));
    CHECK(laplace_exponent_derivative(m2, 1.0) == Approx(-0.0411268820970143).epsilon(1e-11));
    CHECK(laplace_exponent_derivative(m4, 1.0) == Approx(0.0788731179029857).epsilon(1e-11));
    CHECK(laplace_exponent_derivative(m2, 0.0) == Approx(-0.881727763813137).epsilon(1e-12));
}

TEST_CASE("derivative matches a central finite difference") {
    const auto models = {make_model(0.2, 0.1, table1_jumps()),
                         make_model(0.3, 0.5, pt_jumps()),
                         make_model(0.2, 0.1, beta_jumps())};
    const double h = 1e-6;
    for (const auto& m : models) {
        for (double s : {0.25, 0.8, 1.7, 3.0}) {
            const double fd = (laplace_exponent(m, s + h) - laplace_exponent(m, s - h)) / (2 * h);
            CHECK(laplace_exponent_derivative(m, s) == Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("evaluation inside a pole guard band throws") {
    const auto m = make_model(0.2, 0.1, table1_jumps());
    CHECK_THROWS_AS(laplace_exponent(m, -0.761), PoleEvaluation);
}

TEST_CASE("complex overload agrees with the real one on the axis") {
    const auto m = make_model(0.2, 0.1, table1_jumps());
    const auto bf = make_model(0.2, 0.1, beta_jumps());
    for (double s : {0.3, 1.0, 2.4}) {
        const auto z = laplace_exponent(m, std::complex<double>(s, 0.0));
        CHECK(z.real() == Approx(laplace_exponent(m, s)).epsilon(1e-12));
        CHECK(std::abs(z.imag()) < 1e-12);
        const auto zb = laplace_exponent(bf, std::complex<double>(s, 0.0));
        CHECK(zb.real() == Approx(laplace_exponent(bf, s)).epsilon(1e-10));
    }
}

TEST_CASE("phase-type exponent and density against the closed form") {
    const auto m = make_model(0.3, 0.5, pt_jumps());
    CHECK(laplace_exponent(m, 1.0) == Approx(-0.232777777777778).epsilon(1e-13));
    CHECK(laplace_exponent(m, -1.0) == Approx(4.545).epsilon(1e-13));
    CHECK(laplace_exponent_derivative(m, 1.0) == Approx(0.13320987654321).epsilon(1e-12));

    // Density of the jump magnitude times lambda.
    CHECK(levy_density(m, -0.3) == Approx(2.0 * 0.902463611489493).epsilon(1e-12));
    CHECK(levy_density(m, -1.0) == Approx(2.0 * 0.30797920409098).epsilon(1e-12));
}

TEST_CASE("phase-type model equals its explicit mixture representation") {
    const auto pt = make_model(0.3, 0.5, pt_jumps());
    const auto he = make_model(0.3, 0.5, pt_equivalent_jumps());
    for (double s : {-0.9, 0.1, 0.5, 1.0, 2.2, 5.0}) {
        CHECK(laplace_exponent(pt, s) == Approx(laplace_exponent(he, s)).epsilon(1e-12));
        CHECK(laplace_exponent_derivative(pt, s) ==
              Approx(laplace_exponent_derivative(he, s)).epsilon(1e-11));
    }
    for (double z : {-0.1, -0.5, -1.0, -2.0}) {
        CHECK(levy_density(pt, z) == Approx(levy_density(he, z)).epsilon(1e-11));
    }
}

TEST_CASE("beta-family exponent, derivative and density") {
    const auto m = make_model(0.2, 0.1, beta_jumps());
    CHECK(laplace_exponent(m, 0.7) == Approx(0.00319991009222738).epsilon(1e-11));
    CHECK(laplace_exponent(m, 2.5) == Approx(0.13520701623897).epsilon(1e-11));
    CHECK(laplace_exponent_derivative(m, 0.7) == Approx(0.0253392705180471).epsilon(1e-10));
    CHECK(laplace_exponent_derivative(m, 0.0) == Approx(-0.0171347703750464).epsilon(1e-10));

    const auto z1 = laplace_exponent(m, std::complex<double>(1.0, 1.0));
    CHECK(z1.real() == Approx(-0.0138742265599509).epsilon(1e-9));
    CHECK(z1.imag() == Approx(0.0431729149848462).epsilon(1e-9));
    const auto z2 = laplace_exponent(m, std::complex<double>(0.5, 2.5));
    CHECK(z2.real() == Approx(-0.174438743982448).epsilon(1e-9));
    CHECK(z2.imag() == Approx(0.0542560221174653).epsilon(1e-9));

    CHECK(levy_density(m, -1.0) == Approx(0.0099064187345057).epsilon(1e-11));
}

TEST_CASE("CGMY target exposes its density but not a closed-form exponent") {
    const auto m = make_model(0.2, 0.1, CgmyTarget{0.1, 3.0, 1.5});
    CHECK(levy_density(m, -1.0) == Approx(0.00497870683678639).epsilon(1e-12));
    CHECK_THROWS_AS(laplace_exponent(m, 1.0), ValidationError);
}

TEST_CASE("boundary constants per path-variation case") {
    // sigma > 0: W(0) = 0, W'(0+) = theta = 2/sigma^2.
    const auto m2 = make_model(0.2, 0.1, table1_jumps());
    const auto bc2 = boundary_constants(m2, 0.03, 3.73749826103113);
    CHECK(bc2.W0 == Approx(0.0));
    CHECK(bc2.Wp0 == Approx(50.0).epsilon(1e-13));
    CHECK(bc2.theta == Approx(50.0).epsilon(1e-13));

    // sigma = 0, finite activity: W(0) = 1/mu, W'(0+) = (q + Lambda)/mu^2,
    // theta = -zeta/mu + (q + Lambda)/mu^2.
    const auto m0 = make_model(0.0, 0.1, table1_jumps());
    const double zeta0 = 7.56795443029293;
    const auto bc0 = boundary_constants(m0, 0.03, zeta0);
    CHECK(bc0.W0 == Approx(10.0).epsilon(1e-13));
    CHECK(bc0.Wp0 == Approx(1.03 / 0.01).epsilon(1e-13));
    CHECK(bc0.theta == Approx(-zeta0 / 0.1 + 103.0).epsilon(1e-12));

    // sigma = 0, infinite activity: derivative constants blow up.
    BetaFamily bv = beta_jumps();
    const auto mbv = make_model(0.0, 0.5, bv);
    const auto bcb = boundary_constants(mbv, 0.03, 1.0);
    CHECK(bcb.W0 == Approx(2.0));
    CHECK(std::isinf(bcb.Wp0));
    CHECK(std::isinf(bcb.theta));
}

TEST_CASE("JSON round trip preserves the model") {
    const auto m = make_model(0.2, 0.1, table1_jumps());
    const auto back = model_from_json(model_to_json(m));
    for (double s : {0.3, 1.0, 2.7}) {
        CHECK(laplace_exponent(back, s) == Approx(laplace_exponent(m, s)).epsilon(1e-15));
    }

    const auto pt = make_model(0.3, 0.5, pt_jumps());
    const auto pt_back = model_from_json(model_to_json(pt));
    CHECK(laplace_exponent(pt_back, 1.0) == Approx(laplace_exponent(pt, 1.0)).epsilon(1e-15));

    const auto bf = make_model(0.2, 0.1, beta_jumps());
    const auto bf_back = model_from_json(model_to_json(bf));
    CHECK(laplace_exponent(bf_back, 0.7) == Approx(laplace_exponent(bf, 0.7)).epsilon(1e-15));
}

TEST_CASE("pairs-form JSON is accepted in any order") {
    const std::string text = R"({
      "sigma": 0.2, "drift": 0.1,
      "jumps": {
        "type": "hyperexponential", "lambda": 1.0,
        "pairs": [
          {"weight": 0.7, "rate": 5.0},
          {"weight": 0.3, "rate": 1.0}
        ]
      }
    })";
    const auto m = model_from_json(text);
    const auto* j = std::get_if<Hyperexponential>(&m.jumps);
    REQUIRE(j != nullptr);
    CHECK(j->rates[0] == Approx(1.0));
    CHECK(j->rates[1] == Approx(5.0));
    CHECK(j->weights[0] == Approx(0.3));
    CHECK(j->weights[1] == Approx(0.7));
}

TEST_CASE("malformed JSON is a validation error") {
    CHECK_THROWS_AS(model_from_json("{ not json"), ValidationError);
    CHECK_THROWS_AS(model_from_json(R"({"sigma": 0.2})"), ValidationError);
    CHECK_THROWS_AS(model_from_json(
                        R"({"sigma": 0.2, "drift": 0.1, "jumps": {"type": "mystery"}})"),
                    ValidationError);
    CHECK_THROWS_AS(model_from_json_file("/nonexistent/model.json"), ValidationError);
}
