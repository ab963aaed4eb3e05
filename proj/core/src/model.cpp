#include "levyscale/model.hpp"
#include "levyscale/errors.hpp"
#include "levyscale/special_functions.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <string>

namespace levyscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPoleGuard = 1e-9; // relative half-width of the pole exclusion band

void check_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw ValidationError(std::string(name) + " must be finite");
}

void validate_jumps(const Hyperexponential& j, double sigma, double drift) {
    if (j.lambda < 0) throw ValidationError("lambda must be >= 0");
    if (j.weights.size() != j.rates.size())
        throw ValidationError("weights and rates must have equal length");
    if (j.lambda == 0.0) {
        if (!j.weights.empty())
            throw ValidationError("lambda = 0 requires empty weights/rates");
        if (sigma <= 0.0 && drift <= 0.0)
            throw ValidationError("driftless, jumpless, diffusionless model is degenerate");
        return;
    }
    if (j.weights.empty()) throw ValidationError("lambda > 0 requires at least one phase");
    double ws = 0.0;
    for (double w : j.weights) {
        if (!(w > 0.0)) throw ValidationError("mixture weights must be positive");
        ws += w;
    }
    if (std::abs(ws - 1.0) > 1e-6)
        throw ValidationError("mixture weights must sum to 1 (got " + std::to_string(ws) + ")");
    double prev = 0.0;
    for (double r : j.rates) {
        if (!(r > prev))
            throw ValidationError("rates must be positive and strictly increasing");
        prev = r;
    }
    if (sigma == 0.0 && drift <= 0.0)
        throw ValidationError("sigma = 0 requires drift > 0");
}

void validate_jumps(const PhaseType& j, double sigma, double drift) {
    if (j.lambda < 0) throw ValidationError("lambda must be >= 0");
    const std::size_t n = j.alpha.size();
    if (j.lambda == 0.0) {
        if (n != 0) throw ValidationError("lambda = 0 requires an empty phase-type block");
        if (sigma <= 0.0 && drift <= 0.0)
            throw ValidationError("driftless, jumpless, diffusionless model is degenerate");
        return;
    }
    if (n == 0) throw ValidationError("phase-type block must be non-empty");
    if (j.T.size() != n) throw ValidationError("T must be square of order alpha.size()");
    double as = 0.0;
    for (double a : j.alpha) {
        if (a < -1e-12) throw ValidationError("alpha entries must be non-negative");
        as += a;
    }
    if (std::abs(as - 1.0) > 1e-6)
        throw ValidationError("alpha must be a probability vector (sum 1)");
    for (std::size_t i = 0; i < n; ++i) {
        if (j.T[i].size() != n) throw ValidationError("T must be square of order alpha.size()");
        double row = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (i == k) {
                if (!(j.T[i][k] < 0)) throw ValidationError("T diagonal must be negative");
            } else if (j.T[i][k] < -1e-12) {
                throw ValidationError("T off-diagonal must be non-negative");
            }
            row += j.T[i][k];
        }
        if (row > 1e-12) throw ValidationError("T row sums must be <= 0");
    }
    if (sigma == 0.0 && drift <= 0.0)
        throw ValidationError("sigma = 0 requires drift > 0");
}

void validate_jumps(const BetaFamily& j, double sigma, double drift) {
    if (!(j.c > 0)) throw ValidationError("beta-family c must be > 0");
    if (!(j.alpha > 0)) throw ValidationError("beta-family alpha must be > 0");
    if (!(j.beta > 0)) throw ValidationError("beta-family beta must be > 0");
    if (!(j.shape > 0.0 && j.shape < 3.0))
        throw ValidationError("beta-family shape must lie in (0,3)");
    if (std::abs(j.shape - 1.0) < 1e-9 || std::abs(j.shape - 2.0) < 1e-9)
        throw ValidationError("beta-family shape must avoid the integer values 1 and 2");
    // shape < 2 with sigma = 0 is a bounded-variation process driven by drift.
    if (sigma == 0.0 && j.shape < 2.0 && drift <= 0.0)
        throw ValidationError("sigma = 0 requires drift > 0 for bounded-variation shapes");
}

void validate_jumps(const CgmyTarget& j, double, double) {
    if (!(j.c > 0)) throw ValidationError("CGMY c must be > 0");
    if (!(j.alpha > 0)) throw ValidationError("CGMY alpha must be > 0");
    if (!(j.shape > 0.0 && j.shape < 3.0))
        throw ValidationError("CGMY shape must lie in (0,3)");
    if (std::abs(j.shape - 1.0) < 1e-9 || std::abs(j.shape - 2.0) < 1e-9)
        throw ValidationError("CGMY shape must avoid the integer values 1 and 2");
}

Eigen::MatrixXd to_matrix(const PhaseType& j) {
    const auto n = static_cast<Eigen::Index>(j.alpha.size());
    Eigen::MatrixXd T(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k)
            T(i, k) = j.T[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    return T;
}

Eigen::VectorXd to_alpha(const PhaseType& j) {
    const auto n = static_cast<Eigen::Index>(j.alpha.size());
    Eigen::VectorXd a(n);
    for (Eigen::Index i = 0; i < n; ++i) a(i) = j.alpha[static_cast<std::size_t>(i)];
    return a;
}

void beta_pole_guard(const BetaFamily& j, double re, double im_abs) {
    // Poles of psi sit at s_k = beta*(k - alpha), k = 0, -1, -2, ...
    const double x = j.alpha + re / j.beta;
    const double k = std::round(x);
    if (k > 0.5) return;
    const double s_pole = j.beta * (k - j.alpha);
    const double dist = std::hypot(re - s_pole, im_abs);
    if (dist < kPoleGuard * (1.0 + std::abs(s_pole)))
        throw PoleEvaluation("laplace exponent evaluated within the guard band of pole " +
                             std::to_string(s_pole));
}

void he_pole_guard(const Hyperexponential& j, double re, double im_abs) {
    for (double eta : j.rates) {
        const double dist = std::hypot(re + eta, im_abs);
        if (dist < kPoleGuard * (1.0 + eta))
            throw PoleEvaluation("laplace exponent evaluated within the guard band of pole " +
                                 std::to_string(-eta));
    }
}

} // namespace

SpectralModel make_model(double sigma, double drift, JumpModel jumps) {
    SpectralModel m{sigma, drift, std::move(jumps)};
    validate(m);
    return m;
}

void validate(const SpectralModel& m) {
    check_finite(m.sigma, "sigma");
    check_finite(m.drift, "drift");
    if (m.sigma < 0) throw ValidationError("sigma must be >= 0");
    std::visit([&](const auto& j) { validate_jumps(j, m.sigma, m.drift); }, m.jumps);
}

PathVariation path_variation(const SpectralModel& m) {
    if (m.sigma > 0) return PathVariation::UnboundedVariation;
    if (const auto* b = std::get_if<BetaFamily>(&m.jumps))
        return b->shape > 2.0 ? PathVariation::UnboundedVariation
                              : PathVariation::BoundedVariation;
    if (const auto* c = std::get_if<CgmyTarget>(&m.jumps))
        return c->shape > 2.0 ? PathVariation::UnboundedVariation
                              : PathVariation::BoundedVariation;
    return PathVariation::BoundedVariation;
}

bool infinite_activity(const SpectralModel& m) {
    if (const auto* b = std::get_if<BetaFamily>(&m.jumps)) return b->shape >= 1.0;
    if (const auto* c = std::get_if<CgmyTarget>(&m.jumps)) return c->shape >= 1.0;
    return false;
}

double jump_mass(const SpectralModel& m) {
    return std::visit(
        [](const auto& j) -> double {
            using J = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<J, Hyperexponential> || std::is_same_v<J, PhaseType>) {
                return j.lambda;
            } else if constexpr (std::is_same_v<J, BetaFamily>) {
                if (j.shape >= 1.0) return kInf;
                return j.c / j.beta * special::beta(j.alpha, 1.0 - j.shape);
            } else {
                if (j.shape >= 1.0) return kInf;
                // integral c e^{alpha z} |z|^{-shape} dz over (-inf,0)
                int sg = 1;
                const double lg = special::log_gamma_signed(1.0 - j.shape, &sg);
                return sg * j.c * std::exp(lg + (j.shape - 1.0) * std::log(j.alpha));
            }
        },
        m.jumps);
}

double laplace_exponent(const SpectralModel& m, double s) {
    const double linear = m.drift * s + 0.5 * m.sigma * m.sigma * s * s;
    return std::visit(
        [&](const auto& j) -> double {
            using J = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<J, Hyperexponential>) {
                if (j.lambda == 0.0) return linear;
                he_pole_guard(j, s, 0.0);
                double jump = 0.0;
                for (std::size_t i = 0; i < j.rates.size(); ++i)
                    jump += j.weights[i] * s / (j.rates[i] + s);
                return linear - j.lambda * jump;
            } else if constexpr (std::is_same_v<J, PhaseType>) {
                if (j.lambda == 0.0) return linear;
                const Eigen::MatrixXd T = to_matrix(j);
                const Eigen::VectorXd ones = Eigen::VectorXd::Ones(T.rows());
                const Eigen::VectorXd t = -T * ones;
                Eigen::MatrixXd A =
                    s * Eigen::MatrixXd::Identity(T.rows(), T.cols()) - T;
                Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
                if (!lu.isInvertible())
                    throw PoleEvaluation("phase-type resolvent singular at s = " +
                                         std::to_string(s));
                const Eigen::VectorXd x = lu.solve(t);
                return linear + j.lambda * (to_alpha(j).dot(x) - 1.0);
            } else if constexpr (std::is_same_v<J, BetaFamily>) {
                beta_pole_guard(j, s, 0.0);
                int sg = 1;
                const double lb =
                    special::log_beta_signed(j.alpha + s / j.beta, 1.0 - j.shape, &sg);
                const double b0 = special::beta(j.alpha, 1.0 - j.shape);
                return linear + j.c / j.beta * (sg * std::exp(lb) - b0);
            } else {
                throw ValidationError(
                    "CGMY target has no closed-form exponent; use the coupled beta-family");
            }
        },
        m.jumps);
}

std::complex<double> laplace_exponent(const SpectralModel& m, std::complex<double> s) {
    const std::complex<double> linear = m.drift * s + 0.5 * m.sigma * m.sigma * s * s;
    return std::visit(
        [&](const auto& j) -> std::complex<double> {
            using J = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<J, Hyperexponential>) {
                if (j.lambda == 0.0) return linear;
                he_pole_guard(j, s.real(), std::abs(s.imag()));
                std::complex<double> jump = 0.0;
                for (std::size_t i = 0; i < j.rates.size(); ++i)
                    jump += j.weights[i] * s / (j.rates[i] + s);
                return linear - j.lambda * jump;
            } else if constexpr (std::is_same_v<J, PhaseType>) {
                if (j.lambda == 0.0) return linear;
                const Eigen::MatrixXd T = to_matrix(j);
                const Eigen::VectorXd ones = Eigen::VectorXd::Ones(T.rows());
                const Eigen::VectorXd t = -T * ones;
                Eigen::MatrixXcd A = -T.cast<std::complex<double>>();
                A.diagonal().array() += s;
                Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
                if (!lu.isInvertible())
                    throw PoleEvaluation("phase-type resolvent singular");
                const Eigen::VectorXcd tc = t.cast<std::complex<double>>();
                const Eigen::VectorXcd x = lu.solve(tc);
                const Eigen::VectorXd al = to_alpha(j);
                const Eigen::VectorXcd alc = al.cast<std::complex<double>>();
                const std::complex<double> dot = alc.dot(x);
                return linear + j.lambda * (dot - 1.0);
            } else if constexpr (std::is_same_v<J, BetaFamily>) {
                beta_pole_guard(j, s.real(), std::abs(s.imag()));
                const std::complex<double> b1 =
                    special::beta(j.alpha + s / j.beta,
                                  std::complex<double>(1.0 - j.shape, 0.0));
                const double b0 = special::beta(j.alpha, 1.0 - j.shape);
                return linear + j.c / j.beta * (b1 - b0);
            } else {
                throw ValidationError(
                    "CGMY target has no closed-form exponent; use the coupled beta-family");
            }
        },
        m.jumps);
}

double laplace_exponent_derivative(const SpectralModel& m, double s) {
    const double linear = m.drift + m.sigma * m.sigma * s;
    return std::visit(
        [&](const auto& j) -> double {
            using J = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<J, Hyperexponential>) {
                if (j.lambda == 0.0) return linear;
                he_pole_guard(j, s, 0.0);
                double jump = 0.0;
                for (std::size_t i = 0; i < j.rates.size(); ++i) {
                    const double d = j.rates[i] + s;
                    jump += j.weights[i] * j.rates[i] / (d * d);
                }
                return linear - j.lambda * jump;
            } else if constexpr (std::is_same_v<J, PhaseType>) {
                if (j.lambda == 0.0) return linear;
                const Eigen::MatrixXd T = to_matrix(j);
                const Eigen::VectorXd ones = Eigen::VectorXd::Ones(T.rows());
                const Eigen::VectorXd t = -T * ones;
                Eigen::MatrixXd A =
                    s * Eigen::MatrixXd::Identity(T.rows(), T.cols()) - T;
                Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
                if (!lu.isInvertible())
                    throw PoleEvaluation("phase-type resolvent singular at s = " +
                                         std::to_string(s));
                const Eigen::VectorXd x = lu.solve(t);
                const Eigen::VectorXd y = lu.solve(x); // (sI-T)^{-2} t
                return linear - j.lambda * to_alpha(j).dot(y);
            } else if constexpr (std::is_same_v<J, BetaFamily>) {
                beta_pole_guard(j, s, 0.0);
                const double x = j.alpha + s / j.beta;
                int sg = 1;
                const double lb = special::log_beta_signed(x, 1.0 - j.shape, &sg);
                const double dig = special::digamma(x) - special::digamma(x + 1.0 - j.shape);
                return linear + j.c / (j.beta * j.beta) * sg * std::exp(lb) * dig;
            } else {
                throw ValidationError(
                    "CGMY target has no closed-form exponent; use the coupled beta-family");
            }
        },
        m.jumps);
}

double levy_density(const SpectralModel& m, double z) {
    if (!(z < 0)) throw ValidationError("levy_density is defined for z < 0");
    return std::visit(
        [&](const auto& j) -> double {
            using J = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<J, Hyperexponential>) {
                double d = 0.0;
                for (std::size_t i = 0; i < j.rates.size(); ++i)
                    d += j.weights[i] * j.rates[i] * std::exp(j.rates[i] * z);
                return j.lambda * d;
            } else if constexpr (std::is_same_v<J, PhaseType>) {
                if (j.lambda == 0.0) return 0.0;
                const Eigen::MatrixXd T = to_matrix(j);
                const Eigen::VectorXd ones = Eigen::VectorXd::Ones(T.rows());
                const Eigen::VectorXd t = -T * ones;
                const Eigen::MatrixXd E = (T * std::abs(z)).exp();
                return j.lambda * to_alpha(j).dot(E * t);
            } else if constexpr (std::is_same_v<J, BetaFamily>) {
                return j.c * std::exp(j.alpha * j.beta * z) /
                       std::pow(1.0 - std::exp(j.beta * z), j.shape);
            } else {
                return j.c * std::exp(j.alpha * z) / std::pow(-z, j.shape);
            }
        },
        m.jumps);
}

std::size_t finite_pole_count(const SpectralModel& m) {
    if (const auto* h = std::get_if<Hyperexponential>(&m.jumps)) return h->rates.size();
    if (const auto* p = std::get_if<PhaseType>(&m.jumps)) return p->alpha.size();
    return 0;
}

bool is_meromorphic(const SpectralModel& m) {
    return std::holds_alternative<BetaFamily>(m.jumps);
}

BoundaryConstants boundary_constants(const SpectralModel& m, double q, double zeta) {
    BoundaryConstants b{};
    if (m.sigma > 0 || path_variation(m) == PathVariation::UnboundedVariation) {
        b.W0 = 0.0;
        b.Wp0 = m.sigma > 0 ? 2.0 / (m.sigma * m.sigma) : kInf;
        b.theta = b.Wp0;
        return b;
    }
    // Bounded variation: W(0) = 1/drift, W'(0+) = (q + Lambda)/drift^2.
    const double mu = m.drift;
    const double lam = jump_mass(m);
    b.W0 = 1.0 / mu;
    b.Wp0 = (q + lam) / (mu * mu);
    b.theta = std::isinf(lam) ? kInf : -zeta / mu + (q + lam) / (mu * mu);
    return b;
}

} // namespace levyscale
