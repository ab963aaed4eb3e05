#include "levyscale/exp_sum.hpp"
#include "levyscale/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levyscale {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// weight * x^power * exp(rate*x) with graceful over/underflow.
double eval_term(const ExpSumTerm& t, double x, bool* overflow) {
    if (t.weight == 0.0) return 0.0;
    if (x == 0.0) return t.power == 0 ? t.weight : 0.0;
    const double ax = std::abs(x);
    const double log_mag = std::log(std::abs(t.weight)) + t.power * std::log(ax) + t.rate * x;
    if (log_mag > 709.0) {
        if (overflow) *overflow = true;
        double sign = t.weight < 0 ? -1.0 : 1.0;
        if (x < 0 && (t.power & 1)) sign = -sign;
        return sign * std::numeric_limits<double>::infinity();
    }
    if (log_mag < -745.0) return 0.0;
    if (std::abs(t.rate * x) < 600.0) {
        double xp = 1.0;
        for (int i = 0; i < t.power; ++i) xp *= x;
        return t.weight * xp * std::exp(t.rate * x);
    }
    double sign = t.weight < 0 ? -1.0 : 1.0;
    if (x < 0 && (t.power & 1)) sign = -sign;
    return sign * std::exp(log_mag);
}

} // namespace

ExpSum::ExpSum(std::vector<ExpSumTerm> terms) {
    for (const auto& t : terms) add_term(t.weight, t.rate, t.power);
}

void ExpSum::add_term(double weight, double rate, int power) {
    if (weight == 0.0) return;
    if (power < 0) throw ValidationError("ExpSum power must be non-negative");
    for (auto& t : terms_) {
        if (t.rate == rate && t.power == power) {
            t.weight += weight;
            return;
        }
    }
    terms_.push_back({weight, rate, power});
}

double ExpSum::eval(double x) const {
    bool dummy = false;
    return eval(x, &dummy);
}

double ExpSum::eval(double x, bool* overflow) const {
    if (overflow) *overflow = false;
    double sum = 0.0;
    for (const auto& t : terms_) sum += eval_term(t, x, overflow);
    return sum;
}

ExpSum ExpSum::derivative() const {
    ExpSum d;
    for (const auto& t : terms_) {
        if (t.rate != 0.0) d.add_term(t.weight * t.rate, t.rate, t.power);
        if (t.power > 0) d.add_term(t.weight * t.power, t.rate, t.power - 1);
    }
    return d;
}

ExpSum ExpSum::antiderivative() const {
    ExpSum F;
    for (const auto& t : terms_) {
        if (t.rate == 0.0) {
            F.add_term(t.weight / (t.power + 1), 0.0, t.power + 1);
            continue;
        }
        // integral x^p e^{rx} = e^{rx} * sum_{j=0}^{p} (-1)^{p-j} (p!/j!) x^j / r^{p-j+1}
        const double pfak = factorial(t.power);
        for (int j = 0; j <= t.power; ++j) {
            const double sgn = ((t.power - j) & 1) ? -1.0 : 1.0;
            const double coef =
                t.weight * sgn * pfak / factorial(j) / std::pow(t.rate, t.power - j + 1);
            F.add_term(coef, t.rate, j);
            if (j == 0) F.add_term(-coef, 0.0, 0); // pin F(0) = 0
        }
    }
    return F;
}

double ExpSum::laplace_transform(double s) const {
    if (!terms_.empty() && s <= max_rate())
        throw ValidationError("laplace_transform requires s > max rate of the sum");
    double sum = 0.0;
    for (const auto& t : terms_)
        sum += t.weight * factorial(t.power) / std::pow(s - t.rate, t.power + 1);
    return sum;
}

ExpSum ExpSum::scaled(double c) const {
    ExpSum r;
    for (const auto& t : terms_) r.add_term(c * t.weight, t.rate, t.power);
    return r;
}

ExpSum ExpSum::plus(const ExpSum& other) const {
    ExpSum r = *this;
    for (const auto& t : other.terms_) r.add_term(t.weight, t.rate, t.power);
    return r;
}

ExpSum ExpSum::times(const ExpSum& other) const {
    ExpSum r;
    for (const auto& a : terms_)
        for (const auto& b : other.terms_)
            r.add_term(a.weight * b.weight, a.rate + b.rate, a.power + b.power);
    return r;
}

double ExpSum::remove_rate(double r, double tol) {
    double removed = 0.0;
    auto it = std::remove_if(terms_.begin(), terms_.end(), [&](const ExpSumTerm& t) {
        if (std::abs(t.rate - r) <= tol) {
            removed += t.weight;
            return true;
        }
        return false;
    });
    terms_.erase(it, terms_.end());
    return removed;
}

void ExpSum::prune(double rel_tol) {
    double wmax = 0.0;
    for (const auto& t : terms_) wmax = std::max(wmax, std::abs(t.weight));
    if (wmax == 0.0) {
        terms_.clear();
        return;
    }
    const double floor = rel_tol * wmax;
    auto it = std::remove_if(terms_.begin(), terms_.end(),
                             [&](const ExpSumTerm& t) { return std::abs(t.weight) < floor; });
    terms_.erase(it, terms_.end());
}

double ExpSum::max_rate() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms_) m = std::max(m, t.rate);
    return m;
}

} // namespace levyscale
