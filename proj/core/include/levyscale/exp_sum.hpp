#pragma once

#include <cstddef>
#include <vector>

namespace levyscale {

// One term  weight * x^power * exp(rate * x).
struct ExpSumTerm {
    double weight = 0.0;
    double rate = 0.0;
    int power = 0;
};

// Closed-form sum of exponential terms. This family is closed under
// differentiation, antidifferentiation, products and Laplace transforms,
// which is what makes the whole scale-function pipeline exact once the
// roots are known.
class ExpSum {
public:
    ExpSum() = default;
    explicit ExpSum(std::vector<ExpSumTerm> terms);

    const std::vector<ExpSumTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    // Merges into an existing term when (rate, power) matches exactly.
    void add_term(double weight, double rate, int power = 0);

    double eval(double x) const;
    // Sets *overflow when a term exceeded the double exponent range
    // (the result is +/-inf in that case).
    double eval(double x, bool* overflow) const;

    ExpSum derivative() const;
    // Antiderivative F with F(0) = 0.
    ExpSum antiderivative() const;

    // integral_0^inf e^{-s x} f(x) dx = sum w * p! / (s - r)^{p+1}.
    // Requires s > max_rate().
    double laplace_transform(double s) const;

    ExpSum scaled(double c) const;
    ExpSum plus(const ExpSum& other) const;
    ExpSum times(const ExpSum& other) const;

    // Removes all terms with |rate - r| <= tol and returns their total weight
    // (used to cancel analytically-zero leading terms without leaving
    // floating-point residue behind).
    double remove_rate(double r, double tol);

    // Drop terms with |weight| < rel_tol * max |weight|.
    void prune(double rel_tol = 1e-16);

    double max_rate() const;

private:
    std::vector<ExpSumTerm> terms_;
};

} // namespace levyscale
