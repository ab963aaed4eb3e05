#pragma once

#include <stdexcept>
#include <string>

namespace levyscale {

// Parameter / input problems: bad model parameters, malformed configs, domain
// violations the caller could have checked. Mapped to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failures discovered mid-computation. Mapped to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Laplace exponent evaluated inside the guard band of one of its poles.
class PoleEvaluation : public NumericalError {
public:
    explicit PoleEvaluation(const std::string& what) : NumericalError(what) {}
};

// A root bracket carried no sign change (after probing).
class BracketFailure : public NumericalError {
public:
    explicit BracketFailure(const std::string& what) : NumericalError(what) {}
};

// Two roots (or poles) coincide to within the multiplicity tolerance; the
// partial-fraction expansion would divide by ~0.
class MultiplicityDetected : public NumericalError {
public:
    explicit MultiplicityDetected(const std::string& what) : NumericalError(what) {}
};

// Phase-type generator has non-real eigenvalues; the pole ladder is undefined.
class ComplexPoles : public NumericalError {
public:
    explicit ComplexPoles(const std::string& what) : NumericalError(what) {}
};

// A partial-fraction factor (1 - xi_k/xi_i) fell below the safe-division floor.
class DivisionNearZero : public NumericalError {
public:
    explicit DivisionNearZero(const std::string& what) : NumericalError(what) {}
};

// A scan found no sign change for an equation that was expected to cross zero
// (e.g. the bail-out first-order condition has no finite root).
class NoSignChange : public NumericalError {
public:
    explicit NoSignChange(const std::string& what) : NumericalError(what) {}
};

// An optimisation problem collapsed (empty feasible set, no admissible policy).
class Degenerate : public NumericalError {
public:
    explicit Degenerate(const std::string& what) : NumericalError(what) {}
};

// A certified enclosure came back empty (upper envelope below lower envelope).
class EmptyInterval : public NumericalError {
public:
    explicit EmptyInterval(const std::string& what) : NumericalError(what) {}
};

} // namespace levyscale
