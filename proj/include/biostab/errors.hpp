#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace biostab {

/// Invalid physical or numerical input; the message names the offending field.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iterative solver exhausted its iteration budget.
class IterationError : public std::runtime_error {
public:
    IterationError(const std::string& what, std::vector<double> residual_history)
        : std::runtime_error(what), residuals(std::move(residual_history)) {}

    std::vector<double> residuals;  // one entry per iteration, last = final residual

    double last_residual() const {
        return residuals.empty() ? std::numeric_limits<double>::quiet_NaN() : residuals.back();
    }
};

/// Shooting iteration failed; carries the best unknown/defect pair seen.
class ShootingError : public std::runtime_error {
public:
    ShootingError(const std::string& what, double unknown, double defect)
        : std::runtime_error(what), best_unknown(unknown), best_defect(defect) {}

    double best_unknown;
    double best_defect;
};

/// Two inputs were built from different parameter sets.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No sign change found while searching for a root.
class BracketingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense linear algebra backend failure (factorization or eigensolver).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace biostab
