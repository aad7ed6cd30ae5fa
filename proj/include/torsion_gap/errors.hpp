#ifndef TORSION_GAP_ERRORS_HPP
#define TORSION_GAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace torsion_gap {

// Invalid construction parameters or malformed literals.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of a closed-form expression.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Evaluation on top of a kernel singularity.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Predictor evaluated outside its validity annulus.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Numerical solve failure (ill-posed collocation, unconverged certificate,
// no maximum found).
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace torsion_gap

#endif  // TORSION_GAP_ERRORS_HPP
