#pragma once

#include <stdexcept>
#include <string>

namespace satent {

// Base of every exception thrown by the library. `kind()` is a stable,
// machine-readable tag used by the CLI when it reports failures as JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error("domain_error", what) {}
};

// A quantum state or covariance matrix that violates physicality.
struct InvalidStateError : Error {
    explicit InvalidStateError(const std::string& what) : Error("invalid_state", what) {}
};

// A beamsplitter would push photons beyond the representable per-mode cutoff.
struct CutoffError : Error {
    explicit CutoffError(const std::string& what) : Error("cutoff_exceeded", what) {}
};

// Post-selection onto an outcome whose probability underflows.
struct ImprobableBranchError : Error {
    explicit ImprobableBranchError(const std::string& what) : Error("improbable_branch", what) {}
};

// Field sampling cannot represent a propagation step without aliasing.
struct SamplingError : Error {
    explicit SamplingError(const std::string& what) : Error("sampling_error", what) {}
};

// Numerical failure (NaN/Inf, quadrature or root-finding breakdown).
struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error("numerical_error", what) {}
};

// Malformed or inconsistent run configuration. `field()` holds a JSON-pointer-like path.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error("config_error", field.empty() ? what : field + ": " + what),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace satent
