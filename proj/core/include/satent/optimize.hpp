#pragma once

// Bounded derivative-free maximization: a coarse grid scan followed by a
// Nelder-Mead simplex started from the best grid point.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "satent/protocols.hpp"

namespace satent {

struct ParameterBound {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    bool log_scale = false; // grid and simplex work in log(x)
};

struct SearchSpec {
    std::vector<ParameterBound> bounds;
    int grid_points = 21;     // per dimension
    double rtol = 1e-4;       // simplex spread tolerance on the objective
    int max_evaluations = 4000;
    unsigned workers = 1;     // grid evaluation threads, 0 = hardware

    void validate() const;
};

struct OptimumResult {
    std::vector<double> x;
    double value = 0.0;
    double best_grid_value = 0.0;
    std::size_t evaluations = 0;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Deterministic for a given seed; the seed only orients the initial simplex.
OptimumResult maximize(const Objective& f, const SearchSpec& spec, std::uint64_t seed = 0);

struct ProtocolSpec {
    Configuration configuration = Configuration::Relay;
    ResourceKind resource = ResourceKind::DV;
    bool amplified = false;
    int n_max = 5;                // CV truncation for Fock evaluators
    double cv_squeezing_db = 8.0; // fixed squeezing of unamplified Gaussian runs
};

struct SearchOptions {
    int grid_points = 21;
    double rtol = 1e-4;
    double chi_max = 0.45;
    double g_max = 1000.0;
    unsigned workers = 1;
};

// Parameter box of a protocol, in evaluator order.
std::vector<ParameterBound> protocol_bounds(const ProtocolSpec& spec, const SearchOptions& options);

// Evaluates a protocol at a parameter vector ordered as protocol_bounds().
RateResult evaluate_protocol(const ProtocolSpec& spec, const std::vector<double>& x,
                             double eta_a, double eta_b);

// Maximizes R over the protocol's free parameters. Unamplified Gaussian
// protocols have no free parameter and are evaluated directly.
RateResult optimize_protocol(const ProtocolSpec& spec, double eta_a, double eta_b,
                             const SearchOptions& options = {}, std::uint64_t seed = 0);

std::string protocol_label(const ProtocolSpec& spec);

} // namespace satent
