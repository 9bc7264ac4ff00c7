#pragma once

// Entanglement-distribution protocol evaluators. Each maps a resource, its
// amplifier gains and the two channel transmissivities to a RateResult.

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace satent {

enum class Configuration { Relay, Distribution };
enum class ResourceKind { DV, CV };

std::string_view to_string(Configuration c) noexcept;
std::string_view to_string(ResourceKind r) noexcept;
Configuration parse_configuration(std::string_view s);
ResourceKind parse_resource(std::string_view s);

// DV: single-rail state with parameter xi. CV: TMSV truncated at n_max
// photons per arm with parameter chi (Fock evaluators), or with quadrature
// variance nu = (1+chi^2)/(1-chi^2) (Gaussian evaluators).
struct Resource {
    ResourceKind kind = ResourceKind::DV;
    double parameter = 0.5; // xi or chi
    int n_max = 5;          // CV truncation

    void validate() const;
};

struct RateResult {
    double probability = 0.0;
    double i_fwd = 0.0;  // nats
    double i_rev = 0.0;  // nats
    double rate = 0.0;   // p * max(i_fwd, i_rev, 0)
    std::map<std::string, double> parameters;
    std::vector<std::string> warnings;
};

// Coherent informations below this magnitude are numerical noise.
inline constexpr double kRateNoiseFloor = 1e-12;

// p * max(i_fwd, i_rev, 0) with the noise floor applied.
double protocol_rate(double p, double i_fwd, double i_rev);

// Alice keeps one arm; the other crosses eta_a then eta_b.
RateResult relay_unamp_dv(double xi, double eta_a, double eta_b);
// Both arms leave a central source.
RateResult dist_unamp_dv(double xi, double eta_a, double eta_b);

// Same circuits in the truncated Fock basis for any resource.
RateResult relay_unamp_fock(const Resource& resource, double eta_a, double eta_b);
RateResult dist_unamp_fock(const Resource& resource, double eta_a, double eta_b);

// Gaussian TMSV of variance nu.
RateResult relay_unamp_cv(double nu, double eta_a, double eta_b);
RateResult dist_unamp_cv(double nu, double eta_a, double eta_b);

// Distributed scissor: Bob's ancilla arm and Alice's resource arm meet at a
// balanced beamsplitter at the relay (6 modes).
RateResult relay_amp(const Resource& resource, double g, double eta_a, double eta_b);

// Local scissors at both receivers (8 modes).
RateResult dist_amp(const Resource& resource, double g_a, double g_b, double eta_a, double eta_b);

} // namespace satent
