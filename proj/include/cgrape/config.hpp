#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "cgrape/optimizer.hpp"
#include "cgrape/phase_qubit.hpp"

namespace cgrape {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PulseConfig {
    double duration_ns = 10.0;
    double dt_ns = 0.1;
    double sigma_ns = 0.5;
    double head_ns = 2.0;
    double tail_ns = 2.0;
    double initial_amplitude_over_2pi = 0.9385;
    std::optional<double> lo_over_2pi;  // default: phi_ref from the model fit
    std::optional<double> hi_over_2pi;  // default: the alpha = 9 validity limit
};

struct RunConfig {
    QubitParams qubit;
    FitSettings model;
    PulseConfig pulse;
    OptimizerSettings optimizer;
    std::string output_dir = "out";
    std::uint64_t seed = 0;  // reserved; the pipeline is deterministic
};

// Parse and validate a config document. Unknown keys, wrong types and
// out-of-range values raise config_error with the offending key in the message.
RunConfig parse_config(const nlohmann::json& doc);

RunConfig load_config(const std::string& path);

// Canonical JSON for the parsed config (defaults filled in, keys sorted).
nlohmann::json config_to_json(const RunConfig& config);

// FNV-1a hash of the canonical dump, as a fixed-width hex string.
std::string config_hash(const RunConfig& config);

// Hash of the fit-relevant sections only (qubit and model); pulse and
// optimizer settings do not invalidate a cached model fit.
std::string fit_hash(const RunConfig& config);

}  // namespace cgrape
