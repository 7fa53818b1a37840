// config.hpp: run configuration files
//
//   [system]       topology, family, J, n_S, initial_state
//   [environment]  topology, family, Omega, n, initial_state
//   [interaction]  family, Delta
//   [run]          tau, n_steps, seed, metrics, output, ldos, fit, and optional
//                  numerical overrides (see RunSettings)
//
// Lines are `key = value`; '#' starts a comment. Unknown sections or keys,
// duplicates and missing physics parameters are errors reported with the line
// number. tau accepts products and quotients of numbers and `pi`, e.g. pi/10.

#pragma once

#include "spinbath/model.hpp"
#include "spinbath/propagate.hpp"
#include "spinbath/states.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace spinbath {

struct SubsystemConfig {
    TopologyKind topology = TopologyKind::ring;
    FamilyKind family = FamilyKind::Heisenberg;
    double scale = 0.0; // J or Omega
    int n = 0;
    StateKind initial_state = StateKind::UD;
};

struct RunSettings {
    double tau = 0.0;
    int n_steps = 100;
    std::uint64_t seed = 1;
    std::vector<std::string> metrics; // subset of known_metrics()
    std::string output = "out";
    bool ldos = false;
    bool fit = false;

    double floor = 1e-12;
    double degeneracy_tol = 1e-9;
    double truncation_tol = 1e-14;
    double near_ud_epsilon = 0.05;
    double near_ground_epsilon = 0.05;
    int max_spins = 24;
    int checkpoint_every = 100;
    BoundsMode bounds = BoundsMode::gershgorin;

    bool wants(std::string_view metric) const;
};

struct RunConfig {
    SubsystemConfig system;
    SubsystemConfig environment;
    FamilyKind interaction_family = FamilyKind::Heisenberg;
    double delta = 0.0;
    RunSettings run;

    int n_total() const noexcept { return system.n + environment.n; }
};

// sigma, gamma, delta, b, S_quad, echo, E_S, rho, correlators
const std::vector<std::string>& known_metrics();

RunConfig parse_config(std::string_view text, const std::string& source = "config");
RunConfig load_config(const std::filesystem::path& path);

// Range checks that do not depend on the file layout. Throws ConfigError, or
// BudgetError if the register exceeds run.max_spins.
void validate_config(const RunConfig& cfg);

// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& cfg);

// Evaluates `pi/10`, `2*pi`, `0.314`, ...
double parse_time_expression(std::string_view s);

HamiltonianSpec build_spec(const RunConfig& cfg);

} // namespace spinbath
