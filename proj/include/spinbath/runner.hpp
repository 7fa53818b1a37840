// runner.hpp: experiment drivers behind the command-line subcommands
//
// Output directory layout of a run:
//   spec.json         every Hamiltonian term
//   config.ini        the effective configuration
//   metrics.csv       t,sigma,gamma,delta,b,S_quad,echo,E_S,rho_0..rho_{d-1}
//   correlators.csv   t,S1_dot_S2,SzSz,SxSx,M,Sx1,Sz1,concurrence
//   checkpoint.bin    latest resumable state
//   fit_report.json   (fit = true)
//   ldos.csv, ldos_summary.json   (ldos = true)

#pragma once

#include "spinbath/config.hpp"
#include "spinbath/hilbert.hpp"
#include "spinbath/observables.hpp"
#include "spinbath/propagate.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace spinbath {

// One closed-system trajectory sampled every tau.
class Trajectory {
public:
    explicit Trajectory(const RunConfig& cfg);
    // Uses the given spec instead of building one from cfg (initial states
    // still follow cfg and its seed).
    Trajectory(const RunConfig& cfg, HamiltonianSpec spec);

    const RunConfig& config() const noexcept { return cfg_; }
    const HamiltonianSpec& spec() const noexcept { return spec_; }
    const CompiledHamiltonian& hamiltonian() const noexcept { return h_; }
    const EigenBasis& basis() const noexcept { return basis_; }
    const PropagatorPlan& plan() const noexcept { return prop_->plan(); }
    const StateVector& state() const noexcept { return psi_; }
    const StateVector& initial_system_state() const noexcept { return psi_sys0_; }

    int step_index() const noexcept { return step_; }
    double time() const noexcept { return step_ * cfg_.run.tau; }

    void advance();
    // Replace the current state (resume from a checkpoint).
    void restore(int step, std::vector<cplx> amps);

    ReducedDensityMatrix rho() const; // up/down basis
    MetricSample sample() const;

    // Scales the propagator bounds down to provoke a bounds failure (test hook).
    void corrupt_bounds(double factor);

private:
    void init();

    RunConfig cfg_;
    HamiltonianSpec spec_;
    CompiledHamiltonian h_;
    EigenBasis basis_;
    StateVector psi_sys0_;
    StateVector psi_;
    std::unique_ptr<ChebyshevPropagator> prop_;
    int step_ = 0;
};

std::string csv_header(int sys_dim);
std::string csv_row(const MetricSample& m, const RunSettings& run);
std::string correlator_header();
std::string correlator_row(const MetricSample& m);

// Columns of a CSV file; empty fields become NaN.
struct CsvTable {
    std::vector<std::string> columns;
    std::map<std::string, std::vector<double>> data;
    std::size_t rows() const;
    const std::vector<double>& at(const std::string& column) const;
};
CsvTable read_csv(const std::filesystem::path& path);

struct RunOptions {
    std::filesystem::path out_dir;
    bool resume = false;
    int stop_after = -1;         // stop (with a checkpoint) after this step
    double corrupt_bounds = 0.0; // > 0 scales the Chebyshev bounds (test hook)
    bool quiet = false;
};

struct RunSummary {
    int last_step = 0;
    bool stopped_early = false;
    bool resumed = false;
};

RunSummary run_simulation(const RunConfig& cfg, const RunOptions& opts);

// Independent seeds, up to `jobs` at a time, each in out_dir/seed_<seed>.
// Returns the exit code of each job in seed order.
std::vector<int> run_batch(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds, int jobs,
                           const RunOptions& opts);

// index, energy, cluster id
void write_spectrum(const RunConfig& cfg, std::ostream& out);

nlohmann::json fit_metrics(const CsvTable& metrics);
nlohmann::json run_fit(const std::filesystem::path& out_dir);

nlohmann::json run_ldos(const RunConfig& cfg, const std::filesystem::path& out_dir);

struct ValidationReport {
    double chebyshev_vs_exact = 0.0;
    double partial_trace_vs_dense = 0.0;
    double bounds_violation = 0.0;
    double commutator_sys_int = 0.0;
    double commutator_sys_env = 0.0;
    double tolerance = 1e-9;

    bool passed() const;
    nlohmann::json to_json() const;
};

// Chebyshev against dense propagation over 10 steps, partial trace against an
// index-summation oracle, and bounds against the dense spectrum; at most 12
// spins. Commutator Frobenius norms are reported but not judged.
ValidationReport run_validation(const RunConfig& cfg, double corrupt_bounds = 0.0);

// Map an exception to the documented exit code (2 config, 3 numerical, 4 budget).
int exit_code_for(const std::exception& e);

} // namespace spinbath
