// observables.hpp: diagnostics of the system's reduced density matrix
//
// Metrics are evaluated in the eigenbasis of H_S (BasisTag::energy):
//   sigma   sqrt(sum_{i<j} |rho_ij|^2)                 size of the off-diagonal part
//   gamma   sqrt(sum |rho_ii - rho_jj|^2), i<j in the same degenerate cluster
//   b       mean of (ln rho_ii - ln rho_jj) / (E_j - E_i) over pairs from
//           different clusters whose diagonals exceed a floor; for a Boltzmann
//           diagonal e^{-beta E} this is beta
//   delta   Euclidean distance of the diagonal from e^{-b E_i} / Z
//   S_quad  1 - Tr rho^2
//   echo    Tr(rho rho0), rho0 evolved with H_S only

#pragma once

#include "spinbath/hilbert.hpp"
#include "spinbath/model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace spinbath {

struct EigenBasis {
    Eigen::VectorXd energies; // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns (H_S is real in the up/down basis)
    std::vector<int> cluster; // cluster id of each level
    std::vector<std::vector<int>> groups;
    double tolerance = 0.0;

    int dim() const noexcept { return static_cast<int>(energies.size()); }
};

// Dense Jacobi diagonalization of H_S (at most 8 spins). Levels whose energies
// differ from their neighbour by at most rel_tol * max|E| share a cluster.
EigenBasis eigendecompose_system(const HamiltonianSpec& sys_part, double rel_tol = 1e-9);

ReducedDensityMatrix to_energy_basis(const ReducedDensityMatrix& rho, const EigenBasis& basis);
ReducedDensityMatrix to_updown_basis(const ReducedDensityMatrix& rho, const EigenBasis& basis);

double sigma(const ReducedDensityMatrix& rho_e);
double gamma(const ReducedDensityMatrix& rho_e, const EigenBasis& basis);
// Empty when no admissible pair exists.
std::optional<double> effective_beta(const ReducedDensityMatrix& rho_e, const EigenBasis& basis,
                                     double floor = 1e-12);
double delta(const ReducedDensityMatrix& rho_e, const EigenBasis& basis, double b);
double quadratic_entropy(const ReducedDensityMatrix& rho);
double loschmidt_echo(const ReducedDensityMatrix& rho, const ReducedDensityMatrix& rho0);

// Two-spin concurrence of an up/down-basis 4x4 density matrix.
double concurrence(const ReducedDensityMatrix& rho);

// Energy-basis density matrix of the system evolved by H_S alone from the
// pure state psi_sys (up/down amplitudes): rho0_kl = e^{-i(E_k - E_l)t} a_k a_l*.
ReducedDensityMatrix isolated_system_rho(const EigenBasis& basis, const StateVector& psi_sys, double t);

// Tr(rho S^a_i S^a_j) and single-spin expectations, up/down basis.
double spin_correlation(const ReducedDensityMatrix& rho, int i, int j, Axis a);
double spin_expectation(const ReducedDensityMatrix& rho, int i, Axis a);

struct Correlators {
    double s1_dot_s2 = 0.0; // spins 0 and 1
    double zz = 0.0;
    double xx = 0.0;
    double magnetization = 0.0; // sum_i <S^z_i>
    double sx1 = 0.0;
    double sz1 = 0.0;
    double energy = 0.0; // Tr(rho H_S)
};

Correlators correlators_and_energy(const ReducedDensityMatrix& rho_updown, const EigenBasis& basis);

struct MetricSample {
    double t = 0.0;
    double sigma = 0.0;
    double gamma = 0.0;
    std::optional<double> delta;
    std::optional<double> b;
    double s_quad = 0.0;
    std::optional<double> echo;
    double e_s = 0.0;
    std::vector<double> rho_diag;
    std::optional<double> concurrence;
    std::optional<Correlators> correlators;
};

// All metrics from an up/down-basis rho. rho0_e (energy basis) enables the echo.
MetricSample compute_metrics(double t, const ReducedDensityMatrix& rho_updown, const EigenBasis& basis,
                             double floor = 1e-12, const ReducedDensityMatrix* rho0_e = nullptr);

} // namespace spinbath
