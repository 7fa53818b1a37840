// ldos.hpp: local density of states of an initial state from its survival
// amplitude a(t) = <psi0| e^{-iHt} |psi0>:
//   L(E) = (1/2pi) int dt e^{iEt} a(t) g(t),  g(t) = exp(-t^2 w^2 / 2),
// so every eigenvalue E_k contributes a unit-weight Gaussian of width w.
// Negative times use a(-t) = a(t)*.

#pragma once

#include "spinbath/hilbert.hpp"
#include "spinbath/propagate.hpp"

#include <span>
#include <vector>

namespace spinbath {

struct LdosParams {
    double window_width = 0.0; // w
    double tau = 0.0;          // sampling step
    int n_steps = 0;           // samples t_m = m tau, m = 0..n_steps
    double de = 0.0;           // energy grid spacing
};

// w = 1% of the bounds' range, t_max = 6/w, tau below the aliasing limit
// 2pi / (range + 12 w), grid spacing w/4.
LdosParams default_ldos_params(const SpectralBounds& bounds);

struct LdosSpectrum {
    std::vector<double> energies; // uniform
    std::vector<double> weights;
    double de = 0.0;
    double window_width = 0.0;
    double t_max = 0.0;
    double tau = 0.0;
};

struct LdosMoments {
    double norm = 0.0;     // sum weights * dE
    double mean = 0.0;     // first moment
    double second = 0.0;   // second moment (includes w^2)
    double variance = 0.0; // second - mean^2 - w^2
};

// a(t_m) for m = 0..n_steps with t_m = m * plan.tau.
std::vector<cplx> survival_amplitudes(const CompiledHamiltonian& h, const PropagatorPlan& plan,
                                      const StateVector& psi0, int n_steps);

// Grid from e_min - 6w to e_max + 6w with the given spacing.
std::vector<double> ldos_grid(const SpectralBounds& bounds, double window_width, double de);

// Throws ConfigError if the grid does not cover [bounds.e_min, bounds.e_max].
LdosSpectrum ldos_spectrum(std::span<const cplx> amplitudes, double tau, double window_width,
                           std::vector<double> grid, const SpectralBounds& bounds);

LdosMoments ldos_moments(const LdosSpectrum& s);

// Full pipeline with default parameters.
LdosSpectrum compute_ldos(const CompiledHamiltonian& h, const StateVector& psi0, double truncation_tol = 1e-14);

} // namespace spinbath
