// fitting.hpp: least-squares fits of relaxation curves
//
//   exponential      y = offset + amplitude * exp(-t / tau)
//   gaussian decay   y = offset + amplitude * exp(-(t / tau)^2)
//   fixed-amplitude  y = (1/2) exp(-A t)
//
// The three-parameter fits run Levenberg-Marquardt on (offset, amplitude,
// ln tau), which keeps tau positive without constraints.

#pragma once

#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace spinbath {

struct FitWindow {
    double t_start = -std::numeric_limits<double>::infinity();
    double t_end = std::numeric_limits<double>::infinity();
};

enum class DecayShape { exponential, gaussian };

struct DecayFit {
    DecayShape shape = DecayShape::exponential;
    double offset = 0.0;
    double amplitude = 0.0;
    double tau_decay = 0.0;
    double rms_residual = 0.0;
    FitWindow window; // actual first and last sample times used
    int n_samples = 0;
    int iterations = 0;
    std::vector<double> cost_history; // sum of squares after each accepted step
};

struct FitOptions {
    int max_iterations = 200;
    double step_tol = 1e-10; // relative
};

// Throws FitError if fewer than 10 samples fall in the window, the data are
// constant, or the solver does not converge.
DecayFit fit_exponential(std::span<const double> t, std::span<const double> y, FitWindow window = {},
                         const FitOptions& opts = {});
DecayFit fit_gaussian_decay(std::span<const double> t, std::span<const double> y, FitWindow window = {},
                            const FitOptions& opts = {});

struct RateFit {
    double rate = 0.0;
    double rms_residual = 0.0;
    int n_samples = 0;
    int iterations = 0;
};

// |rho_offdiag(t)| = (1/2) exp(-A t); returns A.
RateFit fit_offdiag_exponential(std::span<const double> t, std::span<const double> y, FitWindow window = {},
                                const FitOptions& opts = {});

// Large-bath envelope for the two-spin off-diagonal element:
// [1/6 + (1 - b t^2)/3 * exp(-c t^2)] cos(omega t), b = N Delta^2 / 4, c = b/2,
// omega = J - Delta.
double melik_curve(double t, int n_env, double delta, double j);

// Time of the first sample with sigma < fraction * sigma(0); the default start
// of b(t) and E_S(t) fits. Returns +inf if sigma never falls that far.
double transient_end(std::span<const double> t, std::span<const double> sigma, double fraction = 0.5);

} // namespace spinbath
