// ldos.cpp: windowed Fourier transform of the survival amplitude

#include "spinbath/ldos.hpp"

#include "spinbath/errors.hpp"

#include <cmath>
#include <numbers>

namespace spinbath {

LdosParams default_ldos_params(const SpectralBounds& bounds) {
    const double range = bounds.e_max - bounds.e_min;
    LdosParams p;
    p.window_width = 0.01 * range;
    const double t_max = 6.0 / p.window_width;
    const double tau_limit = 2.0 * std::numbers::pi / (range + 12.0 * p.window_width);
    p.n_steps = static_cast<int>(std::ceil(t_max / (0.95 * tau_limit)));
    p.tau = t_max / p.n_steps;
    p.de = 0.25 * p.window_width;
    return p;
}

std::vector<cplx> survival_amplitudes(const CompiledHamiltonian& h, const PropagatorPlan& plan,
                                      const StateVector& psi0, int n_steps) {
    if (n_steps < 0) {
        throw ConfigError("number of survival samples must be non-negative");
    }
    if (psi0.dim() != h.dim()) {
        throw ShapeError("initial state does not match the Hamiltonian register");
    }
    ChebyshevPropagator prop(h, plan);
    std::vector<cplx> psi = psi0.amps;
    std::vector<cplx> a;
    a.reserve(static_cast<std::size_t>(n_steps) + 1);
    const double n0 = norm2(psi0.amps);
    a.push_back(inner(psi0.amps, psi) / n0);
    for (int m = 1; m <= n_steps; ++m) {
        prop.step(psi);
        a.push_back(inner(psi0.amps, psi) / n0);
    }
    return a;
}

std::vector<double> ldos_grid(const SpectralBounds& bounds, double window_width, double de) {
    if (!(de > 0.0) || !(window_width > 0.0)) {
        throw ConfigError("LDOS grid spacing and window width must be positive");
    }
    const double lo = bounds.e_min - 6.0 * window_width;
    const double hi = bounds.e_max + 6.0 * window_width;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / de)) + 1;
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) {
        g[k] = lo + de * static_cast<double>(k);
    }
    return g;
}

LdosSpectrum ldos_spectrum(std::span<const cplx> a, double tau, double w, std::vector<double> grid,
                           const SpectralBounds& bounds) {
    if (a.empty() || !(tau > 0.0) || !(w > 0.0)) {
        throw ConfigError("LDOS needs samples, a positive step and a positive window");
    }
    if (grid.size() < 2) {
        throw ConfigError("LDOS grid needs at least two points");
    }
    if (grid.front() > bounds.e_min || grid.back() < bounds.e_max) {
        throw ConfigError("LDOS energy grid does not cover the spectral bounds");
    }
    LdosSpectrum s;
    s.de = grid[1] - grid[0];
    s.window_width = w;
    s.tau = tau;
    s.t_max = tau * static_cast<double>(a.size() - 1);
    std::vector<cplx> ag(a.size());
    for (std::size_t m = 0; m < a.size(); ++m) {
        const double t = tau * static_cast<double>(m);
        ag[m] = a[m] * std::exp(-0.5 * t * t * w * w);
    }
    s.weights.resize(grid.size());
    const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n; ++k) {
        const double e = grid[static_cast<std::size_t>(k)];
        double acc = ag[0].real();
        for (std::size_t m = 1; m < ag.size(); ++m) {
            const double t = tau * static_cast<double>(m);
            acc += 2.0 * (std::exp(cplx{0.0, e * t}) * ag[m]).real();
        }
        s.weights[static_cast<std::size_t>(k)] = tau * acc / (2.0 * std::numbers::pi);
    }
    s.energies = std::move(grid);
    return s;
}

LdosMoments ldos_moments(const LdosSpectrum& s) {
    LdosMoments m;
    for (std::size_t k = 0; k < s.energies.size(); ++k) {
        const double e = s.energies[k];
        const double w = s.weights[k] * s.de;
        m.norm += w;
        m.mean += w * e;
        m.second += w * e * e;
    }
    m.mean /= m.norm;
    m.second /= m.norm;
    m.variance = m.second - m.mean * m.mean - s.window_width * s.window_width;
    return m;
}

LdosSpectrum compute_ldos(const CompiledHamiltonian& h, const StateVector& psi0, double truncation_tol) {
    const SpectralBounds b = spectral_bounds(h);
    const LdosParams p = default_ldos_params(b);
    const PropagatorPlan plan = make_plan(b, p.tau, truncation_tol);
    const auto a = survival_amplitudes(h, plan, psi0, p.n_steps);
    return ldos_spectrum(a, p.tau, p.window_width, ldos_grid(b, p.window_width, p.de), b);
}

} // namespace spinbath
