// propagate.hpp: time evolution e^{-iH tau} by Chebyshev expansion, plus a
// dense eigendecomposition propagator used as an oracle on small registers.

#pragma once

#include "spinbath/hilbert.hpp"
#include "spinbath/model.hpp"

#include <vector>

namespace spinbath {

struct SpectralBounds {
    double e_min = 0.0;
    double e_max = 0.0;
    double margin = 1.05;

    double center() const noexcept { return 0.5 * (e_max + e_min); }
    double half_width() const noexcept { return 0.5 * (e_max - e_min); }
};

enum class BoundsMode { gershgorin, lanczos };

// Enclosing interval for the spectrum of h. Lower and upper estimates are the
// tighter of (a) the sum over bonds of each bond's exact two-spin extreme
// eigenvalues and (b) Gershgorin row sums; the half-width is then multiplied by
// margin. BoundsMode::lanczos additionally tightens with a short Lanczos run
// (never beyond the Gershgorin interval). An empty H gets a tiny guard interval.
SpectralBounds spectral_bounds(const CompiledHamiltonian& h, BoundsMode mode = BoundsMode::gershgorin,
                               double margin = 1.05);
SpectralBounds spectral_bounds(const HamiltonianSpec& spec, BoundsMode mode = BoundsMode::gershgorin,
                               double margin = 1.05);

struct PropagatorPlan {
    double tau = 0.0;
    SpectralBounds bounds;
    double truncation_tol = 1e-14;
    int order = 0;                   // highest Chebyshev index kept
    std::vector<cplx> coefficients;  // c_k including the global phase, k = 0..order
};

// c_k = (2 - delta_k0) (-i)^k J_k(a tau) e^{-i bbar tau}; the series stops at the
// first k > a tau for which |J_k| and |J_{k+1}| are both below truncation_tol.
PropagatorPlan make_plan(const SpectralBounds& bounds, double tau, double truncation_tol = 1e-14);

// Reusable work buffers for chebyshev_step on one register size.
class ChebyshevPropagator {
public:
    ChebyshevPropagator(const CompiledHamiltonian& h, PropagatorPlan plan);

    const PropagatorPlan& plan() const noexcept { return plan_; }

    // psi <- e^{-i tau H} psi. Throws SpectralBoundsError if the norm moves by
    // more than 1e-8 (a sign that the bounds do not enclose the spectrum).
    void step(std::vector<cplx>& psi);

private:
    const CompiledHamiltonian& h_;
    PropagatorPlan plan_;
    std::vector<cplx> t_prev_;
    std::vector<cplx> t_curr_;
    std::vector<cplx> h_t_;
    std::vector<cplx> acc_;
};

StateVector chebyshev_step(const HamiltonianSpec& spec, const PropagatorPlan& plan, const StateVector& psi);

// V e^{-i Lambda t} V^T psi from a dense eigendecomposition; at most 12 spins.
StateVector propagate_exact(const HamiltonianSpec& spec, const StateVector& psi, double t);

} // namespace spinbath
