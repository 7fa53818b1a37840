// propagate.cpp: Chebyshev propagator

#include "spinbath/propagate.hpp"

#include "spinbath/bessel.hpp"
#include "spinbath/eigensolvers.hpp"
#include "spinbath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spinbath {

namespace {

struct Interval {
    double lo;
    double hi;
};

Interval bond_sum_interval(const CompiledHamiltonian& h) {
    Interval r{0.0, 0.0};
    for (const auto& b : h.bonds()) {
        const double aligned_c = -b.cz / 4.0;
        const double aligned_r = std::abs(b.cx - b.cy) / 4.0;
        const double anti_c = b.cz / 4.0;
        const double anti_r = std::abs(b.cx + b.cy) / 4.0;
        r.lo += std::min(aligned_c - aligned_r, anti_c - anti_r);
        r.hi += std::max(aligned_c + aligned_r, anti_c + anti_r);
    }
    return r;
}

Interval gershgorin_interval(const CompiledHamiltonian& h) {
    const auto dim = static_cast<std::int64_t>(h.dim());
    const auto& diag = h.diagonal();
    const auto& bonds = h.bonds();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi)
    for (std::int64_t s = 0; s < dim; ++s) {
        double radius = 0.0;
        for (const auto& b : bonds) {
            const bool aligned = (((s >> b.lo) ^ (s >> b.hi)) & 1) == 0;
            radius += std::abs(aligned ? b.double_flip : b.flip_flop);
        }
        const double d = diag[static_cast<std::size_t>(s)];
        lo = std::min(lo, d - radius);
        hi = std::max(hi, d + radius);
    }
    return {lo, hi};
}

} // namespace

SpectralBounds spectral_bounds(const CompiledHamiltonian& h, BoundsMode mode, double margin) {
    if (!(margin >= 1.0)) {
        throw ConfigError("spectral bounds margin must be at least 1");
    }
    const Interval bs = bond_sum_interval(h);
    const Interval gg = gershgorin_interval(h);
    Interval r{std::max(bs.lo, gg.lo), std::min(bs.hi, gg.hi)};
    if (mode == BoundsMode::lanczos && h.dim() > 1) {
        const auto est = lanczos_extremes(h);
        r.lo = std::max(r.lo, est.lo);
        r.hi = std::min(r.hi, est.hi);
    }
    const double c = 0.5 * (r.lo + r.hi);
    double half = 0.5 * (r.hi - r.lo) * margin;
    const double guard = 1e-12 * std::max(1.0, std::abs(c)) * margin;
    half = std::max(half, guard);
    return SpectralBounds{c - half, c + half, margin};
}

SpectralBounds spectral_bounds(const HamiltonianSpec& spec, BoundsMode mode, double margin) {
    return spectral_bounds(CompiledHamiltonian(spec), mode, margin);
}

PropagatorPlan make_plan(const SpectralBounds& bounds, double tau, double truncation_tol) {
    if (!(bounds.e_max > bounds.e_min)) {
        throw SpectralBoundsError("spectral bounds must satisfy e_min < e_max");
    }
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw ConfigError("time step must be finite and non-negative");
    }
    if (!(truncation_tol > 0.0)) {
        throw ConfigError("truncation tolerance must be positive");
    }
    PropagatorPlan plan;
    plan.tau = tau;
    plan.bounds = bounds;
    plan.truncation_tol = truncation_tol;

    const double x = bounds.half_width() * tau;
    int kmax = static_cast<int>(std::ceil(1.5 * x)) + 40;
    int order = -1;
    std::vector<double> j;
    while (order < 0) {
        j = bessel_j_sequence(x, kmax);
        for (int k = static_cast<int>(std::floor(x)) + 1; k + 1 <= kmax; ++k) {
            if (std::abs(j[static_cast<std::size_t>(k)]) < truncation_tol &&
                std::abs(j[static_cast<std::size_t>(k + 1)]) < truncation_tol) {
                order = k;
                break;
            }
        }
        kmax *= 2;
    }
    // order is the first negligible index; keep 0..order-1, but at least J_0
    plan.order = std::max(order - 1, 0);
    const cplx phase = std::exp(cplx{0.0, -bounds.center() * tau});
    const cplx minus_i{0.0, -1.0};
    cplx ik{1.0, 0.0};
    plan.coefficients.resize(static_cast<std::size_t>(plan.order) + 1);
    for (int k = 0; k <= plan.order; ++k) {
        const double w = (k == 0 ? 1.0 : 2.0) * j[static_cast<std::size_t>(k)];
        plan.coefficients[static_cast<std::size_t>(k)] = w * ik * phase;
        ik *= minus_i;
    }
    return plan;
}

ChebyshevPropagator::ChebyshevPropagator(const CompiledHamiltonian& h, PropagatorPlan plan)
    : h_(h), plan_(std::move(plan)), t_prev_(h.dim()), t_curr_(h.dim()), h_t_(h.dim()), acc_(h.dim()) {}

void ChebyshevPropagator::step(std::vector<cplx>& psi) {
    if (psi.size() != h_.dim()) {
        throw ShapeError("state dimension does not match the propagator");
    }
    const auto n = static_cast<std::int64_t>(psi.size());
    const double a = plan_.bounds.half_width();
    const double bbar = plan_.bounds.center();
    const auto& c = plan_.coefficients;
    const double norm_in = norm2(psi);

    // T_0 = psi; acc = c_0 T_0
    const cplx c0 = c[0];
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < n; ++s) {
        t_prev_[s] = psi[s];
        acc_[s] = c0 * psi[s];
    }
    if (plan_.order >= 1) {
        // T_1 = (H - bbar) T_0 / a
        h_.apply(t_prev_, h_t_);
        const cplx c1 = c[1];
        const double inv_a = 1.0 / a;
#pragma omp parallel for schedule(static)
        for (std::int64_t s = 0; s < n; ++s) {
            t_curr_[s] = (h_t_[s] - bbar * t_prev_[s]) * inv_a;
            acc_[s] += c1 * t_curr_[s];
        }
        const double two_over_a = 2.0 / a;
        for (int k = 2; k <= plan_.order; ++k) {
            h_.apply(t_curr_, h_t_);
            const cplx ck = c[static_cast<std::size_t>(k)];
            // T_k = 2 (H - bbar) T_{k-1} / a - T_{k-2}, written over T_{k-2}
#pragma omp parallel for schedule(static)
            for (std::int64_t s = 0; s < n; ++s) {
                const cplx next = two_over_a * (h_t_[s] - bbar * t_curr_[s]) - t_prev_[s];
                t_prev_[s] = next;
                acc_[s] += ck * next;
            }
            std::swap(t_prev_, t_curr_);
        }
    }
    // With the spectrum inside the bounds every |T_k psi| <= |psi|; outside
    // it grows like cosh(k acosh|x|).
    if (plan_.order >= 1) {
        const double last = norm2(t_curr_);
        if (!std::isfinite(last) || last > norm_in * (1.0 + 1e-6)) {
            throw SpectralBoundsError("Chebyshev vectors grow (|T_n psi|^2 / |psi|^2 = " +
                                      std::to_string(last / norm_in) +
                                      "); spectral bounds do not enclose the spectrum");
        }
    }
    const double norm_out = norm2(acc_);
    if (!std::isfinite(norm_out) || std::abs(std::sqrt(norm_out / norm_in) - 1.0) > 1e-8) {
        throw SpectralBoundsError("Chebyshev step changed the norm by " +
                                  std::to_string(std::sqrt(norm_out / norm_in) - 1.0) +
                                  "; spectral bounds do not enclose the spectrum");
    }
    std::swap(psi, acc_);
}

StateVector chebyshev_step(const HamiltonianSpec& spec, const PropagatorPlan& plan, const StateVector& psi) {
    if (psi.n_spins != spec.n_total()) {
        throw ShapeError("state register does not match the Hamiltonian register");
    }
    CompiledHamiltonian h(spec);
    ChebyshevPropagator prop(h, plan);
    StateVector out = psi;
    prop.step(out.amps);
    return out;
}

StateVector propagate_exact(const HamiltonianSpec& spec, const StateVector& psi, double t) {
    if (spec.n_total() > 12) {
        throw BudgetError("exact propagation is limited to 12 spins");
    }
    if (psi.n_spins != spec.n_total()) {
        throw ShapeError("state register does not match the Hamiltonian register");
    }
    CompiledHamiltonian h(spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
    if (es.info() != Eigen::Success) {
        throw NumericalError("dense eigensolver failed");
    }
    const auto n = static_cast<Eigen::Index>(psi.dim());
    Eigen::Map<const Eigen::VectorXcd> in(psi.amps.data(), n);
    const Eigen::MatrixXcd v = es.eigenvectors().cast<cplx>();
    Eigen::VectorXcd coeff = v.adjoint() * in;
    for (Eigen::Index k = 0; k < n; ++k) {
        coeff(k) *= std::exp(cplx{0.0, -es.eigenvalues()(k) * t});
    }
    StateVector out(psi.n_spins);
    Eigen::Map<Eigen::VectorXcd>(out.amps.data(), n) = v * coeff;
    return out;
}

} // namespace spinbath
