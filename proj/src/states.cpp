// states.cpp: initial state constructors

#include "spinbath/states.hpp"

#include "spinbath/errors.hpp"

#include <array>
#include <cmath>
#include <string>

namespace spinbath {

namespace {

cplx gaussian(RngStream& rng) {
    const double re = rng.normal();
    return {re, rng.normal()};
}

StateVector random_state(int n, RngStream& rng) {
    StateVector v(n);
    for (auto& a : v.amps) {
        a = gaussian(rng);
    }
    v.normalize();
    return v;
}

StateVector product_of(const std::vector<std::array<cplx, 2>>& spins) {
    const int n = static_cast<int>(spins.size());
    StateVector v(n);
    for (std::size_t s = 0; s < v.dim(); ++s) {
        cplx a{1.0, 0.0};
        for (int k = 0; k < n; ++k) {
            a *= spins[static_cast<std::size_t>(k)][(s >> k) & 1];
        }
        v.amps[s] = a;
    }
    return v;
}

std::uint64_t alternating_index(int n) {
    std::uint64_t idx = 0;
    for (int k = 1; k < n; k += 2) {
        idx |= std::uint64_t{1} << k;
    }
    return idx;
}

struct LowLevels {
    std::vector<cplx> ground;
    std::vector<cplx> excited; // empty unless requested
};

// Ground vector (random combination over the degenerate ground level) and,
// optionally, a random combination over the next level up.
LowLevels low_levels(const HamiltonianSpec& part, int n, RngStream& rng, const StateOptions& opts,
                     bool want_excited) {
    if (part.n_total() != n) {
        throw ShapeError("Hamiltonian for the ground state acts on " + std::to_string(part.n_total()) +
                         " spins, register has " + std::to_string(n));
    }
    CompiledHamiltonian h(part);
    LowLevels out;
    if (n <= opts.dense_limit) {
        const auto eig = jacobi_eigen(h.dense());
        const Eigen::Index d = eig.values.size();
        const double tol = opts.degeneracy_tol * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
        auto combine = [&](Eigen::Index first, Eigen::Index last) {
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
            for (Eigen::Index k = first; k < last; ++k) {
                v += gaussian(rng) * eig.vectors.col(k).cast<cplx>();
            }
            v.normalize();
            return std::vector<cplx>(v.data(), v.data() + d);
        };
        Eigen::Index g_end = 1;
        while (g_end < d && eig.values(g_end) - eig.values(0) < tol) {
            ++g_end;
        }
        out.ground = combine(0, g_end);
        if (want_excited) {
            if (g_end == d) {
                throw NumericalError("Hamiltonian has a single level; no excited state exists");
            }
            Eigen::Index e_end = g_end + 1;
            while (e_end < d && eig.values(e_end) - eig.values(g_end) < tol) {
                ++e_end;
            }
            out.excited = combine(g_end, e_end);
        }
        return out;
    }

    const StateVector start = random_state(n, rng);
    const Eigenpair g = lanczos_lowest(h, start.amps, {}, opts.lanczos);
    out.ground = g.vector;
    if (!want_excited) {
        return out;
    }
    // Deflate the whole ground level, then the first eigenvalue above it.
    const double tol = opts.degeneracy_tol * std::max(1.0, std::abs(g.value));
    std::vector<std::vector<cplx>> found{g.vector};
    while (true) {
        const StateVector s = random_state(n, rng);
        Eigenpair e = lanczos_lowest(h, s.amps, found, opts.lanczos);
        if (e.value - g.value >= tol) {
            out.excited = std::move(e.vector);
            return out;
        }
        found.push_back(std::move(e.vector));
        if (found.size() >= h.dim()) {
            throw NumericalError("Hamiltonian has a single level; no excited state exists");
        }
    }
}

} // namespace

std::string_view to_string(StateKind k) {
    switch (k) {
    case StateKind::GROUND: return "GROUND";
    case StateKind::NEAR_GROUND: return "NEAR_GROUND";
    case StateKind::UU: return "UU";
    case StateKind::UD: return "UD";
    case StateKind::NEAR_UD: return "NEAR_UD";
    case StateKind::RR: return "RR";
    case StateKind::RANDOM: return "RANDOM";
    }
    return "?";
}

StateKind parse_state_kind(std::string_view s) {
    for (auto k : {StateKind::GROUND, StateKind::NEAR_GROUND, StateKind::UU, StateKind::UD,
                   StateKind::NEAR_UD, StateKind::RR, StateKind::RANDOM}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw ConfigError("unknown initial state '" + std::string(s) + "'");
}

StateVector make_state(StateKind kind, int n_spins, const HamiltonianSpec& part, RngStream& rng,
                       const StateOptions& opts) {
    if (n_spins < 0) {
        throw ShapeError("negative register size");
    }
    switch (kind) {
    case StateKind::UU:
        return StateVector::basis_state(n_spins, 0);
    case StateKind::UD:
        return StateVector::basis_state(n_spins, alternating_index(n_spins));
    case StateKind::NEAR_UD: {
        const double eps = opts.near_ud_epsilon;
        if (!(eps > 0.0 && eps <= 0.5)) {
            throw ConfigError("NEAR_UD epsilon must lie in (0, 0.5]");
        }
        if (n_spins < 1) {
            throw ShapeError("NEAR_UD needs at least one spin");
        }
        const double theta = std::acos(1.0 - 4.0 * eps);
        std::vector<std::array<cplx, 2>> spins(static_cast<std::size_t>(n_spins));
        for (int k = 0; k < n_spins; ++k) {
            spins[static_cast<std::size_t>(k)] = (k % 2 == 0) ? std::array<cplx, 2>{1.0, 0.0}
                                                              : std::array<cplx, 2>{0.0, 1.0};
        }
        spins[0] = {std::cos(theta / 2), std::sin(theta / 2)};
        return product_of(spins);
    }
    case StateKind::RR: {
        std::vector<std::array<cplx, 2>> spins(static_cast<std::size_t>(n_spins));
        for (auto& sp : spins) {
            const cplx a = gaussian(rng);
            const cplx b = gaussian(rng);
            const double nrm = std::sqrt(std::norm(a) + std::norm(b));
            sp = {a / nrm, b / nrm};
        }
        return product_of(spins);
    }
    case StateKind::RANDOM:
        return random_state(n_spins, rng);
    case StateKind::GROUND: {
        StateVector v(n_spins);
        v.amps = low_levels(part, n_spins, rng, opts, false).ground;
        v.normalize();
        return v;
    }
    case StateKind::NEAR_GROUND: {
        const double eps = opts.near_ground_epsilon;
        if (!(eps > 0.0 && eps < 1.0)) {
            throw ConfigError("NEAR_GROUND epsilon must lie in (0, 1)");
        }
        const auto lv = low_levels(part, n_spins, rng, opts, true);
        StateVector v(n_spins);
        const double a = std::sqrt(1.0 - eps);
        const double b = std::sqrt(eps);
        for (std::size_t s = 0; s < v.dim(); ++s) {
            v.amps[s] = a * lv.ground[s] + b * lv.excited[s];
        }
        v.normalize();
        return v;
    }
    }
    throw ConfigError("unhandled state kind");
}

StateVector product_state(const StateVector& sys, const StateVector& env) {
    StateVector out(sys.n_spins + env.n_spins);
    const std::size_t d = sys.dim();
    for (std::size_t p = 0; p < env.dim(); ++p) {
        for (std::size_t i = 0; i < d; ++i) {
            out.amps[i + d * p] = sys.amps[i] * env.amps[p];
        }
    }
    return out;
}

} // namespace spinbath
