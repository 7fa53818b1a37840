// test_propagate.cpp: spectral bounds, Chebyshev steps, dense oracle

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/propagate.hpp"

#include <cmath>
#include <numbers>

using namespace spinbath;

namespace {

constexpr std::uint64_t UP_DOWN = 2;
constexpr std::uint64_t DOWN_UP = 1;

HamiltonianSpec two_spin(double j) {
    HamiltonianSpec s;
    s.n_sys = 2;
    s.sys_terms = {{0, 1, Axis::x, j}, {0, 1, Axis::y, j}, {0, 1, Axis::z, j}};
    return s;
}

HamiltonianSpec random_spec(int n_sys, int n_env, FamilyKind fam, std::uint64_t seed) {
    RngStream rng(seed);
    const double scale = rng.uniform(0.2, 2.0);
    return assemble({build_topology(TopologyKind::ring, n_sys), {fam, -scale}},
                    {build_topology(TopologyKind::spin_glass, n_env), {fam, 0.7 * scale}}, {fam, 0.4 * scale},
                    seed);
}

StateVector random_vector(int n, RngStream& rng) {
    StateVector v(n);
    for (auto& a : v.amps) {
        const double re = rng.normal();
        a = {re, rng.normal()};
    }
    v.normalize();
    return v;
}

double distance(const StateVector& a, const StateVector& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) {
        s += std::norm(a.amps[k] - b.amps[k]);
    }
    return std::sqrt(s);
}

const FamilyKind all_families[] = {FamilyKind::XY,    FamilyKind::Heisenberg, FamilyKind::HeisenbergType,
                                   FamilyKind::Ising, FamilyKind::IsingType,  FamilyKind::IsingPM};

} // namespace

TEST_CASE("bounds enclose the two-spin spectrum") {
    const auto b = spectral_bounds(two_spin(-5.0));
    CHECK(b.e_min <= -3.75);
    CHECK(b.e_max >= 1.25);
    CHECK(b.margin == 1.05);
    // per-bond bounds are exact for one bond, so only the margin widens them
    CHECK(b.e_max - b.e_min == doctest::Approx(5.0 * 1.05).epsilon(1e-12));
}

TEST_CASE("empty Hamiltonian gets a guard interval") {
    HamiltonianSpec s;
    s.n_sys = 3;
    const auto b = spectral_bounds(s);
    CHECK(b.e_min < 0.0);
    CHECK(b.e_max > 0.0);
    CHECK(b.e_max - b.e_min < 1e-10);
    // the expansion still reduces to the identity
    RngStream rng(1);
    const StateVector psi = random_vector(3, rng);
    const StateVector out = chebyshev_step(s, make_plan(b, 0.7), psi);
    CHECK(distance(psi, out) < 1e-14);
}

TEST_CASE("bounds enclose dense spectra of random instances") {
    for (auto fam : all_families) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto spec = random_spec(2 + static_cast<int>(seed % 3), 5, fam, seed);
            // the dense matrix is checked against the Kronecker oracle in test_hilbert
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(CompiledHamiltonian(spec).dense(), Eigen::EigenvaluesOnly);
            const double lo = es.eigenvalues().minCoeff();
            const double hi = es.eigenvalues().maxCoeff();
            for (auto mode : {BoundsMode::gershgorin, BoundsMode::lanczos}) {
                const auto b = spectral_bounds(spec, mode);
                CHECK(b.e_min <= lo);
                CHECK(b.e_max >= hi);
            }
            const auto g = spectral_bounds(spec, BoundsMode::gershgorin);
            const auto l = spectral_bounds(spec, BoundsMode::lanczos);
            CHECK(l.e_min >= g.e_min - 1e-12);
            CHECK(l.e_max <= g.e_max + 1e-12);
        }
    }
}

TEST_CASE("two-spin precession of S^z_1") {
    const double j = -5.0;
    const auto spec = two_spin(j);
    const double tau = std::numbers::pi / 10;
    const auto plan = make_plan(spectral_bounds(spec), tau);
    const CompiledHamiltonian h(spec);
    ChebyshevPropagator prop(h, plan);
    StateVector psi = StateVector::basis_state(2, UP_DOWN);
    for (int k = 0; k <= 200; ++k) {
        // <S^z of spin 0> = (|c_up,*|^2 - |c_down,*|^2) / 2
        const double sz = 0.5 * (std::norm(psi.amps[0]) + std::norm(psi.amps[2]) - std::norm(psi.amps[1]) -
                                 std::norm(psi.amps[3]));
        CHECK(std::abs(sz - 0.5 * std::cos(j * k * tau)) < 1e-10);
        prop.step(psi.amps);
    }
}

TEST_CASE("zero step is the identity") {
    const auto spec = random_spec(2, 4, FamilyKind::HeisenbergType, 3);
    RngStream rng(5);
    const StateVector psi = random_vector(spec.n_total(), rng);
    const StateVector out = chebyshev_step(spec, make_plan(spectral_bounds(spec), 0.0), psi);
    CHECK(distance(psi, out) < 1e-14);
}

TEST_CASE("Chebyshev matches dense propagation for every family") {
    for (auto fam : all_families) {
        for (std::uint64_t seed = 10; seed < 13; ++seed) {
            const auto spec = random_spec(3, 5, fam, seed);
            RngStream rng(seed);
            const StateVector psi0 = random_vector(spec.n_total(), rng);
            const CompiledHamiltonian h(spec);
            ChebyshevPropagator prop(h, make_plan(spectral_bounds(h), 0.5));
            StateVector psi = psi0;
            for (int k = 0; k < 20; ++k) {
                prop.step(psi.amps);
            }
            const StateVector exact = propagate_exact(spec, psi0, 10.0);
            CHECK(distance(psi, exact) < 1e-10);
        }
    }
}

TEST_CASE("norm and energy are conserved") {
    const auto spec = random_spec(2, 6, FamilyKind::HeisenbergType, 21);
    RngStream rng(8);
    StateVector psi = random_vector(spec.n_total(), rng);
    const CompiledHamiltonian h(spec);
    ChebyshevPropagator prop(h, make_plan(spectral_bounds(h), std::numbers::pi / 10));
    const double e0 = expectation(h, psi);
    double worst_step = 0.0;
    double worst_energy = 0.0;
    double prev = 1.0;
    for (int k = 1; k <= 10000; ++k) {
        prop.step(psi.amps);
        const double nrm = std::sqrt(norm2(psi.amps));
        worst_step = std::max(worst_step, std::abs(nrm - prev));
        prev = nrm;
        if (k % 500 == 0) {
            worst_energy = std::max(worst_energy, std::abs(expectation(h, psi) - e0) / std::abs(e0));
        }
    }
    CHECK(worst_step < 1e-10);
    CHECK(std::abs(prev - 1.0) < 1e-8);
    CHECK(worst_energy < 1e-10);
}

TEST_CASE("two steps of tau equal one step of 2 tau") {
    const auto spec = random_spec(2, 6, FamilyKind::Heisenberg, 4);
    RngStream rng(4);
    const StateVector psi = random_vector(spec.n_total(), rng);
    const auto b = spectral_bounds(spec);
    const double tol = 1e-14;
    const StateVector once = chebyshev_step(spec, make_plan(b, 0.6, tol), psi);
    const StateVector twice = chebyshev_step(spec, make_plan(b, 0.3, tol), chebyshev_step(spec, make_plan(b, 0.3, tol), psi));
    // truncation error of each expansion plus accumulated round-off of the recurrences
    CHECK(distance(once, twice) < 2 * tol + 1e-13);
}

TEST_CASE("dense propagator") {
    const double j = -5.0;
    const auto spec = two_spin(j);
    StateVector s(2);
    s.amps[UP_DOWN] = 1.0 / std::sqrt(2.0);
    s.amps[DOWN_UP] = -1.0 / std::sqrt(2.0);
    CHECK(distance(propagate_exact(spec, s, 0.0), s) < 1e-14);
    for (double t : {0.3, 2.0, 17.0}) {
        const StateVector out = propagate_exact(spec, s, t);
        const cplx phase = std::exp(cplx{0.0, -0.75 * j * t});
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(std::abs(out.amps[k] - phase * s.amps[k]) < 1e-13);
        }
        CHECK(std::abs(std::abs(inner(s.amps, out.amps)) - 1.0) < 1e-13);
    }
    HamiltonianSpec big;
    big.n_sys = 13;
    CHECK_THROWS_AS(propagate_exact(big, StateVector(13), 1.0), BudgetError);
}

TEST_CASE("too-narrow bounds are detected") {
    const auto spec = random_spec(2, 6, FamilyKind::HeisenbergType, 5);
    RngStream rng(6);
    StateVector psi = random_vector(spec.n_total(), rng);
    auto b = spectral_bounds(spec);
    const double c = b.center();
    const double hw = 0.3 * b.half_width();
    b.e_min = c - hw;
    b.e_max = c + hw;
    const CompiledHamiltonian h(spec);
    ChebyshevPropagator prop(h, make_plan(b, std::numbers::pi / 10));
    CHECK_THROWS_AS(prop.step(psi.amps), SpectralBoundsError);
}

TEST_CASE("plan order tracks the expansion argument") {
    const SpectralBounds b{-10.0, 10.0, 1.05};
    const auto p = make_plan(b, 3.0);
    CHECK(p.order > 30);
    CHECK(p.order < 30 + 40);
    CHECK(p.coefficients.size() == static_cast<std::size_t>(p.order) + 1);
    CHECK_THROWS_AS(make_plan(SpectralBounds{1.0, 1.0, 1.05}, 1.0), SpectralBoundsError);
}
