// test_hilbert.cpp: matrix-free H, expectation values, partial trace

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/hilbert.hpp"
#include "spinbath/model.hpp"

#include <omp.h>

#include <cmath>

using namespace spinbath;

namespace {

// |up,down> has spin 0 up (bit 0 clear) and spin 1 down (bit 1 set)
constexpr std::uint64_t UP_DOWN = 2;
constexpr std::uint64_t DOWN_UP = 1;

std::vector<Term> heisenberg_pair(double j) {
    return {{0, 1, Axis::x, j}, {0, 1, Axis::y, j}, {0, 1, Axis::z, j}};
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

StateVector singlet() {
    StateVector v(2);
    v.amps[UP_DOWN] = 1.0 / std::sqrt(2.0);
    v.amps[DOWN_UP] = -1.0 / std::sqrt(2.0);
    return v;
}

StateVector triplet0() {
    StateVector v(2);
    v.amps[UP_DOWN] = 1.0 / std::sqrt(2.0);
    v.amps[DOWN_UP] = 1.0 / std::sqrt(2.0);
    return v;
}

// Random term list of one family over a random topology.
std::vector<Term> random_terms(int n, FamilyKind fam, RngStream& rng) {
    const TopologyKind kinds[] = {TopologyKind::ring, TopologyKind::spin_glass};
    const auto topo = build_topology(kinds[rng.next_u64() % 2], n);
    return sample_couplings({fam, rng.uniform(-2.0, 2.0)}, topo.edges, rng);
}

} // namespace

TEST_CASE("two-spin Heisenberg matrix elements") {
    const double j = -5.0;
    const auto terms = heisenberg_pair(j);
    const CompiledHamiltonian h(terms, 2);
    const StateVector ud = StateVector::basis_state(2, UP_DOWN);
    StateVector out(2);
    h.apply(ud.amps, out.amps);
    CHECK(std::abs(out.amps[UP_DOWN] - cplx(j / 4, 0)) < 1e-15);
    CHECK(std::abs(out.amps[DOWN_UP] - cplx(-j / 2, 0)) < 1e-15);
    CHECK(std::abs(out.amps[0]) == 0.0);
    CHECK(std::abs(out.amps[3]) == 0.0);
}

TEST_CASE("singlet and triplet energies") {
    const double j = -5.0;
    HamiltonianSpec s;
    s.n_sys = 2;
    s.sys_terms = heisenberg_pair(j);
    for (auto [state, e] : {std::pair{singlet(), 3 * j / 4}, std::pair{triplet0(), -j / 4}}) {
        const StateVector hs = apply_hamiltonian(s, state);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(std::abs(hs.amps[k] - e * state.amps[k]) < 1e-14);
        }
        CHECK(expectation(s, state) == doctest::Approx(e).epsilon(1e-14));
    }
}

TEST_CASE("correlator expectations on two-spin states") {
    // H = -sum c S S with c = -1 gives +<S S>
    const auto dot = heisenberg_pair(-1.0);
    const std::vector<Term> zz{{0, 1, Axis::z, -1.0}};
    CHECK(expectation(dot, singlet()) == doctest::Approx(-0.75).epsilon(1e-14));
    CHECK(expectation(zz, StateVector::basis_state(2, 0)) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(expectation(dot, StateVector::basis_state(2, UP_DOWN)) == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("matrix-free action matches the Kronecker-product oracle") {
    RngStream rng(31337);
    const FamilyKind fams[] = {FamilyKind::XY,    FamilyKind::Heisenberg, FamilyKind::HeisenbergType,
                               FamilyKind::Ising, FamilyKind::IsingType,  FamilyKind::IsingPM};
    int cases = 0;
    for (int seed = 0; seed < 20; ++seed) {
        for (auto fam : fams) {
            const int n = 2 + static_cast<int>(rng.next_u64() % 7); // 2..8
            auto terms = random_terms(n, fam, rng);
            // mix in a second family so anisotropic channels are exercised
            auto extra = random_terms(n, fams[rng.next_u64() % 6], rng);
            terms.insert(terms.end(), extra.begin(), extra.end());
            const CompiledHamiltonian h(terms, n);
            const auto dense = oracle::dense_hamiltonian(terms, n);
            const StateVector psi = random_vector(n, rng);
            StateVector out(n);
            h.apply(psi.amps, out.amps);
            const Eigen::VectorXcd ref = dense * oracle::to_eigen(psi.amps);
            CHECK((oracle::to_eigen(out.amps) - ref).cwiseAbs().maxCoeff() < 1e-12);
            // both sides sum the same terms in different orders
            CHECK((h.dense().cast<cplx>() - dense).cwiseAbs().maxCoeff() < 1e-13);
            ++cases;
        }
    }
    CHECK(cases >= 100);
}

TEST_CASE("H is Hermitian on random pairs") {
    RngStream rng(7);
    for (int k = 0; k < 20; ++k) {
        const int n = 6;
        const auto terms = random_terms(n, FamilyKind::HeisenbergType, rng);
        const CompiledHamiltonian h(terms, n);
        const StateVector phi = random_vector(n, rng);
        const StateVector psi = random_vector(n, rng);
        std::vector<cplx> hphi(phi.dim()), hpsi(psi.dim());
        h.apply(phi.amps, hphi);
        h.apply(psi.amps, hpsi);
        CHECK(std::abs(inner(phi.amps, hpsi) - std::conj(inner(psi.amps, hphi))) < 1e-12);
    }
}

TEST_CASE("result does not depend on the thread count") {
    RngStream rng(99);
    const int n = 14;
    const auto terms = random_terms(n, FamilyKind::HeisenbergType, rng);
    const CompiledHamiltonian h(terms, n);
    const StateVector psi = random_vector(n, rng);
    std::vector<cplx> a(psi.dim()), b(psi.dim());
    omp_set_num_threads(1);
    h.apply(psi.amps, a);
    const cplx ia = inner(psi.amps, a);
    const auto ra = partial_trace_env(psi, 3);
    omp_set_num_threads(4);
    h.apply(psi.amps, b);
    const cplx ib = inner(psi.amps, b);
    const auto rb = partial_trace_env(psi, 3);
    omp_set_num_threads(1);
    CHECK(a == b);
    CHECK(ia == ib);
    CHECK(ra.m == rb.m);
}

TEST_CASE("partial trace of a product state is pure") {
    RngStream rng(3);
    const StateVector sys = random_vector(2, rng);
    const StateVector env = random_vector(3, rng);
    StateVector psi(5);
    for (std::size_t p = 0; p < env.dim(); ++p) {
        for (std::size_t i = 0; i < sys.dim(); ++i) {
            psi.amps[i + 4 * p] = sys.amps[i] * env.amps[p];
        }
    }
    const auto rho = partial_trace_env(psi, 2);
    const Eigen::VectorXcd s = oracle::to_eigen(sys.amps);
    CHECK((rho.m - s * s.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((rho.m * rho.m).trace().real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Bell pair across the boundary") {
    StateVector psi(2);
    psi.amps[0] = 1.0 / std::sqrt(2.0); // up up
    psi.amps[3] = 1.0 / std::sqrt(2.0); // down down
    const auto rho = partial_trace_env(psi, 1);
    CHECK(std::abs(rho.m(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(rho.m(1, 1) - 0.5) < 1e-15);
    CHECK(std::abs(rho.m(0, 1)) < 1e-15);
}

TEST_CASE("partial trace matches index summation and preserves expectations") {
    RngStream rng(17);
    for (int rep = 0; rep < 10; ++rep) {
        const StateVector psi = random_vector(6, rng);
        const auto rho = partial_trace_env(psi, 3);
        const auto ref = oracle::partial_trace(psi.amps, 3);
        CHECK((rho.m - ref).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(rho.basis == BasisTag::updown);
        CHECK((rho.m - rho.m.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.m);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);

        // random Hermitian system observable A, compared with <psi|A x 1|psi>
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(8, 8);
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) {
                const double re = rng.normal();
                a(i, j) = {re, rng.normal()};
            }
        }
        a = (a + a.adjoint()).eval();
        const Eigen::MatrixXcd full = oracle::kron(Eigen::MatrixXcd::Identity(8, 8), a);
        const Eigen::VectorXcd v = oracle::to_eigen(psi.amps);
        const cplx direct = v.dot(full * v);
        const cplx traced = (rho.m * a).trace();
        CHECK(std::abs(direct - traced) < 1e-12);
    }
}

TEST_CASE("shape errors") {
    const CompiledHamiltonian h(std::vector<Term>{{0, 1, Axis::z, 1.0}}, 3);
    StateVector small(2), out(3);
    CHECK_THROWS_AS(h.apply(small.amps, out.amps), ShapeError);
    CHECK_THROWS_AS(partial_trace_env(small, 3), ShapeError);
    CHECK_THROWS_AS(CompiledHamiltonian(std::vector<Term>{{0, 3, Axis::z, 1.0}}, 3), ShapeError);
    StateVector zero(2);
    CHECK_THROWS_AS(zero.normalize(), NumericalError);
}
