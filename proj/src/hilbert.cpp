// hilbert.cpp: matrix-free kernels over the spin register

#include "spinbath/hilbert.hpp"

#include "spinbath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace spinbath {

namespace {

constexpr std::int64_t kReduceBlocks = 64;

std::int64_t as_i64(std::size_t n) { return static_cast<std::int64_t>(n); }

void check_register(int n) {
    if (n < 0 || n > 40) {
        throw BudgetError("register of " + std::to_string(n) + " spins is out of range");
    }
}

} // namespace

StateVector::StateVector(int n) : n_spins(n) {
    check_register(n);
    amps.assign(std::size_t{1} << n, cplx{0.0, 0.0});
}

StateVector StateVector::basis_state(int n, std::uint64_t index) {
    StateVector v(n);
    if (index >= v.dim()) {
        throw ShapeError("basis index out of range");
    }
    v.amps[index] = 1.0;
    return v;
}

double StateVector::norm() const { return std::sqrt(norm2(amps)); }

void StateVector::normalize() {
    const double nrm = norm();
    if (!(nrm > 0.0)) {
        throw NumericalError("cannot normalize a zero vector");
    }
    const double inv = 1.0 / nrm;
    for (auto& a : amps) {
        a *= inv;
    }
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) {
        throw ShapeError("inner product of vectors with different dimensions");
    }
    const std::int64_t n = as_i64(a.size());
    const std::int64_t blocks = std::min(kReduceBlocks, std::max<std::int64_t>(n, 1));
    std::vector<cplx> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
    for (std::int64_t blk = 0; blk < blocks; ++blk) {
        const std::int64_t lo = n * blk / blocks;
        const std::int64_t hi = n * (blk + 1) / blocks;
        cplx acc{0.0, 0.0};
        for (std::int64_t k = lo; k < hi; ++k) {
            acc += std::conj(a[k]) * b[k];
        }
        partial[static_cast<std::size_t>(blk)] = acc;
    }
    cplx total{0.0, 0.0};
    for (const auto& p : partial) {
        total += p;
    }
    return total;
}

double norm2(std::span<const cplx> a) {
    const std::int64_t n = as_i64(a.size());
    const std::int64_t blocks = std::min(kReduceBlocks, std::max<std::int64_t>(n, 1));
    std::vector<double> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
    for (std::int64_t blk = 0; blk < blocks; ++blk) {
        const std::int64_t lo = n * blk / blocks;
        const std::int64_t hi = n * (blk + 1) / blocks;
        double acc = 0.0;
        for (std::int64_t k = lo; k < hi; ++k) {
            acc += std::norm(a[k]);
        }
        partial[static_cast<std::size_t>(blk)] = acc;
    }
    double total = 0.0;
    for (double p : partial) {
        total += p;
    }
    return total;
}

CompiledHamiltonian::CompiledHamiltonian(const HamiltonianSpec& spec)
    : CompiledHamiltonian(spec.all_terms(), spec.n_total()) {}

CompiledHamiltonian::CompiledHamiltonian(std::span<const Term> terms, int n_spins)
    : n_spins_(n_spins) {
    check_register(n_spins);
    std::map<std::pair<int, int>, std::size_t> slot;
    for (const auto& t : terms) {
        if (t.i < 0 || t.j < 0 || t.i >= n_spins || t.j >= n_spins || t.i == t.j) {
            throw ShapeError("term index outside the register");
        }
        const auto key = std::minmax(t.i, t.j);
        auto it = slot.find(key);
        if (it == slot.end()) {
            it = slot.emplace(key, bonds_.size()).first;
            bonds_.push_back(Bond{key.first, key.second});
        }
        auto& b = bonds_[it->second];
        switch (t.axis) {
        case Axis::x: b.cx += t.coupling; break;
        case Axis::y: b.cy += t.coupling; break;
        case Axis::z: b.cz += t.coupling; break;
        }
    }
    for (auto& b : bonds_) {
        b.flip_flop = -(b.cx + b.cy) / 4.0;
        b.double_flip = -(b.cx - b.cy) / 4.0;
    }

    const std::int64_t dim = std::int64_t{1} << n_spins;
    diag_.assign(static_cast<std::size_t>(dim), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < dim; ++s) {
        double d = 0.0;
        for (const auto& b : bonds_) {
            const bool aligned = (((s >> b.lo) ^ (s >> b.hi)) & 1) == 0;
            d += aligned ? -b.cz / 4.0 : b.cz / 4.0;
        }
        diag_[static_cast<std::size_t>(s)] = d;
    }
}

void CompiledHamiltonian::apply(std::span<const cplx> in, std::span<cplx> out) const {
    if (in.size() != dim() || out.size() != dim()) {
        throw ShapeError("state dimension does not match the Hamiltonian register");
    }
    const std::int64_t dim = as_i64(this->dim());
    const std::int64_t quarter = dim / 4;
    const double* diag = diag_.data();
    const cplx* x = in.data();
    cplx* y = out.data();
#pragma omp parallel
    {
#pragma omp for schedule(static)
        for (std::int64_t s = 0; s < dim; ++s) {
            y[s] = diag[s] * x[s];
        }
        // Every output element gets at most one update per bond, so the
        // accumulation order is the bond order regardless of thread count.
        for (const auto& b : bonds_) {
            const double ff = b.flip_flop;
            const double df = b.double_flip;
            if (ff == 0.0 && df == 0.0) {
                continue;
            }
            const std::uint64_t lo_bit = std::uint64_t{1} << b.lo;
            const std::uint64_t hi_bit = std::uint64_t{1} << b.hi;
#pragma omp for schedule(static)
            for (std::int64_t q = 0; q < quarter; ++q) {
                auto s = static_cast<std::uint64_t>(q);
                s = ((s >> b.lo) << (b.lo + 1)) | (s & (lo_bit - 1));
                s = ((s >> b.hi) << (b.hi + 1)) | (s & (hi_bit - 1));
                const std::uint64_t s01 = s | lo_bit;
                const std::uint64_t s10 = s | hi_bit;
                y[s01] += ff * x[s10];
                y[s10] += ff * x[s01];
                if (df != 0.0) {
                    const std::uint64_t s11 = s | lo_bit | hi_bit;
                    y[s] += df * x[s11];
                    y[s11] += df * x[s];
                }
            }
        }
    }
}

Eigen::MatrixXd CompiledHamiltonian::dense() const {
    if (n_spins_ > 12) {
        throw BudgetError("dense Hamiltonian limited to 12 spins");
    }
    const auto n = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index s = 0; s < n; ++s) {
        h(s, s) = diag_[static_cast<std::size_t>(s)];
        for (const auto& b : bonds_) {
            const auto mask = static_cast<Eigen::Index>((std::uint64_t{1} << b.lo) | (std::uint64_t{1} << b.hi));
            const bool aligned = (((s >> b.lo) ^ (s >> b.hi)) & 1) == 0;
            h(s ^ mask, s) += aligned ? b.double_flip : b.flip_flop;
        }
    }
    return h;
}

StateVector apply_hamiltonian(const HamiltonianSpec& spec, const StateVector& psi) {
    if (psi.n_spins != spec.n_total()) {
        throw ShapeError("state has " + std::to_string(psi.n_spins) + " spins, Hamiltonian " +
                         std::to_string(spec.n_total()));
    }
    CompiledHamiltonian h(spec);
    StateVector out(psi.n_spins);
    h.apply(psi.amps, out.amps);
    return out;
}

double expectation(const CompiledHamiltonian& h, const StateVector& psi) {
    if (psi.n_spins != h.n_spins()) {
        throw ShapeError("state register does not match the operator register");
    }
    std::vector<cplx> hpsi(psi.dim());
    h.apply(psi.amps, hpsi);
    const cplx e = inner(psi.amps, hpsi);
    if (std::abs(e.imag()) > 1e-10 * std::max(1.0, std::abs(e.real()))) {
        throw NumericalError("expectation of a Hermitian operator has imaginary part " +
                             std::to_string(e.imag()));
    }
    return e.real();
}

double expectation(const HamiltonianSpec& spec, const StateVector& psi) {
    if (psi.n_spins != spec.n_total()) {
        throw ShapeError("state register does not match the Hamiltonian register");
    }
    return expectation(CompiledHamiltonian(spec), psi);
}

double expectation(std::span<const Term> terms, const StateVector& psi) {
    return expectation(CompiledHamiltonian(terms, psi.n_spins), psi);
}

ReducedDensityMatrix partial_trace_env(const StateVector& psi, int n_sys) {
    if (n_sys < 0 || n_sys > psi.n_spins) {
        throw ShapeError("system size " + std::to_string(n_sys) + " outside the register of " +
                         std::to_string(psi.n_spins) + " spins");
    }
    const Eigen::Index d = Eigen::Index{1} << n_sys;
    const Eigen::Index env_dim = static_cast<Eigen::Index>(psi.dim()) / d;
    // Column p of c holds the system amplitudes c(., p).
    Eigen::Map<const Eigen::MatrixXcd> c(psi.amps.data(), d, env_dim);

    // Fixed block count (a function of the shape only) keeps the summation
    // order independent of the number of threads.
    const Eigen::Index max_blocks = std::max<Eigen::Index>(1, (Eigen::Index{1} << 22) / (d * d));
    const Eigen::Index blocks = std::min({Eigen::Index{kReduceBlocks}, env_dim, max_blocks});
    std::vector<Eigen::MatrixXcd> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
    for (Eigen::Index blk = 0; blk < blocks; ++blk) {
        const Eigen::Index lo = env_dim * blk / blocks;
        const Eigen::Index hi = env_dim * (blk + 1) / blocks;
        const auto cols = c.middleCols(lo, hi - lo);
        partial[static_cast<std::size_t>(blk)] = cols * cols.adjoint();
    }
    ReducedDensityMatrix rho;
    rho.m = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& p : partial) {
        rho.m += p;
    }
    // exact Hermitian symmetry
    rho.m = (0.5 * (rho.m + rho.m.adjoint())).eval();
    return rho;
}

} // namespace spinbath
