// hilbert.hpp: state vectors over the full tensor-product register,
// matrix-free application of H, expectation values and the partial trace.
//
// Basis convention (global): spin k <-> bit k of the basis index; bit 0 is
// spin-up (S^z = +1/2), bit 1 is spin-down. System spins occupy the low bits,
// so the amplitude c(i, p) of system state i and environment state p lives at
// index i + 2^n_sys * p.

#pragma once

#include "spinbath/model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace spinbath {

using cplx = std::complex<double>;

struct StateVector {
    int n_spins = 0;
    std::vector<cplx> amps;

    StateVector() = default;
    // All-zero vector on n spins.
    explicit StateVector(int n);
    static StateVector basis_state(int n, std::uint64_t index);

    std::size_t dim() const noexcept { return amps.size(); }
    double norm() const;
    void normalize();
};

// <a|b>, summed in fixed blocks so the result does not depend on thread count.
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm2(std::span<const cplx> a);

enum class BasisTag { updown, energy };

struct ReducedDensityMatrix {
    Eigen::MatrixXcd m;
    BasisTag basis = BasisTag::updown;

    int dim() const noexcept { return static_cast<int>(m.rows()); }
    double trace() const { return m.trace().real(); }
};

// Bond-grouped form of a term list used by the matrix-free kernel. Terms on
// the same (i, j) pair are merged in first-appearance order. For each bond
//   diagonal        -cz/4 * (+1 aligned, -1 anti-aligned)
//   |01> <-> |10>   -(cx + cy)/4   (flip-flop)
//   |00> <-> |11>   -(cx - cy)/4   (double flip, nonzero only if cx != cy)
class CompiledHamiltonian {
public:
    struct Bond {
        int lo = 0;
        int hi = 0;
        double cx = 0.0;
        double cy = 0.0;
        double cz = 0.0;
        double flip_flop = 0.0;
        double double_flip = 0.0;
    };

    explicit CompiledHamiltonian(const HamiltonianSpec& spec);
    CompiledHamiltonian(std::span<const Term> terms, int n_spins);

    int n_spins() const noexcept { return n_spins_; }
    std::size_t dim() const noexcept { return diag_.size(); }
    const std::vector<Bond>& bonds() const noexcept { return bonds_; }
    const std::vector<double>& diagonal() const noexcept { return diag_; }

    // out = H in. in and out must not alias.
    void apply(std::span<const cplx> in, std::span<cplx> out) const;

    // Dense real-symmetric matrix; at most 12 spins.
    Eigen::MatrixXd dense() const;

private:
    int n_spins_ = 0;
    std::vector<Bond> bonds_;
    std::vector<double> diag_;
};

StateVector apply_hamiltonian(const HamiltonianSpec& spec, const StateVector& psi);

// <psi|H|psi>; throws NumericalError if the imaginary part is not round-off.
double expectation(const CompiledHamiltonian& h, const StateVector& psi);
double expectation(const HamiltonianSpec& spec, const StateVector& psi);
double expectation(std::span<const Term> terms, const StateVector& psi);

// rho_ij = sum_p c(i,p) c*(j,p) = <i|Tr_E |psi><psi| |j>.
ReducedDensityMatrix partial_trace_env(const StateVector& psi, int n_sys);

} // namespace spinbath
