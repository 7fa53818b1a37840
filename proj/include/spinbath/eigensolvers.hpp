// eigensolvers.hpp: dense cyclic Jacobi for small real-symmetric matrices and
// a matrix-free Lanczos solver for the low end of large spectra.

#pragma once

#include "spinbath/hilbert.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace spinbath {

struct SymmetricEigen {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // columns, largest-magnitude component positive
    int sweeps = 0;
};

// Cyclic Jacobi in fixed row order; stops when the off-diagonal Frobenius norm
// falls below off_tol times the Frobenius norm of the input.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, double off_tol = 1e-12);

struct LanczosOptions {
    int max_krylov = 200;
    double residual_tol = 1e-10; // on ||H x - E x||, scaled by max(1, |E|)
    int max_restarts = 60;
};

struct Eigenpair {
    double value = 0.0;
    std::vector<cplx> vector;
    double residual = 0.0;
};

// Lowest eigenpair of h on the orthogonal complement of the (orthonormal)
// vectors in deflate, by explicitly restarted Lanczos with full
// reorthogonalization. For a degenerate lowest level the result is the
// normalized projection of the start vector onto that eigenspace.
Eigenpair lanczos_lowest(const CompiledHamiltonian& h, std::vector<cplx> start,
                         std::span<const std::vector<cplx>> deflate = {},
                         const LanczosOptions& opts = {});

// Enclosing estimate of the extreme eigenvalues from a short Lanczos run:
// extremal Ritz values pushed outward by their residual norms. Uses a fixed
// internal start vector, so the result depends on h only.
struct ExtremalEstimate {
    double lo = 0.0;
    double hi = 0.0;
};
ExtremalEstimate lanczos_extremes(const CompiledHamiltonian& h, int steps = 60);

} // namespace spinbath
