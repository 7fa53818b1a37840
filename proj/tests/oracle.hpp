// oracle.hpp: brute-force reference constructions for the tests. Nothing here
// calls the library's kernels: operators are explicit Kronecker products of
// 2x2 spin matrices and traces are plain index sums.

#pragma once

#include "spinbath/model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat spin_matrix(spinbath::Axis a) {
    Mat s(2, 2);
    const cplx i{0.0, 1.0};
    switch (a) {
    case spinbath::Axis::x: s << 0.0, 0.5, 0.5, 0.0; break;
    case spinbath::Axis::y: s << 0.0, -0.5 * i, 0.5 * i, 0.0; break;
    case spinbath::Axis::z: s << 0.5, 0.0, 0.0, -0.5; break;
    }
    return s;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// Spin k corresponds to bit k, so the highest spin is the leftmost factor.
inline Mat site_operator(const Mat& op, int k, int n) {
    Mat out = Mat::Identity(1, 1);
    for (int site = n - 1; site >= 0; --site) {
        out = kron(out, site == k ? op : Mat::Identity(2, 2));
    }
    return out;
}

inline Mat pair_operator(spinbath::Axis a, int i, int j, int n) {
    return site_operator(spin_matrix(a), i, n) * site_operator(spin_matrix(a), j, n);
}

inline Mat dense_hamiltonian(const std::vector<spinbath::Term>& terms, int n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    Mat h = Mat::Zero(d, d);
    for (const auto& t : terms) {
        h -= t.coupling * pair_operator(t.axis, t.i, t.j, n);
    }
    return h;
}

inline Mat heisenberg_pair(int i, int j, int n) {
    return pair_operator(spinbath::Axis::x, i, j, n) + pair_operator(spinbath::Axis::y, i, j, n) +
           pair_operator(spinbath::Axis::z, i, j, n);
}

// rho_ij = sum_p psi[i + d p] conj(psi[j + d p])
inline Mat partial_trace(const std::vector<cplx>& psi, int n_sys) {
    const std::size_t d = std::size_t{1} << n_sys;
    const std::size_t env = psi.size() / d;
    Mat rho = Mat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            cplx acc{0.0, 0.0};
            for (std::size_t p = 0; p < env; ++p) {
                acc += psi[i + d * p] * std::conj(psi[j + d * p]);
            }
            rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return rho;
}

inline Eigen::VectorXcd to_eigen(const std::vector<cplx>& v) {
    return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

} // namespace oracle
