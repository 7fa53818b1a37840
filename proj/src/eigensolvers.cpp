// eigensolvers.cpp: Jacobi and Lanczos

#include "spinbath/eigensolvers.hpp"

#include "spinbath/errors.hpp"
#include "spinbath/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spinbath {

namespace {

double off_norm(const Eigen::MatrixXd& a) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i != j) {
                s += a(i, j) * a(i, j);
            }
        }
    }
    return std::sqrt(s);
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n; ++k) {
        y[k] += alpha * x[k];
    }
}

void scale(double alpha, std::span<cplx> x) {
    for (auto& v : x) {
        v *= alpha;
    }
}

// Gram-Schmidt twice against every vector in the list.
void orthogonalize(std::span<cplx> w, std::span<const std::vector<cplx>> basis) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
            const cplx ov = inner(b, w);
            axpy(-ov, b, w);
        }
    }
}

} // namespace

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& input, double off_tol) {
    if (input.rows() != input.cols()) {
        throw ShapeError("Jacobi eigensolver needs a square matrix");
    }
    const Eigen::Index n = input.rows();
    Eigen::MatrixXd a = 0.5 * (input + input.transpose());
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double target = off_tol * std::max(a.norm(), std::numeric_limits<double>::min());

    SymmetricEigen out;
    const int max_sweeps = 100;
    while (off_norm(a) > target) {
        if (out.sweeps == max_sweeps) {
            throw NumericalError("Jacobi eigensolver did not converge in 100 sweeps");
        }
        ++out.sweeps;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.values(k) = a(src, src);
        Eigen::VectorXd col = v.col(src);
        Eigen::Index imax = 0;
        col.cwiseAbs().maxCoeff(&imax);
        if (col(imax) < 0.0) {
            col = -col;
        }
        out.vectors.col(k) = col;
    }
    return out;
}

Eigenpair lanczos_lowest(const CompiledHamiltonian& h, std::vector<cplx> start,
                         std::span<const std::vector<cplx>> deflate, const LanczosOptions& opts) {
    const std::size_t dim = h.dim();
    if (start.size() != dim) {
        throw ShapeError("Lanczos start vector has the wrong dimension");
    }
    if (deflate.size() >= dim) {
        throw NumericalError("deflation space fills the whole register");
    }
    // keep the Krylov basis under ~1 GB
    const std::size_t mem_cap = std::max<std::size_t>(8, (std::size_t{1} << 26) / dim);
    const std::size_t m_max = std::min({static_cast<std::size_t>(opts.max_krylov), dim - deflate.size(), mem_cap});

    std::vector<cplx> x = std::move(start);
    Eigenpair best;
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        orthogonalize(x, deflate);
        const double nx = std::sqrt(norm2(x));
        if (!(nx > 1e-300)) {
            throw NumericalError("Lanczos start vector vanishes after deflation");
        }
        scale(1.0 / nx, x);

        std::vector<std::vector<cplx>> basis;
        std::vector<double> alpha;
        std::vector<double> beta;
        basis.push_back(x);
        std::vector<cplx> w(dim);
        Eigen::VectorXd ritz_vec;
        double theta = 0.0;
        while (true) {
            const std::size_t j = basis.size() - 1;
            h.apply(basis[j], w);
            alpha.push_back(inner(basis[j], w).real());
            orthogonalize(w, basis);
            orthogonalize(w, deflate);
            const double b = std::sqrt(norm2(w));

            const auto m = static_cast<Eigen::Index>(alpha.size());
            Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
            Eigen::VectorXd e(std::max<Eigen::Index>(m - 1, 0));
            for (Eigen::Index k = 0; k + 1 < m; ++k) {
                e(k) = beta[static_cast<std::size_t>(k)];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
            tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
            theta = tri.eigenvalues()(0);
            ritz_vec = tri.eigenvectors().col(0);
            const double est = std::abs(b * ritz_vec(m - 1));
            const double scale_e = std::max(1.0, std::abs(theta));
            if (est < 0.1 * opts.residual_tol * scale_e || b < 1e-13 * scale_e ||
                basis.size() == m_max) {
                break;
            }
            scale(1.0 / b, w);
            beta.push_back(b);
            basis.push_back(w);
        }

        std::fill(x.begin(), x.end(), cplx{0.0, 0.0});
        for (std::size_t k = 0; k < basis.size(); ++k) {
            axpy(ritz_vec(static_cast<Eigen::Index>(k)), basis[k], x);
        }
        orthogonalize(x, deflate);
        scale(1.0 / std::sqrt(norm2(x)), x);

        h.apply(x, w);
        const double e_x = inner(x, w).real();
        axpy(-e_x, x, w);
        const double res = std::sqrt(norm2(w));
        best.value = e_x;
        best.residual = res;
        if (res < opts.residual_tol * std::max(1.0, std::abs(e_x))) {
            best.vector = std::move(x);
            return best;
        }
    }
    throw NumericalError("Lanczos did not converge: residual " + std::to_string(best.residual) +
                         " after " + std::to_string(opts.max_restarts) + " restarts");
}

ExtremalEstimate lanczos_extremes(const CompiledHamiltonian& h, int steps) {
    const std::size_t dim = h.dim();
    RngStream rng(0x6c616e637a6f73ULL);
    std::vector<cplx> v(dim);
    for (auto& a : v) {
        const double re = rng.normal();
        a = cplx{re, rng.normal()};
    }
    scale(1.0 / std::sqrt(norm2(v)), v);
    std::vector<cplx> prev(dim, cplx{0.0, 0.0});
    std::vector<cplx> w(dim);
    std::vector<double> alpha;
    std::vector<double> beta;
    double b_last = 0.0;
    const int m_max = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(steps), dim));
    for (int j = 0; j < m_max; ++j) {
        h.apply(v, w);
        const double a = inner(v, w).real();
        alpha.push_back(a);
        axpy(-a, v, w);
        if (j > 0) {
            axpy(-beta.back(), prev, w);
        }
        b_last = std::sqrt(norm2(w));
        if (b_last < 1e-12 || j + 1 == m_max) {
            break;
        }
        scale(1.0 / b_last, w);
        beta.push_back(b_last);
        std::swap(prev, v);
        std::swap(v, w);
    }
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd e(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index k = 0; k + 1 < m; ++k) {
        e(k) = beta[static_cast<std::size_t>(k)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    const double r_lo = std::abs(b_last * tri.eigenvectors()(m - 1, 0));
    const double r_hi = std::abs(b_last * tri.eigenvectors()(m - 1, m - 1));
    return {tri.eigenvalues()(0) - r_lo, tri.eigenvalues()(m - 1) + r_hi};
}

} // namespace spinbath
