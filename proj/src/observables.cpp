// observables.cpp: reduced density matrix diagnostics

#include "spinbath/observables.hpp"

#include "spinbath/eigensolvers.hpp"
#include "spinbath/errors.hpp"

#include <algorithm>
#include <cmath>

namespace spinbath {

namespace {

void require_basis(const ReducedDensityMatrix& rho, BasisTag tag, const char* what) {
    if (rho.basis != tag) {
        throw ShapeError(std::string(what) + ": density matrix is in the wrong basis");
    }
}

void require_dim(const ReducedDensityMatrix& rho, const EigenBasis& basis) {
    if (rho.dim() != basis.dim()) {
        throw ShapeError("density matrix and eigenbasis dimensions differ");
    }
}

double sz(std::uint64_t s, int k) { return ((s >> k) & 1) ? -0.5 : 0.5; }

} // namespace

EigenBasis eigendecompose_system(const HamiltonianSpec& sys_part, double rel_tol) {
    if (sys_part.n_total() > 8) {
        throw BudgetError("system eigendecomposition is limited to 8 spins");
    }
    CompiledHamiltonian h(sys_part);
    const auto eig = jacobi_eigen(h.dense());
    EigenBasis b;
    b.energies = eig.values;
    b.vectors = eig.vectors;
    b.tolerance = rel_tol * (b.energies.size() ? b.energies.cwiseAbs().maxCoeff() : 0.0);
    const int d = b.dim();
    b.cluster.assign(static_cast<std::size_t>(d), 0);
    for (int k = 0; k < d; ++k) {
        if (k == 0 || b.energies(k) - b.energies(k - 1) > b.tolerance) {
            b.groups.emplace_back();
        }
        b.cluster[static_cast<std::size_t>(k)] = static_cast<int>(b.groups.size()) - 1;
        b.groups.back().push_back(k);
    }
    return b;
}

ReducedDensityMatrix to_energy_basis(const ReducedDensityMatrix& rho, const EigenBasis& basis) {
    require_basis(rho, BasisTag::updown, "to_energy_basis");
    require_dim(rho, basis);
    const Eigen::MatrixXcd v = basis.vectors.cast<cplx>();
    ReducedDensityMatrix out;
    out.m = v.adjoint() * rho.m * v;
    out.basis = BasisTag::energy;
    return out;
}

ReducedDensityMatrix to_updown_basis(const ReducedDensityMatrix& rho, const EigenBasis& basis) {
    require_basis(rho, BasisTag::energy, "to_updown_basis");
    require_dim(rho, basis);
    const Eigen::MatrixXcd v = basis.vectors.cast<cplx>();
    ReducedDensityMatrix out;
    out.m = v * rho.m * v.adjoint();
    out.basis = BasisTag::updown;
    return out;
}

double sigma(const ReducedDensityMatrix& rho) {
    double s = 0.0;
    const int d = rho.dim();
    for (int j = 1; j < d; ++j) {
        for (int i = 0; i < j; ++i) {
            s += std::norm(rho.m(i, j));
        }
    }
    return std::sqrt(s);
}

double gamma(const ReducedDensityMatrix& rho, const EigenBasis& basis) {
    require_dim(rho, basis);
    double s = 0.0;
    for (const auto& g : basis.groups) {
        for (std::size_t a = 0; a < g.size(); ++a) {
            for (std::size_t b = a + 1; b < g.size(); ++b) {
                const double d = rho.m(g[a], g[a]).real() - rho.m(g[b], g[b]).real();
                s += d * d;
            }
        }
    }
    return std::sqrt(s);
}

std::optional<double> effective_beta(const ReducedDensityMatrix& rho, const EigenBasis& basis, double floor) {
    require_dim(rho, basis);
    const int d = rho.dim();
    std::vector<double> logs(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double p = rho.m(i, i).real();
        logs[static_cast<std::size_t>(i)] = p > floor ? std::log(p) : std::nan("");
    }
    double sum = 0.0;
    long count = 0;
    for (int i = 0; i < d; ++i) {
        if (std::isnan(logs[static_cast<std::size_t>(i)])) {
            continue;
        }
        for (int j = i + 1; j < d; ++j) {
            if (std::isnan(logs[static_cast<std::size_t>(j)]) ||
                basis.cluster[static_cast<std::size_t>(i)] == basis.cluster[static_cast<std::size_t>(j)]) {
                continue;
            }
            sum += (logs[static_cast<std::size_t>(i)] - logs[static_cast<std::size_t>(j)]) /
                   (basis.energies(j) - basis.energies(i));
            ++count;
        }
    }
    if (count == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(count);
}

double delta(const ReducedDensityMatrix& rho, const EigenBasis& basis, double b) {
    require_dim(rho, basis);
    if (!std::isfinite(b)) {
        throw NumericalError("delta needs a finite effective inverse temperature");
    }
    const int d = rho.dim();
    Eigen::VectorXd w = (-b * basis.energies).array();
    w = (w.array() - w.maxCoeff()).exp();
    w /= w.sum();
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        const double diff = rho.m(i, i).real() - w(i);
        s += diff * diff;
    }
    return std::sqrt(s);
}

double quadratic_entropy(const ReducedDensityMatrix& rho) {
    // Tr rho^2 = sum |rho_ij|^2 for Hermitian rho
    // clamp the round-off of pure states
    return std::max(0.0, 1.0 - rho.m.squaredNorm());
}

double loschmidt_echo(const ReducedDensityMatrix& rho, const ReducedDensityMatrix& rho0) {
    if (rho.dim() != rho0.dim()) {
        throw ShapeError("echo needs density matrices of equal dimension");
    }
    if (rho.basis != rho0.basis) {
        throw ShapeError("echo needs both density matrices in the same basis");
    }
    return (rho.m.array() * rho0.m.transpose().array()).sum().real();
}

double concurrence(const ReducedDensityMatrix& rho) {
    require_basis(rho, BasisTag::updown, "concurrence");
    if (rho.dim() != 4) {
        throw ShapeError("concurrence is defined for two spins only");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> herm(rho.m);
    if (herm.eigenvalues().minCoeff() < -1e-8) {
        throw NumericalError("concurrence input is not positive semidefinite");
    }
    // sigma_y (x) sigma_y: |s> -> -sgn_0 sgn_1 |s ^ 3>
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    for (int s = 0; s < 4; ++s) {
        const double sgn = ((s & 1) == ((s >> 1) & 1)) ? -1.0 : 1.0;
        yy(s ^ 3, s) = sgn;
    }
    const Eigen::Matrix4cd r = rho.m;
    const Eigen::Matrix4cd tilde = yy * r.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r * tilde, false);
    std::array<double, 4> lam{};
    for (int k = 0; k < 4; ++k) {
        lam[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, es.eigenvalues()(k).real()));
    }
    std::sort(lam.begin(), lam.end(), std::greater<>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

ReducedDensityMatrix isolated_system_rho(const EigenBasis& basis, const StateVector& psi_sys, double t) {
    if (static_cast<int>(psi_sys.dim()) != basis.dim()) {
        throw ShapeError("system state and eigenbasis dimensions differ");
    }
    const auto d = static_cast<Eigen::Index>(basis.dim());
    Eigen::Map<const Eigen::VectorXcd> psi(psi_sys.amps.data(), d);
    Eigen::VectorXcd a = basis.vectors.cast<cplx>().adjoint() * psi;
    for (Eigen::Index k = 0; k < d; ++k) {
        a(k) *= std::exp(cplx{0.0, -basis.energies(k) * t});
    }
    ReducedDensityMatrix out;
    out.m = a * a.adjoint();
    out.basis = BasisTag::energy;
    return out;
}

double spin_correlation(const ReducedDensityMatrix& rho, int i, int j, Axis a) {
    require_basis(rho, BasisTag::updown, "spin_correlation");
    const int d = rho.dim();
    if (i == j || i < 0 || j < 0 || (1 << i) >= d || (1 << j) >= d) {
        throw ShapeError("spin_correlation: invalid spin pair");
    }
    const std::uint64_t mask = (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
    double acc = 0.0;
    for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(d); ++s) {
        const bool aligned = (((s >> i) ^ (s >> j)) & 1) == 0;
        switch (a) {
        case Axis::z: acc += rho.m(s, s).real() * sz(s, i) * sz(s, j); break;
        case Axis::x: acc += 0.25 * rho.m(s, s ^ mask).real(); break;
        case Axis::y: acc += (aligned ? -0.25 : 0.25) * rho.m(s, s ^ mask).real(); break;
        }
    }
    return acc;
}

double spin_expectation(const ReducedDensityMatrix& rho, int i, Axis a) {
    require_basis(rho, BasisTag::updown, "spin_expectation");
    const int d = rho.dim();
    if (i < 0 || (1 << i) >= d) {
        throw ShapeError("spin_expectation: invalid spin");
    }
    const std::uint64_t bit = std::uint64_t{1} << i;
    double acc = 0.0;
    for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(d); ++s) {
        switch (a) {
        case Axis::z: acc += rho.m(s, s).real() * sz(s, i); break;
        // <S^x> = Re sum_s rho_{s, s^bit} / 2
        case Axis::x: acc += 0.5 * rho.m(s, s ^ bit).real(); break;
        // S^y |up> = (i/2)|down>, S^y |down> = (-i/2)|up>
        case Axis::y: {
            const cplx amp = ((s >> i) & 1) ? cplx{0.0, -0.5} : cplx{0.0, 0.5};
            acc += (rho.m(s, s ^ bit) * amp).real();
            break;
        }
        }
    }
    return acc;
}

Correlators correlators_and_energy(const ReducedDensityMatrix& rho, const EigenBasis& basis) {
    require_basis(rho, BasisTag::updown, "correlators_and_energy");
    require_dim(rho, basis);
    Correlators c;
    const int d = rho.dim();
    int n = 0;
    while ((1 << n) < d) {
        ++n;
    }
    if (n >= 2) {
        c.zz = spin_correlation(rho, 0, 1, Axis::z);
        c.xx = spin_correlation(rho, 0, 1, Axis::x);
        c.s1_dot_s2 = c.zz + c.xx + spin_correlation(rho, 0, 1, Axis::y);
    }
    for (int k = 0; k < n; ++k) {
        c.magnetization += spin_expectation(rho, k, Axis::z);
    }
    if (n >= 1) {
        c.sx1 = spin_expectation(rho, 0, Axis::x);
        c.sz1 = spin_expectation(rho, 0, Axis::z);
    }
    const ReducedDensityMatrix re = to_energy_basis(rho, basis);
    c.energy = (re.m.diagonal().real().array() * basis.energies.array()).sum();
    return c;
}

MetricSample compute_metrics(double t, const ReducedDensityMatrix& rho_updown, const EigenBasis& basis,
                             double floor, const ReducedDensityMatrix* rho0_e) {
    const ReducedDensityMatrix re = to_energy_basis(rho_updown, basis);
    MetricSample m;
    m.t = t;
    m.sigma = sigma(re);
    m.gamma = gamma(re, basis);
    m.b = effective_beta(re, basis, floor);
    if (m.b) {
        m.delta = delta(re, basis, *m.b);
    }
    m.s_quad = quadratic_entropy(re);
    if (rho0_e != nullptr) {
        m.echo = loschmidt_echo(re, *rho0_e);
    }
    m.rho_diag.resize(static_cast<std::size_t>(re.dim()));
    for (int k = 0; k < re.dim(); ++k) {
        m.rho_diag[static_cast<std::size_t>(k)] = re.m(k, k).real();
    }
    m.correlators = correlators_and_energy(rho_updown, basis);
    m.e_s = m.correlators->energy;
    if (rho_updown.dim() == 4) {
        m.concurrence = concurrence(rho_updown);
    }
    return m;
}

} // namespace spinbath
