// model.cpp: topologies, coupling tables and Hamiltonian assembly

#include "spinbath/model.hpp"

#include "spinbath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace spinbath {

namespace {

std::pair<int, int> near_square_factors(int n) {
    int rows = static_cast<int>(std::sqrt(static_cast<double>(n)));
    while (rows > 1 && n % rows != 0) {
        --rows;
    }
    return {rows, n / rows};
}

Topology from_edge_set(TopologyKind kind, int n, const std::set<Edge>& edges) {
    Topology t;
    t.kind = kind;
    t.n = n;
    t.edges.assign(edges.begin(), edges.end());
    return t;
}

void add_edge(std::set<Edge>& edges, int a, int b) {
    if (a == b) {
        return;
    }
    edges.insert(Edge{std::min(a, b), std::max(a, b)});
}

Topology periodic_lattice(TopologyKind kind, int n) {
    const auto [rows, cols] = near_square_factors(n);
    if (rows < 3 || cols < 3) {
        throw ShapeError("lattice of " + std::to_string(n) +
                         " spins needs a periodic rows x cols shape with rows, cols >= 3");
    }
    auto site = [cols = cols, rows = rows](int r, int c) {
        return ((r % rows + rows) % rows) * cols + ((c % cols + cols) % cols);
    };
    std::set<Edge> edges;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            add_edge(edges, site(r, c), site(r, c + 1));
            add_edge(edges, site(r, c), site(r + 1, c));
            if (kind == TopologyKind::triangular_lattice) {
                // rhombic cell: third bond along the (1, -1) diagonal
                add_edge(edges, site(r, c), site(r + 1, c - 1));
            }
        }
    }
    return from_edge_set(kind, n, edges);
}

void check_index(int idx, int lo, int hi, const char* what) {
    if (idx < lo || idx >= hi) {
        throw ConfigError(std::string(what) + " term index " + std::to_string(idx) +
                          " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
    }
}

} // namespace

std::vector<int> Topology::degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (const auto& e : edges) {
        ++deg[static_cast<std::size_t>(e.i)];
        ++deg[static_cast<std::size_t>(e.j)];
    }
    return deg;
}

Topology build_topology(TopologyKind kind, int n) {
    if (n < 1) {
        throw ShapeError("topology needs at least one spin");
    }
    std::set<Edge> edges;
    switch (kind) {
    case TopologyKind::none:
        break;
    case TopologyKind::ring:
        for (int i = 0; i < n; ++i) {
            add_edge(edges, i, (i + 1) % n);
        }
        break;
    case TopologyKind::spin_glass:
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                edges.insert(Edge{i, j});
            }
        }
        break;
    case TopologyKind::square_lattice:
    case TopologyKind::triangular_lattice:
        return periodic_lattice(kind, n);
    }
    return from_edge_set(kind, n, edges);
}

std::vector<Term> sample_couplings(const CouplingFamily& family, const std::vector<Edge>& edges,
                                   RngStream& rng) {
    if (!std::isfinite(family.scale)) {
        throw ConfigError("coupling scale must be finite");
    }
    const double s = family.scale;
    const double mag = std::abs(s);
    std::vector<Term> terms;
    for (const auto& e : edges) {
        if (e.i < 0 || e.j <= e.i) {
            throw ConfigError("edges must satisfy 0 <= i < j");
        }
        switch (family.kind) {
        case FamilyKind::XY:
            terms.push_back({e.i, e.j, Axis::x, s});
            terms.push_back({e.i, e.j, Axis::y, s});
            break;
        case FamilyKind::Heisenberg:
            terms.push_back({e.i, e.j, Axis::x, s});
            terms.push_back({e.i, e.j, Axis::y, s});
            terms.push_back({e.i, e.j, Axis::z, s});
            break;
        case FamilyKind::HeisenbergType:
            for (Axis a : {Axis::x, Axis::y, Axis::z}) {
                terms.push_back({e.i, e.j, a, rng.uniform(-mag, mag)});
            }
            break;
        case FamilyKind::Ising:
            terms.push_back({e.i, e.j, Axis::z, s});
            break;
        case FamilyKind::IsingType:
            terms.push_back({e.i, e.j, Axis::z, rng.uniform(-mag, mag)});
            break;
        case FamilyKind::IsingPM:
            terms.push_back({e.i, e.j, Axis::z, rng.coin() ? mag : -mag});
            break;
        }
    }
    return terms;
}

HamiltonianSpec assemble(const SubsystemModel& system, const SubsystemModel& environment,
                         const CouplingFamily& interaction, std::uint64_t root_seed) {
    HamiltonianSpec spec;
    spec.n_sys = system.topology.n;
    spec.n_env = environment.topology.n;

    auto sys_rng = RngStream::derive(root_seed, streams::couplings_sys);
    spec.sys_terms = sample_couplings(system.family, system.topology.edges, sys_rng);

    auto env_rng = RngStream::derive(root_seed, streams::couplings_env);
    spec.env_terms = sample_couplings(environment.family, environment.topology.edges, env_rng);
    for (auto& t : spec.env_terms) {
        t.i += spec.n_sys;
        t.j += spec.n_sys;
    }

    std::vector<Edge> bipartite;
    bipartite.reserve(static_cast<std::size_t>(spec.n_sys) * static_cast<std::size_t>(spec.n_env));
    for (int i = 0; i < spec.n_sys; ++i) {
        for (int j = 0; j < spec.n_env; ++j) {
            bipartite.push_back(Edge{i, spec.n_sys + j});
        }
    }
    auto int_rng = RngStream::derive(root_seed, streams::couplings_int);
    spec.int_terms = sample_couplings(interaction, bipartite, int_rng);

    spec.validate();
    return spec;
}

void HamiltonianSpec::validate() const {
    if (n_sys < 0 || n_env < 0 || n_total() < 1) {
        throw ConfigError("spin counts must be non-negative with at least one spin");
    }
    if (n_total() > 62) {
        throw BudgetError("register of " + std::to_string(n_total()) + " spins is not addressable");
    }
    auto check = [](const Term& t, int lo_i, int hi_i, int lo_j, int hi_j, const char* what) {
        if (!std::isfinite(t.coupling)) {
            throw ConfigError(std::string(what) + " term has a non-finite coupling");
        }
        check_index(t.i, lo_i, hi_i, what);
        check_index(t.j, lo_j, hi_j, what);
        if (t.i == t.j) {
            throw ConfigError(std::string(what) + " term couples a spin to itself");
        }
    };
    for (const auto& t : sys_terms) {
        check(t, 0, n_sys, 0, n_sys, "system");
    }
    for (const auto& t : env_terms) {
        check(t, n_sys, n_total(), n_sys, n_total(), "environment");
    }
    for (const auto& t : int_terms) {
        check(t, 0, n_sys, n_sys, n_total(), "interaction");
    }
}

std::vector<Term> HamiltonianSpec::all_terms() const {
    std::vector<Term> out;
    out.reserve(sys_terms.size() + env_terms.size() + int_terms.size());
    out.insert(out.end(), sys_terms.begin(), sys_terms.end());
    out.insert(out.end(), env_terms.begin(), env_terms.end());
    out.insert(out.end(), int_terms.begin(), int_terms.end());
    return out;
}

HamiltonianSpec HamiltonianSpec::system_part() const {
    HamiltonianSpec s;
    s.n_sys = n_sys;
    s.sys_terms = sys_terms;
    return s;
}

HamiltonianSpec HamiltonianSpec::environment_part() const {
    HamiltonianSpec s;
    s.n_env = n_env;
    s.env_terms = env_terms;
    for (auto& t : s.env_terms) {
        t.i -= n_sys;
        t.j -= n_sys;
    }
    return s;
}

HamiltonianSpec HamiltonianSpec::without_interaction() const {
    HamiltonianSpec s = *this;
    s.int_terms.clear();
    return s;
}

std::string_view to_string(TopologyKind k) {
    switch (k) {
    case TopologyKind::ring: return "ring";
    case TopologyKind::square_lattice: return "square_lattice";
    case TopologyKind::triangular_lattice: return "triangular_lattice";
    case TopologyKind::spin_glass: return "spin_glass";
    case TopologyKind::none: return "none";
    }
    return "?";
}

std::string_view to_string(FamilyKind k) {
    switch (k) {
    case FamilyKind::XY: return "XY";
    case FamilyKind::Heisenberg: return "Heisenberg";
    case FamilyKind::HeisenbergType: return "HeisenbergType";
    case FamilyKind::Ising: return "Ising";
    case FamilyKind::IsingType: return "IsingType";
    case FamilyKind::IsingPM: return "IsingPM";
    }
    return "?";
}

std::string_view to_string(Axis a) {
    switch (a) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
    }
    return "?";
}

TopologyKind parse_topology(std::string_view s) {
    for (auto k : {TopologyKind::ring, TopologyKind::square_lattice, TopologyKind::triangular_lattice,
                   TopologyKind::spin_glass, TopologyKind::none}) {
        if (s == to_string(k)) {
            return k;
        }
    }
    throw ConfigError("unknown topology '" + std::string(s) + "'");
}

FamilyKind parse_family(std::string_view s) {
    for (auto k : {FamilyKind::XY, FamilyKind::Heisenberg, FamilyKind::HeisenbergType,
                   FamilyKind::Ising, FamilyKind::IsingType, FamilyKind::IsingPM}) {
        if (s == to_string(k)) {
            return k;
        }
    }
    throw ConfigError("unknown coupling family '" + std::string(s) + "'");
}

Axis parse_axis(std::string_view s) {
    if (s == "x") return Axis::x;
    if (s == "y") return Axis::y;
    if (s == "z") return Axis::z;
    throw ConfigError("unknown axis '" + std::string(s) + "'");
}

} // namespace spinbath
