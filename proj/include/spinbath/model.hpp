// model.hpp: lattice topologies, coupling families and the three-part
// Hamiltonian H = H_S + H_E + H_SE of a spin system coupled to a spin bath.
//
// Sign convention: every stored term (i, j, axis, c) contributes
// -c * S^axis_i * S^axis_j to H. Indices are global register positions:
// system spins occupy [0, n_sys), environment spins [n_sys, n_sys + n_env).

#pragma once

#include "spinbath/rng.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spinbath {

enum class TopologyKind { ring, square_lattice, triangular_lattice, spin_glass, none };
enum class FamilyKind { XY, Heisenberg, HeisenbergType, Ising, IsingType, IsingPM };
enum class Axis : std::uint8_t { x = 0, y = 1, z = 2 };

struct Edge {
    int i = 0;
    int j = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Topology {
    TopologyKind kind = TopologyKind::none;
    int n = 0;
    std::vector<Edge> edges; // i < j, sorted, unique

    // Number of edges incident to each vertex.
    std::vector<int> degrees() const;
};

struct CouplingFamily {
    FamilyKind kind = FamilyKind::Heisenberg;
    double scale = 0.0; // J, Omega or Delta
};

struct Term {
    int i = 0;
    int j = 0;
    Axis axis = Axis::z;
    double coupling = 0.0;
    friend bool operator==(const Term&, const Term&) = default;
};

struct HamiltonianSpec {
    int n_sys = 0;
    int n_env = 0;
    std::vector<Term> sys_terms;
    std::vector<Term> env_terms;
    std::vector<Term> int_terms;

    int n_total() const noexcept { return n_sys + n_env; }

    // Throws ConfigError on non-finite couplings or misplaced indices.
    void validate() const;

    // All terms in fixed order: system, environment, interaction.
    std::vector<Term> all_terms() const;

    // H_S alone on an n_sys-spin register.
    HamiltonianSpec system_part() const;
    // H_E alone on an n_env-spin register (indices shifted down by n_sys).
    HamiltonianSpec environment_part() const;
    // Same registers with H_SE removed.
    HamiltonianSpec without_interaction() const;

    friend bool operator==(const HamiltonianSpec&, const HamiltonianSpec&) = default;
};

// Deterministic edge list. Lattices are periodic rows x cols rectangles with the
// most nearly square factorization of n; both sides must be at least 3.
Topology build_topology(TopologyKind kind, int n);

// Terms (i, j, axis, c) for every edge, axis order x, y, z. Components that are
// identically zero for the family are omitted. Random families consume rng.
std::vector<Term> sample_couplings(const CouplingFamily& family, const std::vector<Edge>& edges,
                                   RngStream& rng);

struct SubsystemModel {
    Topology topology;
    CouplingFamily family;
};

// Builds the full Hamiltonian. Environment topology indices are offset by
// n_sys; the interaction couples every system spin to every environment spin.
// Couplings are drawn from the named streams of the root seed.
HamiltonianSpec assemble(const SubsystemModel& system, const SubsystemModel& environment,
                         const CouplingFamily& interaction, std::uint64_t root_seed);

// Name <-> enum conversions (names as used in configuration files).
std::string_view to_string(TopologyKind k);
std::string_view to_string(FamilyKind k);
std::string_view to_string(Axis a);
TopologyKind parse_topology(std::string_view s);
FamilyKind parse_family(std::string_view s);
Axis parse_axis(std::string_view s);

} // namespace spinbath
