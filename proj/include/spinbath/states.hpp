// states.hpp: named initial states of the system and environment registers
//
//   UU           all spins up (index 0)
//   UD           alternating up, down, up, ... along the register
//   NEAR_UD      UD with spin 0 tilted by theta, cos(theta) = 1 - 4 eps, so the
//                nearest-neighbour <S^z S^z> is -1/4 + eps
//   RR           product of independent Haar-random single-spin states
//   RANDOM       i.i.d. complex Gaussian amplitudes, normalized
//   GROUND       lowest eigenvector; a random combination when degenerate
//   NEAR_GROUND  sqrt(1 - eps) |ground> + sqrt(eps) |lowest excited level>

#pragma once

#include "spinbath/eigensolvers.hpp"
#include "spinbath/hilbert.hpp"
#include "spinbath/model.hpp"
#include "spinbath/rng.hpp"

#include <string_view>

namespace spinbath {

enum class StateKind { GROUND, NEAR_GROUND, UU, UD, NEAR_UD, RR, RANDOM };

std::string_view to_string(StateKind k);
StateKind parse_state_kind(std::string_view s);

struct StateOptions {
    double near_ud_epsilon = 0.05;
    double near_ground_epsilon = 0.05;
    double degeneracy_tol = 1e-8; // relative, for grouping the ground level
    int dense_limit = 8;          // registers up to this size use dense Jacobi
    LanczosOptions lanczos;
};

// State on a sub-register of n_spins. part is the Hamiltonian acting on that
// sub-register (needed for GROUND and NEAR_GROUND, ignored otherwise).
StateVector make_state(StateKind kind, int n_spins, const HamiltonianSpec& part, RngStream& rng,
                       const StateOptions& opts = {});

// c(i, p) = c_S(i) c_E(p) at index i + 2^n_sys p.
StateVector product_state(const StateVector& sys, const StateVector& env);

} // namespace spinbath
