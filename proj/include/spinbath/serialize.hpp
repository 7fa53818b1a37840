// serialize.hpp: lossless JSON form of a HamiltonianSpec
//
// {"n_sys": 2, "n_env": 16,
//  "sys_terms": [[0, 1, "x", -5.0], ...], "env_terms": [...], "int_terms": [...]}
// Couplings are written with round-trip precision, so parse(dump(s)) == s.

#pragma once

#include "spinbath/model.hpp"

#include <string>

namespace spinbath {

std::string spec_to_json(const HamiltonianSpec& spec);
HamiltonianSpec spec_from_json(const std::string& text);

} // namespace spinbath
