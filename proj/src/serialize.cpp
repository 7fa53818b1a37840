// serialize.cpp: JSON form of a HamiltonianSpec

#include "spinbath/serialize.hpp"

#include "spinbath/errors.hpp"

#include <json.hpp>

namespace spinbath {

namespace {

nlohmann::json terms_to_json(const std::vector<Term>& terms) {
    auto arr = nlohmann::json::array();
    for (const auto& t : terms) {
        arr.push_back({t.i, t.j, std::string(to_string(t.axis)), t.coupling});
    }
    return arr;
}

std::vector<Term> terms_from_json(const nlohmann::json& arr) {
    std::vector<Term> out;
    for (const auto& row : arr) {
        if (!row.is_array() || row.size() != 4) {
            throw ConfigError("spec term must be [i, j, axis, coupling]");
        }
        out.push_back(Term{row[0].get<int>(), row[1].get<int>(),
                           parse_axis(row[2].get<std::string>()), row[3].get<double>()});
    }
    return out;
}

} // namespace

std::string spec_to_json(const HamiltonianSpec& spec) {
    nlohmann::json j;
    j["n_sys"] = spec.n_sys;
    j["n_env"] = spec.n_env;
    j["sys_terms"] = terms_to_json(spec.sys_terms);
    j["env_terms"] = terms_to_json(spec.env_terms);
    j["int_terms"] = terms_to_json(spec.int_terms);
    return j.dump(1);
}

HamiltonianSpec spec_from_json(const std::string& text) {
    HamiltonianSpec spec;
    try {
        const auto j = nlohmann::json::parse(text);
        spec.n_sys = j.at("n_sys").get<int>();
        spec.n_env = j.at("n_env").get<int>();
        spec.sys_terms = terms_from_json(j.at("sys_terms"));
        spec.env_terms = terms_from_json(j.at("env_terms"));
        spec.int_terms = terms_from_json(j.at("int_terms"));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed spec document: ") + e.what());
    }
    spec.validate();
    return spec;
}

} // namespace spinbath
