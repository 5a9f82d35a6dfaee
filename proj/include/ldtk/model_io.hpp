#pragma once

#include "ldtk/lattice_models.hpp"
#include "ldtk/markov.hpp"

#include <json.hpp>

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ldtk {

// {"n_states": n, "observables": [...], "transitions": [{"from", "to", "rate", "inc"}]}
nlohmann::json generator_to_json(const MarkovGenerator& gen);
MarkovGenerator generator_from_json(const nlohmann::json& doc);

// A model block in one of three forms:
//   explicit generator  {"n_states": ..., "observables": ..., "transitions": ...}
//   lattice shorthand   {"model": "ssep", "L": 4, "rates": [alpha, gamma, beta, delta], "r": 1}
//                       {"model": "ssep_ring", "L": 6, "n_particles": 3, "r": 1}
//                       {"model": "quantum_dot", "rates": [alpha, gamma, beta, delta]}
//                       {"model": "two_level_baths", "gap": 1, "temperatures": [...], "couplings": [...]}
//   transport block     {"transport": "ssep" | "kmp" | "free" | "alpha_model" | "zrp",
//                        "alpha": a, "zrp_rates": [u(1), u(2), ...]}
struct ModelBlock {
    enum class Kind { Generator, Lattice, Transport };
    Kind kind = Kind::Generator;
    std::string name;
    std::optional<MarkovGenerator> generator;  // Generator and Lattice
    std::optional<SsepParams> lattice;         // exclusion shorthands
    std::optional<TransportModel> transport;   // Transport
    std::optional<ZrpRates> zrp;               // transport "zrp"
};

// UnknownKey, MissingField, ParseError (wrong type), UnknownModel.
ModelBlock model_from_json(const nlohmann::json& doc);

// Field helpers shared by the config reader.  `where` names the enclosing block.
void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view where);
const nlohmann::json& require_field(const nlohmann::json& obj, const char* key, std::string_view where);
double number_field(const nlohmann::json& obj, const char* key, std::string_view where);
long integer_field(const nlohmann::json& obj, const char* key, std::string_view where);
std::string string_field(const nlohmann::json& obj, const char* key, std::string_view where);
std::vector<double> number_array(const nlohmann::json& value, std::string_view what);

}  // namespace ldtk
