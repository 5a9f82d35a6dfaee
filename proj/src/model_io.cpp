#include "ldtk/model_io.hpp"

#include "ldtk/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace ldtk {

using nlohmann::json;

namespace {

std::string in(std::string_view where) { return where.empty() ? std::string() : " in " + std::string(where); }

std::vector<std::string> string_array(const json& value, std::string_view what)
{
    if (!value.is_array()) fail(ErrorCode::ParseError, std::string(what) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : value) {
        if (!v.is_string()) fail(ErrorCode::ParseError, std::string(what) + " must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::size_t index_field(const json& obj, const char* key, std::string_view where)
{
    const long v = integer_field(obj, key, where);
    if (v < 0) fail(ErrorCode::IndexOutOfRange, std::string(key) + " must be non-negative" + in(where));
    return static_cast<std::size_t>(v);
}

std::array<double, 4> boundary_rates(const json& obj, std::string_view where)
{
    const auto r = number_array(require_field(obj, "rates", where), "rates");
    if (r.size() != 4) fail(ErrorCode::DimensionMismatch, "rates must list [alpha, gamma, beta, delta]" + in(where));
    return {r[0], r[1], r[2], r[3]};
}

ModelBlock lattice_shorthand(const json& doc)
{
    ModelBlock out;
    out.kind = ModelBlock::Kind::Lattice;
    out.name = string_field(doc, "model", "model block");
    const std::string& m = out.name;
    if (m == "ssep") {
        reject_unknown_keys(doc, {"model", "L", "rates", "r"}, "model block");
        const auto r = boundary_rates(doc, "model block");
        const double asym = doc.contains("r") ? number_field(doc, "r", "model block") : 1.0;
        out.lattice = ssep_open(static_cast<int>(integer_field(doc, "L", "model block")), r[0], r[1], r[2], r[3], asym);
    } else if (m == "ssep_ring") {
        reject_unknown_keys(doc, {"model", "L", "n_particles", "r"}, "model block");
        const double asym = doc.contains("r") ? number_field(doc, "r", "model block") : 1.0;
        out.lattice = ssep_ring(static_cast<int>(integer_field(doc, "L", "model block")),
                                static_cast<int>(integer_field(doc, "n_particles", "model block")), asym);
    } else if (m == "quantum_dot") {
        reject_unknown_keys(doc, {"model", "rates"}, "model block");
        const auto r = boundary_rates(doc, "model block");
        out.lattice = ssep_open(1, r[0], r[1], r[2], r[3]);
    } else if (m == "two_level_baths") {
        reject_unknown_keys(doc, {"model", "gap", "temperatures", "couplings"}, "model block");
        out.generator = multi_bath_two_level(number_field(doc, "gap", "model block"),
                                             number_array(require_field(doc, "temperatures", "model block"), "temperatures"),
                                             number_array(require_field(doc, "couplings", "model block"), "couplings"));
        return out;
    } else {
        fail(ErrorCode::UnknownModel, "unknown lattice model '" + m + "'");
    }
    out.lattice->validate();
    out.generator = ssep_generator(*out.lattice);
    return out;
}

ModelBlock transport_block(const json& doc)
{
    reject_unknown_keys(doc, {"transport", "alpha", "zrp_rates"}, "model block");
    ModelBlock out;
    out.kind = ModelBlock::Kind::Transport;
    out.name = string_field(doc, "transport", "model block");
    if (out.name == "zrp") {
        out.zrp = doc.contains("zrp_rates") ? ZrpRates::table(number_array(doc["zrp_rates"], "zrp_rates"))
                                            : ZrpRates::independent();
        out.transport = zrp_transport(*out.zrp);
    } else {
        if (doc.contains("zrp_rates")) fail(ErrorCode::UnknownKey, "zrp_rates applies only to transport 'zrp'");
        const double alpha = doc.contains("alpha") ? number_field(doc, "alpha", "model block") : 0.0;
        out.transport = transport_catalogue(out.name, alpha);
    }
    return out;
}

}  // namespace

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where)
{
    if (!obj.is_object()) fail(ErrorCode::ParseError, "expected a JSON object" + in(where));
    for (const auto& item : obj.items())
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            fail(ErrorCode::UnknownKey, "unknown key '" + item.key() + "'" + in(where));
}

const json& require_field(const json& obj, const char* key, std::string_view where)
{
    if (!obj.contains(key)) fail(ErrorCode::MissingField, std::string("missing field '") + key + "'" + in(where));
    return obj[key];
}

double number_field(const json& obj, const char* key, std::string_view where)
{
    const json& v = require_field(obj, key, where);
    if (!v.is_number()) fail(ErrorCode::ParseError, std::string(key) + " must be a number" + in(where));
    return v.get<double>();
}

long integer_field(const json& obj, const char* key, std::string_view where)
{
    const json& v = require_field(obj, key, where);
    if (v.is_number_integer()) return v.get<long>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d && std::abs(d) < 1e15) return static_cast<long>(d);
    }
    fail(ErrorCode::ParseError, std::string(key) + " must be an integer" + in(where));
}

std::string string_field(const json& obj, const char* key, std::string_view where)
{
    const json& v = require_field(obj, key, where);
    if (!v.is_string()) fail(ErrorCode::ParseError, std::string(key) + " must be a string" + in(where));
    return v.get<std::string>();
}

std::vector<double> number_array(const json& value, std::string_view what)
{
    if (!value.is_array()) fail(ErrorCode::ParseError, std::string(what) + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& v : value) {
        if (!v.is_number()) fail(ErrorCode::ParseError, std::string(what) + " must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

json generator_to_json(const MarkovGenerator& gen)
{
    json transitions = json::array();
    for (std::size_t t = 0; t < gen.n_transitions(); ++t) {
        const auto inc = gen.increments(t);
        transitions.push_back({{"from", gen.from(t)},
                               {"to", gen.to(t)},
                               {"rate", gen.rate(t)},
                               {"inc", std::vector<double>(inc.begin(), inc.end())}});
    }
    return {{"n_states", gen.n_states()}, {"observables", gen.observable_names()}, {"transitions", transitions}};
}

MarkovGenerator generator_from_json(const json& doc)
{
    const std::string_view where = "generator";
    reject_unknown_keys(doc, {"n_states", "observables", "transitions"}, where);
    const long n = integer_field(doc, "n_states", where);
    if (n <= 0) fail(ErrorCode::IndexOutOfRange, "n_states must be positive");
    std::vector<std::string> names =
        doc.contains("observables") ? string_array(doc["observables"], "observables") : std::vector<std::string>{};
    const json& list = require_field(doc, "transitions", where);
    if (!list.is_array()) fail(ErrorCode::ParseError, "transitions must be an array");
    GeneratorBuilder b(static_cast<std::size_t>(n), names);
    for (const auto& t : list) {
        reject_unknown_keys(t, {"from", "to", "rate", "inc"}, "transition");
        const std::vector<double> inc = t.contains("inc") ? number_array(t["inc"], "inc")
                                                          : std::vector<double>(names.size(), 0.0);
        b.add(index_field(t, "from", "transition"), index_field(t, "to", "transition"),
              number_field(t, "rate", "transition"), inc);
    }
    return b.build();
}

ModelBlock model_from_json(const json& doc)
{
    if (!doc.is_object()) fail(ErrorCode::ParseError, "model block must be a JSON object");
    if (doc.contains("model")) return lattice_shorthand(doc);
    if (doc.contains("transport")) return transport_block(doc);
    if (doc.contains("n_states")) {
        ModelBlock out;
        out.kind = ModelBlock::Kind::Generator;
        out.name = "generator";
        out.generator = generator_from_json(doc);
        return out;
    }
    fail(ErrorCode::MissingField, "model block needs 'model', 'transport' or 'n_states'");
}

}  // namespace ldtk
