#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "model.hpp"
#include "theory.hpp"

namespace structbandit {

using Json = nlohmann::json;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Json to_json(const Structure& s) {
    Json models = Json::array();
    for (const auto& m : s.models()) models.push_back(m.means());
    Json params = Json::object();
    if (s.reward().kind == RewardKind::Gaussian) params["variance"] = s.reward().variance;
    Json prov = {{"builder", s.provenance().builder}, {"flags", s.provenance().flags}};
    prov["seed"] = s.provenance().seed ? Json(*s.provenance().seed) : Json(nullptr);
    return Json{{"arm_count", s.arm_count()},
                {"true_index", s.true_index()},
                {"reward", {{"kind", to_string(s.reward().kind)}, {"params", params}}},
                {"models", models},
                {"provenance", prov}};
}

namespace detail {

inline const Json& require(const Json& doc, const char* field) {
    if (!doc.is_object() || !doc.contains(field)) throw FormatError(std::string("missing field '") + field + "'");
    return doc.at(field);
}

}  // namespace detail

inline Structure structure_from_json(const Json& doc) {
    if (!doc.is_object()) throw FormatError("structure document must be an object");
    const Json& arm_count_j = detail::require(doc, "arm_count");
    const Json& true_index_j = detail::require(doc, "true_index");
    const Json& models_j = detail::require(doc, "models");
    if (!arm_count_j.is_number_unsigned()) throw FormatError("field 'arm_count' must be a non-negative integer");
    if (!true_index_j.is_number_unsigned()) throw FormatError("field 'true_index' must be a non-negative integer");
    if (!models_j.is_array()) throw FormatError("field 'models' must be an array");
    const auto arm_count = arm_count_j.get<std::size_t>();

    RewardSpec reward;
    if (doc.contains("reward")) {
        const Json& r = doc.at("reward");
        const std::string kind = detail::require(r, "kind").get<std::string>();
        if (kind == "bernoulli") {
            reward.kind = RewardKind::Bernoulli;
        } else if (kind == "gaussian") {
            reward.kind = RewardKind::Gaussian;
            if (r.contains("params") && r.at("params").contains("variance"))
                reward.variance = r.at("params").at("variance").get<double>();
        } else {
            throw FormatError("unknown reward kind '" + kind + "'");
        }
    }

    std::vector<BanditModel> models;
    for (std::size_t m = 0; m < models_j.size(); ++m) {
        const Json& row = models_j[m];
        if (!row.is_array()) throw FormatError("model " + std::to_string(m) + " is not an array");
        if (row.size() != arm_count)
            throw StructureError("model " + std::to_string(m) + " has " + std::to_string(row.size()) +
                                 " means, expected " + std::to_string(arm_count));
        std::vector<double> mu;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!row[i].is_number())
                throw FormatError("model " + std::to_string(m) + ", arm " + std::to_string(i) + ": mean is not a number");
            mu.push_back(row[i].get<double>());
        }
        try {
            models.emplace_back(std::move(mu));
        } catch (const ModelError& e) {
            throw StructureError("model " + std::to_string(m) + ", " + e.what());
        }
    }

    Provenance prov;
    if (doc.contains("provenance")) {
        const Json& p = doc.at("provenance");
        if (p.contains("builder")) prov.builder = p.at("builder").get<std::string>();
        if (p.contains("seed") && !p.at("seed").is_null()) prov.seed = p.at("seed").get<std::uint64_t>();
        if (p.contains("flags"))
            for (auto it = p.at("flags").begin(); it != p.at("flags").end(); ++it)
                prov.flags[it.key()] = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    }
    return Structure(std::move(models), true_index_j.get<std::size_t>(), reward, std::move(prov));
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw FormatError("malformed document '" + path + "': " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline void save(const Structure& s, const std::string& path) { write_text_file(path, to_json(s).dump(2) + "\n"); }

inline Structure load(const std::string& path) {
    try {
        return structure_from_json(read_json_file(path));
    } catch (const Json::exception& e) {
        throw FormatError("malformed document '" + path + "': " + e.what());
    }
}

namespace detail {

/// JSON has no infinity; such values are written as strings.
inline Json number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

}  // namespace detail

inline Json to_json(const BoundReport& r) {
    Json terms = Json::array();
    for (const auto& t : r.terms) {
        Json row = {{"arm", t.arm}, {"gap", detail::number(t.gap)}, {"psi", detail::number(t.psi)},
                    {"value", detail::number(t.value)}};
        if (!t.note.empty()) row["note"] = t.note;
        terms.push_back(row);
    }
    Json extras = Json::object();
    for (const auto& [k, v] : r.extras) extras[k] = detail::number(v);
    return Json{{"bound", r.name},  {"value", detail::number(r.value)}, {"constant", detail::number(r.constant)},
                {"terms", terms},   {"flags", r.flags},                 {"extras", extras},
                {"notes", r.notes}};
}

inline Json to_json(const TheorySequences& seq) {
    Json phases = Json::array();
    for (std::size_t h = 0; h < seq.eliminated.size(); ++h)
        phases.push_back({{"phase", h},
                          {"active", seq.active[h].items()},
                          {"guaranteed", seq.guaranteed[h].items()},
                          {"eliminated", seq.eliminated[h].items()}});
    Json arms = Json::array();
    for (std::size_t i = 0; i < seq.last_phase.size(); ++i) {
        if (!seq.last_phase[i]) continue;
        arms.push_back({{"arm", i},
                        {"last_phase", *seq.last_phase[i]},
                        {"unresolved", static_cast<bool>(seq.unresolved[i])},
                        {"discarding_arms", seq.a_star_per_arm[i].items()}});
    }
    return Json{{"alpha", seq.alpha}, {"beta", seq.beta},   {"n", seq.n},       {"k_beta", seq.k_beta},
                {"cap", seq.cap},     {"phases", phases},   {"arms", arms},     {"final_active", seq.active.back().items()},
                {"alpha_equals_beta_squared", !seq.alpha_mismatch}};
}

}  // namespace structbandit
