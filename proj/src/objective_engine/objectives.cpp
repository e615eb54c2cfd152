#include <algorithm>

#include "ddfb/errors.hpp"
#include "ddfb/objectives.hpp"

namespace ddfb {

using nlohmann::ordered_json;

ObjectiveSet::ObjectiveSet(std::vector<ObjectiveSpec> specs) : specs_(std::move(specs)) {
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        auto& s = specs_[i];
        if (s.id != static_cast<int>(i + 1))
            throw ValidationError("objective ids must run 1..n in order; got " + std::to_string(s.id) + " at position " +
                                  std::to_string(i + 1));
        if (s.required.empty()) throw ValidationError("objective " + std::to_string(s.id) + " requires no features");
        std::sort(s.required.begin(), s.required.end());
        if (std::adjacent_find(s.required.begin(), s.required.end()) != s.required.end())
            throw ValidationError("objective " + std::to_string(s.id) + " lists a feature twice");
    }
}

void ObjectiveSet::check_features(std::size_t feature_count) const {
    for (const auto& s : specs_)
        for (int f : s.required)
            if (f < 1 || static_cast<std::size_t>(f) > feature_count)
                throw ValidationError("objective " + std::to_string(s.id) + " requires unknown feature " +
                                      std::to_string(f) + " (features 1.." + std::to_string(feature_count) + ")");
}

ObjectiveSet objectives_from_json(const ordered_json& doc) {
    if (!doc.is_object() || !doc.contains("objectives") || !doc["objectives"].is_array())
        throw ParseError("objectives document needs an \"objectives\" array");
    std::vector<ObjectiveSpec> specs;
    const auto& arr = doc["objectives"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& o = arr[i];
        const std::string where = "/objectives/" + std::to_string(i);
        if (!o.is_object()) throw ParseError(where + " must be an object");
        for (const auto& [key, _] : o.items())
            if (key != "id" && key != "label" && key != "required")
                throw ParseError(where + ": unknown key \"" + key + "\"");
        if (!o.contains("id") || !o["id"].is_number_integer()) throw ParseError(where + "/id must be an integer");
        if (!o.contains("required") || !o["required"].is_array()) throw ParseError(where + "/required must be an array");
        ObjectiveSpec s;
        s.id = o["id"].get<int>();
        if (o.contains("label")) {
            if (!o["label"].is_string()) throw ParseError(where + "/label must be a string");
            s.label = o["label"].get<std::string>();
        }
        for (const auto& f : o["required"]) {
            if (!f.is_number_integer()) throw ParseError(where + "/required entries must be integers");
            s.required.push_back(f.get<int>());
        }
        specs.push_back(std::move(s));
    }
    return ObjectiveSet(std::move(specs));
}

ObjectiveSet parse_objectives(std::string_view text) { return objectives_from_json(parse_json_document(text)); }

ordered_json objectives_to_json(const ObjectiveSet& set) {
    ordered_json arr = ordered_json::array();
    for (const auto& s : set.specs()) arr.push_back({{"id", s.id}, {"label", s.label}, {"required", s.required}});
    return ordered_json{{"objectives", std::move(arr)}};
}

std::string to_string(ObjectiveStatus s) {
    switch (s) {
        case ObjectiveStatus::inactive: return "inactive";
        case ObjectiveStatus::complete: return "complete";
        case ObjectiveStatus::broken: return "broken";
    }
    return "?";
}

StatusVector objective_statuses(const FeatureState& state, const StatusVector& prior, const ObjectiveSet& objectives) {
    if (prior.size() != objectives.size()) throw ValidationError("prior status vector has the wrong length");
    StatusVector out(objectives.size());
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        const auto& req = objectives[i].required;
        const bool all = std::all_of(req.begin(), req.end(), [&](int f) { return state.has(f); });
        if (all)
            out[i] = ObjectiveStatus::complete;
        else
            out[i] = prior[i] == ObjectiveStatus::inactive ? ObjectiveStatus::inactive : ObjectiveStatus::broken;
    }
    return out;
}

}  // namespace ddfb
