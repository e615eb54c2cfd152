#include "ddfb/annotation.hpp"

#include "ddfb/errors.hpp"

namespace ddfb {

std::string to_string(FinalOutcome o) { return o == FinalOutcome::working ? "working" : "non_working"; }

std::string to_string(ImpactType t) {
    switch (t) {
        case ImpactType::IPB: return "IPB";
        case ImpactType::ITS: return "ITS";
        case ImpactType::ES: return "ES";
    }
    return "?";
}

std::optional<ImpactType> impact_from_string(std::string_view s) {
    if (s == "IPB") return ImpactType::IPB;
    if (s == "ITS") return ImpactType::ITS;
    if (s == "ES") return ImpactType::ES;
    return std::nullopt;
}

ExpertAnnotation::ExpertAnnotation(std::string student_id, std::size_t num_snapshots, std::size_t num_objectives)
    : student_id_(std::move(student_id)),
      num_objectives_(num_objectives),
      truth_(num_snapshots, std::vector<bool>(num_objectives, false)) {}

std::size_t ExpertAnnotation::column(int objective_id) const {
    if (objective_id < 1 || static_cast<std::size_t>(objective_id) > num_objectives_)
        throw ValidationError("unknown objective id " + std::to_string(objective_id));
    return static_cast<std::size_t>(objective_id - 1);
}

bool ExpertAnnotation::complete(std::size_t position, int objective_id) const {
    return truth_.at(position)[column(objective_id)];
}

void ExpertAnnotation::set_complete(std::size_t position, int objective_id, bool value) {
    truth_.at(position)[column(objective_id)] = value;
}

std::vector<int> ExpertAnnotation::complete_set(std::size_t position) const {
    std::vector<int> out;
    const auto& row = truth_.at(position);
    for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j]) out.push_back(static_cast<int>(j + 1));
    return out;
}

std::optional<std::size_t> ExpertAnnotation::first_complete(int objective_id) const {
    auto col = column(objective_id);
    for (std::size_t p = 0; p < truth_.size(); ++p)
        if (truth_[p][col]) return p;
    return std::nullopt;
}

namespace {

int parse_objective_id(const std::string& key, std::size_t num_objectives, const std::string& who) {
    std::size_t used = 0;
    int id = 0;
    try {
        id = std::stoi(key, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != key.size() || id < 1 || static_cast<std::size_t>(id) > num_objectives)
        throw ValidationError("annotation for '" + who + "': unknown objective id '" + key + "'");
    return id;
}

}  // namespace

ExpertAnnotation annotation_from_json(const nlohmann::ordered_json& doc, const StudentTrace& trace,
                                      std::size_t num_objectives) {
    if (!doc.is_object()) throw ValidationError("annotation must be an object");
    if (!doc.contains("student_id") || !doc["student_id"].is_string())
        throw ValidationError("annotation needs a string student_id");
    const std::string who = doc["student_id"].get<std::string>();
    if (who != trace.student_id())
        throw ValidationError("annotation for '" + who + "' applied to trace '" + trace.student_id() + "'");

    ExpertAnnotation a(who, trace.size(), num_objectives);
    const int last_index = trace.snapshots().back().index;
    auto fail = [&](const std::string& why) { throw ValidationError("annotation for '" + who + "': " + why); };

    if (auto f = doc.find("final_outcome"); f != doc.end() && !f->is_null()) {
        const auto s = f->is_string() ? f->get<std::string>() : std::string();
        if (s == "working")
            a.final_outcome = FinalOutcome::working;
        else if (s == "non_working")
            a.final_outcome = FinalOutcome::non_working;
        else
            fail("final_outcome must be 'working' or 'non_working'");
    }
    if (auto imp = doc.find("impacts"); imp != doc.end()) {
        if (!imp->is_array()) fail("impacts must be an array");
        for (const auto& v : *imp) {
            auto t = v.is_string() ? impact_from_string(v.get<std::string>()) : std::nullopt;
            if (!t) fail("unknown impact type " + v.dump());
            a.impacts.insert(*t);
        }
    }
    if (auto links = doc.find("impact_links"); links != doc.end()) {
        if (!links->is_object()) fail("impact_links must be an object");
        for (auto it = links->begin(); it != links->end(); ++it) {
            auto t = impact_from_string(it.key());
            if (!t) fail("unknown impact type '" + it.key() + "' in impact_links");
            if (!it.value().is_array()) fail("impact_links entries must be arrays");
            for (const auto& d : it.value()) {
                if (!d.is_string()) fail("impact_links detection types must be strings");
                a.impact_links[*t].insert(d.get<std::string>());
            }
            a.impacts.insert(*t);
        }
    }

    auto objectives = doc.find("objectives");
    if (objectives == doc.end()) return a;
    if (!objectives->is_object()) fail("objectives must be an object");

    auto mark_from = [&](int obj, int from_index, int to_index) {
        if (from_index > last_index || to_index > last_index)
            fail("objective " + std::to_string(obj) + " references snapshot index beyond the trace (last " +
                 std::to_string(last_index) + ")");
        for (std::size_t p = 0; p < trace.size(); ++p) {
            const int idx = trace[p].index;
            if (idx >= from_index && idx <= to_index) a.set_complete(p, obj, true);
        }
    };

    for (auto it = objectives->begin(); it != objectives->end(); ++it) {
        const int obj = parse_objective_id(it.key(), num_objectives, who);
        const auto& spec = it.value();
        if (spec.is_null()) continue;
        if (spec.is_number_integer()) {
            mark_from(obj, spec.get<int>(), last_index);
        } else if (spec.is_array()) {
            for (const auto& iv : spec) {
                if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number_integer() ||
                    !(iv[1].is_number_integer() || iv[1].is_null()))
                    fail("interval for objective " + std::to_string(obj) + " must be [start, end|null]");
                const int lo = iv[0].get<int>();
                const int hi = iv[1].is_null() ? last_index : iv[1].get<int>();
                if (hi < lo) fail("interval end before start for objective " + std::to_string(obj));
                mark_from(obj, lo, hi);
            }
        } else {
            fail("objective " + std::to_string(obj) + " must be an index or an interval list");
        }
    }
    return a;
}

ExpertAnnotation parse_annotations(std::string_view text, const StudentTrace& trace, std::size_t num_objectives) {
    return annotation_from_json(parse_json_document(text), trace, num_objectives);
}

std::map<std::string, ExpertAnnotation> parse_annotation_set(std::string_view text,
                                                             const std::vector<StudentTrace>& traces,
                                                             std::size_t num_objectives) {
    auto doc = parse_json_document(text);
    std::vector<nlohmann::ordered_json> items;
    if (doc.is_array())
        items.assign(doc.begin(), doc.end());
    else
        items.push_back(doc);

    std::map<std::string, const StudentTrace*> by_id;
    for (const auto& t : traces) by_id[t.student_id()] = &t;

    std::map<std::string, ExpertAnnotation> out;
    for (const auto& item : items) {
        if (!item.is_object() || !item.contains("student_id") || !item["student_id"].is_string())
            throw ValidationError("annotation entries need a string student_id");
        const auto who = item["student_id"].get<std::string>();
        auto t = by_id.find(who);
        if (t == by_id.end()) throw ValidationError("annotation for unknown student '" + who + "'");
        if (out.count(who)) throw ValidationError("duplicate annotation for student '" + who + "'");
        out.emplace(who, annotation_from_json(item, *t->second, num_objectives));
    }
    return out;
}

nlohmann::ordered_json annotation_to_json(const ExpertAnnotation& a, const StudentTrace& trace) {
    nlohmann::ordered_json j;
    j["student_id"] = a.student_id();
    if (a.final_outcome) j["final_outcome"] = to_string(*a.final_outcome);
    if (!a.impacts.empty()) {
        auto arr = nlohmann::ordered_json::array();
        for (auto t : a.impacts) arr.push_back(to_string(t));
        j["impacts"] = arr;
    }
    if (!a.impact_links.empty()) {
        nlohmann::ordered_json links = nlohmann::ordered_json::object();
        for (const auto& [t, types] : a.impact_links) links[to_string(t)] = types;
        j["impact_links"] = links;
    }
    nlohmann::ordered_json objs = nlohmann::ordered_json::object();
    for (std::size_t obj = 1; obj <= a.num_objectives(); ++obj) {
        auto runs = nlohmann::ordered_json::array();
        std::size_t p = 0;
        while (p < trace.size()) {
            if (!a.complete(p, static_cast<int>(obj))) {
                ++p;
                continue;
            }
            std::size_t q = p;
            while (q + 1 < trace.size() && a.complete(q + 1, static_cast<int>(obj))) ++q;
            nlohmann::ordered_json iv = nlohmann::ordered_json::array();
            iv.push_back(trace[p].index);
            if (q + 1 == trace.size())
                iv.push_back(nullptr);
            else
                iv.push_back(trace[q].index);
            runs.push_back(iv);
            p = q + 1;
        }
        if (!runs.empty()) objs[std::to_string(obj)] = runs;
    }
    j["objectives"] = objs;
    return j;
}

}  // namespace ddfb
