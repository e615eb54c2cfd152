#include "ddfb/features_io.hpp"

#include <algorithm>
#include <map>

#include "ddfb/errors.hpp"

namespace ddfb {

using nlohmann::ordered_json;

namespace {

ordered_json optional_int(const std::optional<int>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json optional_real(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

const ordered_json& field(const ordered_json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + ": missing \"" + key + "\"");
    return *it;
}

}  // namespace

ordered_json features_to_json(const MiningResult& result) {
    const auto& cfg = result.config;
    ordered_json doc;
    doc["config"] = {{"p_max", cfg.p_max},
                     {"q_max", cfg.q_max},
                     {"jaccard_dedupe_threshold", cfg.jaccard_dedupe_threshold},
                     {"support_threshold", cfg.support_threshold},
                     {"include_values", cfg.include_values},
                     {"resolution_drop_threshold", cfg.resolution_drop_threshold},
                     {"min_features", optional_int(cfg.min_features)},
                     {"max_features", optional_int(cfg.max_features)}};

    ordered_json features = ordered_json::array();
    for (const auto& f : result.features) {
        ordered_json members = ordered_json::array();
        for (const auto& m : f.members) members.push_back(m.id);
        ordered_json entry;
        entry["id"] = f.id;
        entry["members"] = std::move(members);
        entry["presence"] = "all";
        entry["support"] = static_cast<double>(f.occurrences.count()) / static_cast<double>(f.occurrences.universe());
        features.push_back(std::move(entry));
    }
    doc["features"] = std::move(features);

    ordered_json decisions = ordered_json::array();
    for (const auto& d : result.decisions) {
        ordered_json entry;
        entry["id"] = d.id();
        entry["branches"] = {d.first.id(), d.second.id()};
        entry["support"] = static_cast<double>(d.occurrences.count()) / static_cast<double>(d.occurrences.universe());
        decisions.push_back(std::move(entry));
    }
    doc["decisions"] = std::move(decisions);

    const auto& rep = result.report;
    ordered_json report;
    report["corpus_size"] = rep.corpus_size;
    report["shapes_extracted"] = rep.shapes_extracted;
    report["shapes_after_dedupe"] = rep.shapes_after_dedupe;
    report["decisions_built"] = rep.decisions_built;
    report["items_before_filter"] = rep.items_before_filter;
    report["items_after_filter"] = rep.items_after_filter;
    report["features"] = rep.features;
    ordered_json removals = ordered_json::array();
    for (const auto& r : rep.removals) removals.push_back({{"item", r.item}, {"stage", r.stage}, {"cause", r.cause}});
    report["removals"] = std::move(removals);
    ordered_json merges = ordered_json::array();
    for (const auto& m : rep.merges) {
        merges.push_back({{"a", m.a},
                          {"b", m.b},
                          {"similarity", m.similarity},
                          {"resolution_before", optional_real(m.resolution_before)},
                          {"resolution_after", optional_real(m.resolution_after)},
                          {"committed", m.committed},
                          {"forced", m.forced}});
    }
    report["merges"] = std::move(merges);
    report["stop_reason"] = rep.stop_reason;
    doc["report"] = std::move(report);
    return doc;
}

std::string serialize_features(const MiningResult& result) { return features_to_json(result).dump(2) + "\n"; }

FeatureSet features_from_json(const ordered_json& doc) {
    if (!doc.is_object()) throw ParseError("features document must be an object");
    FeatureSet out;
    if (auto it = doc.find("config"); it != doc.end()) {
        if (!it->is_object()) throw ParseError("/config must be an object");
        out.p_max = it->value("p_max", out.p_max);
        out.q_max = it->value("q_max", out.q_max);
        out.include_values = it->value("include_values", out.include_values);
    }
    if (out.p_max < 1 || out.q_max < 1) throw ValidationError("/config: p_max and q_max must be >= 1");

    std::map<std::string, MinedItem> decisions;
    if (auto it = doc.find("decisions"); it != doc.end()) {
        if (!it->is_array()) throw ParseError("/decisions must be an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto& d = (*it)[i];
            const std::string where = "/decisions/" + std::to_string(i);
            const auto& br = field(d, "branches", where);
            if (!br.is_array() || br.size() != 2 || !br[0].is_string() || !br[1].is_string())
                throw ParseError(where + "/branches must hold two shape strings");
            DecisionShape ds{CodeShape::parse(br[0].get<std::string>(), out.include_values),
                             CodeShape::parse(br[1].get<std::string>(), out.include_values),
                             {}};
            if (ds.first == ds.second) throw ValidationError(where + ": decision branches must differ");
            if (ds.second < ds.first) std::swap(ds.first, ds.second);
            decisions.emplace(ds.id(), ds.as_item());
        }
    }

    const auto& feats = field(doc, "features", "");
    if (!feats.is_array()) throw ParseError("/features must be an array");
    for (std::size_t i = 0; i < feats.size(); ++i) {
        const auto& f = feats[i];
        const std::string where = "/features/" + std::to_string(i);
        if (!f.is_object()) throw ParseError(where + " must be an object");
        const auto& id = field(f, "id", where);
        if (!id.is_number_integer()) throw ParseError(where + "/id must be an integer");
        if (id.get<long long>() != static_cast<long long>(i + 1))
            throw ValidationError(where + "/id: feature ids must run 1..n in order");
        if (auto p = f.find("presence"); p != f.end() && *p != "all")
            throw ValidationError(where + "/presence: only \"all\" is supported");
        const auto& members = field(f, "members", where);
        if (!members.is_array() || members.empty()) throw ParseError(where + "/members must be a non-empty array");
        FeatureCluster cluster;
        cluster.id = static_cast<int>(i + 1);
        for (const auto& m : members) {
            if (!m.is_string()) throw ParseError(where + "/members entries must be strings");
            const auto s = m.get<std::string>();
            if (s.find(" || ") != std::string::npos) {
                auto d = decisions.find(s);
                if (d == decisions.end()) throw ValidationError(where + ": unknown decision " + s);
                cluster.members.push_back(d->second);
            } else {
                const auto shape = CodeShape::parse(s, out.include_values);
                cluster.members.push_back(MinedItem{shape.id(), {shape}, {}});
            }
        }
        std::sort(cluster.members.begin(), cluster.members.end(),
                  [](const MinedItem& a, const MinedItem& b) { return a.id < b.id; });
        out.features.push_back(std::move(cluster));
    }
    return out;
}

FeatureSet parse_features(std::string_view text) { return features_from_json(parse_json_document(text)); }

FeatureSet to_feature_set(const MiningResult& result) {
    FeatureSet out;
    out.p_max = result.config.p_max;
    out.q_max = result.config.q_max;
    out.include_values = result.config.include_values;
    out.features = result.features;
    return out;
}

}  // namespace ddfb
