#include "ddfb/derive.hpp"

#include "ddfb/errors.hpp"

namespace ddfb {

std::vector<DerivedObjective> derive_objectives(const FeatureSet& features, const std::vector<StudentTrace>& traces,
                                                const std::map<std::string, ExpertAnnotation>& truth,
                                                const std::vector<std::string>& labels) {
    if (features.size() == 0) throw ValidationError("no features to group");
    if (labels.empty()) throw ValidationError("no objectives to derive");

    // presence[f][s] and expert[o][s] over every annotated training snapshot
    std::vector<std::vector<char>> presence(features.size());
    std::vector<std::vector<char>> expert(labels.size());
    for (const auto& t : traces) {
        auto it = truth.find(t.student_id());
        if (it == truth.end()) continue;
        const auto& ann = it->second;
        if (ann.num_objectives() != labels.size())
            throw ValidationError(t.student_id() + ": annotation objective count differs from the label list");
        for (std::size_t pos = 0; pos < t.size(); ++pos) {
            const auto state = feature_state(t[pos].root, features);
            for (std::size_t f = 0; f < features.size(); ++f) presence[f].push_back(state.bits()[f] ? 1 : 0);
            for (std::size_t o = 0; o < labels.size(); ++o)
                expert[o].push_back(ann.complete(pos, static_cast<int>(o + 1)) ? 1 : 0);
        }
    }
    const std::size_t n = presence.front().size();
    if (n == 0) throw ValidationError("no annotated training snapshots");

    std::vector<DerivedObjective> out;
    for (std::size_t o = 0; o < labels.size(); ++o) {
        std::vector<char> detected(n, 1);
        std::vector<bool> used(features.size(), false);
        DerivedObjective d;
        d.spec.id = static_cast<int>(o + 1);
        d.spec.label = labels[o];
        std::size_t best_hits = 0;
        while (true) {
            std::size_t pick = features.size();
            std::size_t pick_hits = 0;
            for (std::size_t f = 0; f < features.size(); ++f) {
                if (used[f]) continue;
                std::size_t hits = 0;
                for (std::size_t s = 0; s < n; ++s) hits += ((detected[s] && presence[f][s]) == expert[o][s]) ? 1 : 0;
                if (pick == features.size() || hits > pick_hits) {
                    pick = f;
                    pick_hits = hits;
                }
            }
            if (pick == features.size()) break;
            if (!d.spec.required.empty() && pick_hits <= best_hits) break;
            used[pick] = true;
            d.spec.required.push_back(static_cast<int>(pick + 1));
            for (std::size_t s = 0; s < n; ++s) detected[s] = static_cast<char>(detected[s] && presence[pick][s]);
            best_hits = pick_hits;
        }
        d.agreement = static_cast<double>(best_hits) / static_cast<double>(n);
        out.push_back(std::move(d));
    }
    return out;
}

ObjectiveSet to_objective_set(const std::vector<DerivedObjective>& derived) {
    std::vector<ObjectiveSpec> specs;
    for (const auto& d : derived) specs.push_back(d.spec);
    return ObjectiveSet(std::move(specs));
}

}  // namespace ddfb
