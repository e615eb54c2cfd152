#include "ddfb/occurrence.hpp"

#include "ddfb/errors.hpp"

namespace ddfb {

double jaccard(const IdSet& a, const IdSet& b) {
    const auto u = a.union_count(b);
    if (u == 0) return 0.0;
    return static_cast<double>(a.intersection_count(b)) / static_cast<double>(u);
}

OccurrenceIndex::OccurrenceIndex(std::vector<std::string> solution_ids, std::map<std::string, IdSet> sets)
    : solution_ids_(std::move(solution_ids)), sets_(std::move(sets)) {}

const IdSet& OccurrenceIndex::occurrences(const std::string& shape_id) const {
    auto it = sets_.find(shape_id);
    if (it == sets_.end()) throw InvariantError("shape '" + shape_id + "' missing from occurrence index");
    return it->second;
}

double OccurrenceIndex::support(const std::string& shape_id) const {
    return static_cast<double>(occurrences(shape_id).count()) / static_cast<double>(corpus_size());
}

std::vector<std::string> OccurrenceIndex::solutions_containing(const std::string& shape_id) const {
    std::vector<std::string> out;
    for (auto i : occurrences(shape_id).members()) out.push_back(solution_ids_[i]);
    return out;
}

OccurrenceIndex build_occurrence_index(const SolutionCorpus& corpus, const std::vector<CodeShape>& shapes, int p_max,
                                       int q_max) {
    if (corpus.empty()) throw ValidationError("empty corpus");
    const bool values = shapes.empty() ? true : shapes.front().include_values();
    std::vector<TreeProfile> profiles;
    profiles.reserve(corpus.size());
    std::vector<std::string> ids;
    for (const auto& s : corpus.solutions()) {
        profiles.emplace_back(s.root, p_max, q_max, values);
        ids.push_back(s.id);
    }
    std::map<std::string, IdSet> sets;
    for (const auto& shape : shapes) {
        IdSet set(corpus.size());
        for (std::size_t i = 0; i < profiles.size(); ++i)
            if (profiles[i].contains(shape)) set.insert(i);
        sets.emplace(shape.id(), std::move(set));
    }
    return OccurrenceIndex(std::move(ids), std::move(sets));
}

}  // namespace ddfb
