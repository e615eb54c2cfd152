#pragma once

#include <map>
#include <string>
#include <vector>

#include "ddfb/code_shape.hpp"
#include "ddfb/corpus.hpp"
#include "ddfb/id_set.hpp"

namespace ddfb {

// Jaccard similarity |a ∩ b| / |a ∪ b|; two empty sets give 0.
double jaccard(const IdSet& a, const IdSet& b);

// S_c for every shape: the corpus solutions containing it.
class OccurrenceIndex {
public:
    OccurrenceIndex(std::vector<std::string> solution_ids, std::map<std::string, IdSet> sets);

    std::size_t corpus_size() const { return solution_ids_.size(); }
    const std::vector<std::string>& solution_ids() const { return solution_ids_; }

    const IdSet& occurrences(const std::string& shape_id) const;
    bool has(const std::string& shape_id) const { return sets_.count(shape_id) > 0; }
    // |S_c| / |corpus|
    double support(const std::string& shape_id) const;
    std::vector<std::string> solutions_containing(const std::string& shape_id) const;

private:
    std::vector<std::string> solution_ids_;
    std::map<std::string, IdSet> sets_;
};

// Throws ValidationError on an empty corpus.
OccurrenceIndex build_occurrence_index(const SolutionCorpus& corpus, const std::vector<CodeShape>& shapes, int p_max,
                                       int q_max);

}  // namespace ddfb
