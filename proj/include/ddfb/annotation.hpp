#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ddfb/trace.hpp"

namespace ddfb {

enum class FinalOutcome { working, non_working };
enum class ImpactType { IPB, ITS, ES };

std::string to_string(FinalOutcome o);
std::string to_string(ImpactType t);
std::optional<ImpactType> impact_from_string(std::string_view s);

// Per-snapshot expert truth for one student. Rows follow trace positions,
// columns objective ids 1..n (stored 0-based).
class ExpertAnnotation {
public:
    ExpertAnnotation(std::string student_id, std::size_t num_snapshots, std::size_t num_objectives);

    const std::string& student_id() const { return student_id_; }
    std::size_t num_snapshots() const { return truth_.size(); }
    std::size_t num_objectives() const { return num_objectives_; }

    bool complete(std::size_t position, int objective_id) const;
    void set_complete(std::size_t position, int objective_id, bool value);
    // Objective ids complete at `position`, ascending.
    std::vector<int> complete_set(std::size_t position) const;
    // First position where the objective is complete, if any.
    std::optional<std::size_t> first_complete(int objective_id) const;

    std::optional<FinalOutcome> final_outcome;
    std::set<ImpactType> impacts;
    // impact -> detection type names the annotator linked to it ("ID", "L", ...)
    std::map<ImpactType, std::set<std::string>> impact_links;

private:
    std::size_t column(int objective_id) const;

    std::string student_id_;
    std::size_t num_objectives_;
    std::vector<std::vector<bool>> truth_;
};

// Expands one annotation object against its trace. Objective values are a
// first-complete snapshot index, or a list of inclusive [start, end] index
// intervals where `end` may be null (open-ended).
ExpertAnnotation annotation_from_json(const nlohmann::ordered_json& doc, const StudentTrace& trace,
                                      std::size_t num_objectives);
ExpertAnnotation parse_annotations(std::string_view text, const StudentTrace& trace, std::size_t num_objectives);

// A document holding an array of annotation objects (or a single one),
// matched to traces by student_id. Every annotation must name a known trace.
std::map<std::string, ExpertAnnotation> parse_annotation_set(std::string_view text,
                                                             const std::vector<StudentTrace>& traces,
                                                             std::size_t num_objectives);

nlohmann::ordered_json annotation_to_json(const ExpertAnnotation& a, const StudentTrace& trace);

}  // namespace ddfb
