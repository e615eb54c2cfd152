#pragma once

#include <map>
#include <string>
#include <vector>

#include "ddfb/annotation.hpp"
#include "ddfb/objectives.hpp"

namespace ddfb {

struct DerivedObjective {
    ObjectiveSpec spec;
    double agreement = 0.0;  // fraction of training snapshots where detection matches the expert
};

// Stands in for the expert grouping of features into objectives: for each
// objective, greedily adds the feature whose conjunction with the ones already
// chosen best agrees with the expert matrix on annotated training traces, and
// stops when no feature improves agreement. Ties go to the lower feature id.
std::vector<DerivedObjective> derive_objectives(const FeatureSet& features, const std::vector<StudentTrace>& traces,
                                                const std::map<std::string, ExpertAnnotation>& truth,
                                                const std::vector<std::string>& labels);

ObjectiveSet to_objective_set(const std::vector<DerivedObjective>& derived);

}  // namespace ddfb
