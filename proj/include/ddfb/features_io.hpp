#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ddfb/mining.hpp"

namespace ddfb {

// Features loaded back from a features document. Occurrence sets are not
// stored in the document, so loaded items carry empty sets.
struct FeatureSet {
    int p_max = 3;
    int q_max = 4;
    bool include_values = true;
    std::vector<FeatureCluster> features;  // ids 1..n

    std::size_t size() const { return features.size(); }
};

nlohmann::ordered_json features_to_json(const MiningResult& result);
std::string serialize_features(const MiningResult& result);

// Throws ParseError on malformed documents, ValidationError when feature ids
// are not 1..n or a member refers to an unknown decision.
FeatureSet features_from_json(const nlohmann::ordered_json& doc);
FeatureSet parse_features(std::string_view text);

FeatureSet to_feature_set(const MiningResult& result);

}  // namespace ddfb
