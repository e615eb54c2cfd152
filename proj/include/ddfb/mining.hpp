#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddfb/code_shape.hpp"
#include "ddfb/corpus.hpp"
#include "ddfb/occurrence.hpp"
#include "ddfb/trace.hpp"

namespace ddfb {

struct MiningConfig {
    int p_max = 3;
    int q_max = 4;
    double jaccard_dedupe_threshold = 0.975 * 0.975;  // strict '>' removes
    double support_threshold = 0.9 * 0.9;             // strict '<' removes
    bool include_values = true;
    double resolution_drop_threshold = 0.05;  // relative drop that rejects a merge
    std::optional<int> min_features;
    std::optional<int> max_features;

    // Throws ValidationError when a field is out of range.
    void validate() const;
};

// Slack for the threshold comparisons so that boundary values written as
// decimals (0.95, 0.81) are not flipped by binary rounding.
inline constexpr double kThresholdSlack = 1e-12;

// A shape or a decision (either of two shapes) that survived into the
// candidate feature set, with its corpus occurrence set.
struct MinedItem {
    std::string id;
    std::vector<CodeShape> branches;  // 1 for a shape, 2 for a decision
    IdSet occurrences;

    bool is_decision() const { return branches.size() == 2; }
    double support() const {
        return static_cast<double>(occurrences.count()) / static_cast<double>(occurrences.universe());
    }
    bool present_in(const TreeProfile& tree) const;
};

MinedItem make_shape_item(const CodeShape& shape, const OccurrenceIndex& index);

struct DecisionShape {
    CodeShape first;   // branches ordered by canonical id
    CodeShape second;
    IdSet occurrences;  // S_first ∪ S_second

    std::string id() const;
    MinedItem as_item() const;
};

// A merged group of items, detected when every member is present.
struct FeatureCluster {
    int id = 0;
    std::vector<MinedItem> members;  // sorted by id
    IdSet occurrences;                // intersection of member sets

    const std::string& key() const { return members.front().id; }
    bool present_in(const TreeProfile& tree) const;
};

struct Removal {
    std::string item;
    std::string stage;  // "dedupe" | "support"
    std::string cause;
};

struct DedupeResult {
    std::vector<CodeShape> survivors;
    std::vector<Removal> removals;
};

// Scans pairs in canonical id order; when J > threshold the smaller shape
// (fewer stem+window labels, ties: greater canonical id) is dropped.
DedupeResult dedupe_redundant(const std::vector<CodeShape>& shapes, const OccurrenceIndex& index,
                              const MiningConfig& config);

// For each shape c_i, take c_j minimising the overlap |S_i ∩ S_j| / N (ties
// by canonical id) and emit c_i ∪ c_j when Su_j < Su_i. Unordered pairs are
// emitted once, sorted by decision id.
std::vector<DecisionShape> build_decision_shapes(const std::vector<CodeShape>& shapes, const OccurrenceIndex& index,
                                                 const MiningConfig& config);

struct FilterResult {
    std::vector<MinedItem> survivors;
    std::vector<Removal> removals;
};

FilterResult filter_by_support(const std::vector<MinedItem>& items, const MiningConfig& config);

// Fraction of adjacent snapshot pairs, across all traces, whose feature
// states differ. Throws ValidationError when there are no adjacent pairs.
double resolution(const std::vector<FeatureCluster>& features, const std::vector<StudentTrace>& traces,
                  const MiningConfig& config);

struct MergeStep {
    std::string a;
    std::string b;
    double similarity = 0.0;
    std::optional<double> resolution_before;
    std::optional<double> resolution_after;
    bool committed = false;
    bool forced = false;  // taken despite the resolution drop to respect max_features
};

struct ClusterResult {
    std::vector<FeatureCluster> features;  // ids 1..n in key order
    std::vector<MergeStep> steps;
    std::string stop_reason;
};

// Greedy agglomerative merging of the most Jaccard-similar pair. Without
// training traces the resolution check is skipped and only the count bounds
// stop merging. Throws ValidationError on an empty item set.
ClusterResult cluster_features(const std::vector<MinedItem>& items, const std::vector<StudentTrace>* training_traces,
                               const MiningConfig& config);

struct MiningReport {
    std::size_t corpus_size = 0;
    std::size_t shapes_extracted = 0;
    std::size_t shapes_after_dedupe = 0;
    std::size_t decisions_built = 0;
    std::size_t items_before_filter = 0;
    std::size_t items_after_filter = 0;
    std::size_t features = 0;
    std::vector<Removal> removals;
    std::vector<MergeStep> merges;
    std::string stop_reason;
};

struct MiningResult {
    MiningConfig config;
    std::vector<FeatureCluster> features;
    std::vector<DecisionShape> decisions;
    MiningReport report;
};

MiningResult mine(const SolutionCorpus& corpus, const std::vector<StudentTrace>* training_traces,
                  const MiningConfig& config);

}  // namespace ddfb
