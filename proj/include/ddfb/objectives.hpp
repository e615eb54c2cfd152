#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ddfb/ast.hpp"
#include "ddfb/features_io.hpp"

namespace ddfb {

// Presence bit per feature; bit k belongs to feature k+1.
class FeatureState {
public:
    FeatureState() = default;
    explicit FeatureState(std::vector<bool> bits) : bits_(std::move(bits)) {}
    static FeatureState from_string(std::string_view s);

    std::size_t size() const { return bits_.size(); }
    bool has(int feature_id) const { return bits_.at(static_cast<std::size_t>(feature_id - 1)); }
    const std::vector<bool>& bits() const { return bits_; }
    std::string to_string() const;

    friend bool operator==(const FeatureState&, const FeatureState&) = default;

private:
    std::vector<bool> bits_;
};

FeatureState feature_state(const AstNode& root, const FeatureSet& features);

struct ObjectiveSpec {
    int id = 0;
    std::string label;
    std::vector<int> required;  // feature ids, sorted, unique
};

class ObjectiveSet {
public:
    ObjectiveSet() = default;
    // Ids must run 1..n in order and every objective needs at least one
    // feature. Throws ValidationError.
    explicit ObjectiveSet(std::vector<ObjectiveSpec> specs);

    const std::vector<ObjectiveSpec>& specs() const { return specs_; }
    std::size_t size() const { return specs_.size(); }
    const ObjectiveSpec& operator[](std::size_t i) const { return specs_[i]; }

    // Throws ValidationError when a required feature id is not in 1..n.
    void check_features(std::size_t feature_count) const;

private:
    std::vector<ObjectiveSpec> specs_;
};

ObjectiveSet objectives_from_json(const nlohmann::ordered_json& doc);
ObjectiveSet parse_objectives(std::string_view text);
nlohmann::ordered_json objectives_to_json(const ObjectiveSet& set);

enum class ObjectiveStatus { inactive, complete, broken };
std::string to_string(ObjectiveStatus s);

using StatusVector = std::vector<ObjectiveStatus>;

StatusVector objective_statuses(const FeatureState& state, const StatusVector& prior, const ObjectiveSet& objectives);

}  // namespace ddfb
