#include <algorithm>

#include "ddfb/errors.hpp"
#include "ddfb/objectives.hpp"

namespace ddfb {

FeatureState FeatureState::from_string(std::string_view s) {
    std::vector<bool> bits;
    bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw ValidationError("feature state must be a 0/1 string: " + std::string(s));
        bits.push_back(c == '1');
    }
    return FeatureState(std::move(bits));
}

std::string FeatureState::to_string() const {
    std::string out;
    out.reserve(bits_.size());
    for (bool b : bits_) out.push_back(b ? '1' : '0');
    return out;
}

FeatureState feature_state(const AstNode& root, const FeatureSet& features) {
    const TreeProfile profile(root, features.p_max, features.q_max, features.include_values);
    std::vector<bool> bits;
    bits.reserve(features.size());
    for (const auto& f : features.features) bits.push_back(f.present_in(profile));
    return FeatureState(std::move(bits));
}

}  // namespace ddfb
