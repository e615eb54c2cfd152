#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ddfb/ast.hpp"

namespace ddfb {

// Token for a node inside a shape: the escaped label, plus "=value" when
// values are included and the node carries one. '\\', '/', '|', ',' and '='
// are backslash-escaped so canonical strings can be split again.
std::string node_token(const AstNode& node, bool include_values);
std::string escape_token_part(std::string_view raw);

// A pq-gram style pattern: a stem of ancestor tokens ending at the anchor,
// plus a contiguous run of the anchor's child tokens (possibly empty).
class CodeShape {
public:
    CodeShape(std::vector<std::string> stem, std::vector<std::string> window, bool include_values);

    const std::vector<std::string>& stem() const { return stem_; }
    const std::vector<std::string>& window() const { return window_; }
    bool include_values() const { return include_values_; }

    // "stem1/stem2/anchor|w1,w2"
    const std::string& id() const { return id_; }
    std::size_t label_count() const { return stem_.size() + window_.size(); }

    static CodeShape parse(std::string_view canonical, bool include_values);

    friend bool operator==(const CodeShape& a, const CodeShape& b) { return a.id_ == b.id_; }
    friend bool operator<(const CodeShape& a, const CodeShape& b) { return a.id_ < b.id_; }

private:
    std::vector<std::string> stem_;
    std::vector<std::string> window_;
    bool include_values_;
    std::string id_;
};

// Every (stem, window) pair: for each node, stems of length 1..p_max
// (truncated at the root) with the empty window when the node is a leaf and
// every contiguous child window of length 1..min(q_max, children). Sorted by
// canonical id, duplicates removed.
std::vector<CodeShape> extract_code_shapes(const AstNode& root, int p_max, int q_max, bool include_values);

// True iff some node matches the stem (itself plus its nearest ancestors)
// and its children contain the window as a contiguous run. An empty window
// matches at any node matching the stem.
bool shape_occurs(const CodeShape& shape, const AstNode& root);

// Precomputed stems and (stem, window) pairs of one tree, for repeated
// containment queries. Queries beyond the profiled sizes fall back to a walk.
class TreeProfile {
public:
    TreeProfile(const AstNode& root, int p_max, int q_max, bool include_values);
    bool contains(const CodeShape& shape) const;

private:
    const AstNode* root_;
    int p_max_;
    int q_max_;
    bool include_values_;
    std::unordered_set<std::string> stems_;
    std::unordered_set<std::string> shapes_;
};

}  // namespace ddfb
