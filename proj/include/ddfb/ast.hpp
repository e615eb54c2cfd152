#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ddfb {

// One block of a block-based program. Literal values and identifier names
// live in `value` so that shape mining can include or ignore them.
class AstNode {
public:
    explicit AstNode(std::string label,
                     std::optional<std::string> value = std::nullopt,
                     std::vector<AstNode> children = {});

    const std::string& label() const { return label_; }
    const std::optional<std::string>& value() const { return value_; }
    const std::vector<AstNode>& children() const { return children_; }
    bool is_leaf() const { return children_.empty(); }

    // Number of nodes in the subtree rooted here.
    std::size_t size() const;

    friend bool operator==(const AstNode& a, const AstNode& b);

private:
    std::string label_;
    std::optional<std::string> value_;
    std::vector<AstNode> children_;
};

// Structural equality: labels, values and ordered children, recursively.
bool ast_equal(const AstNode& a, const AstNode& b);

// Tree document <-> node. Keys must appear in the order label, value,
// children; anything else is a schema violation.
AstNode ast_from_json(const nlohmann::ordered_json& doc, const std::string& where = "");
nlohmann::ordered_json ast_to_json(const AstNode& node);

AstNode parse_ast(std::string_view text);
// Canonical form: compact JSON, keys in schema order, empty fields omitted.
std::string serialize_ast(const AstNode& node);

// Renames identifier values to var_0, var_1, ... in first-use (preorder)
// order. Only nodes whose label is in `identifier_labels` are touched.
AstNode anonymize_identifiers(const AstNode& root,
                              const std::set<std::string>& identifier_labels = {"var"});

nlohmann::ordered_json parse_json_document(std::string_view text);

}  // namespace ddfb
