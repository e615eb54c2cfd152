#include "ddfb/ast.hpp"

#include <map>

#include "ddfb/errors.hpp"

namespace ddfb {

AstNode::AstNode(std::string label, std::optional<std::string> value, std::vector<AstNode> children)
    : label_(std::move(label)), value_(std::move(value)), children_(std::move(children)) {
    if (label_.empty()) throw ValidationError("AST node label must be non-empty");
}

std::size_t AstNode::size() const {
    std::size_t n = 1;
    for (const auto& c : children_) n += c.size();
    return n;
}

bool operator==(const AstNode& a, const AstNode& b) {
    return a.label_ == b.label_ && a.value_ == b.value_ && a.children_ == b.children_;
}

bool ast_equal(const AstNode& a, const AstNode& b) { return a == b; }

nlohmann::ordered_json parse_json_document(std::string_view text) {
    try {
        return nlohmann::ordered_json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        // nlohmann reports "at line L, column C" inside what().
        throw ParseError(std::string("malformed document: ") + e.what());
    }
}

namespace {

std::string at(const std::string& where) { return where.empty() ? "/" : where; }

}  // namespace

AstNode ast_from_json(const nlohmann::ordered_json& doc, const std::string& where) {
    if (!doc.is_object()) throw ValidationError("AST node at " + at(where) + " is not an object");

    static const std::map<std::string, int> kOrder{{"label", 0}, {"value", 1}, {"children", 2}};
    int last = -1;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        auto found = kOrder.find(it.key());
        if (found == kOrder.end())
            throw ValidationError("AST node at " + at(where) + " has unknown key '" + it.key() + "'");
        if (found->second <= last)
            throw ValidationError("AST node at " + at(where) + ": key '" + it.key() +
                                  "' out of declared order (label, value, children)");
        last = found->second;
    }

    auto label = doc.find("label");
    if (label == doc.end() || !label->is_string())
        throw ValidationError("AST node at " + at(where) + " needs a string label");
    if (label->get_ref<const std::string&>().empty())
        throw ValidationError("AST node at " + at(where) + " has an empty label");

    std::optional<std::string> value;
    if (auto v = doc.find("value"); v != doc.end()) {
        if (!v->is_string()) throw ValidationError("AST node at " + at(where) + ": value must be a string");
        value = v->get<std::string>();
    }

    std::vector<AstNode> children;
    if (auto c = doc.find("children"); c != doc.end()) {
        if (!c->is_array()) throw ValidationError("AST node at " + at(where) + ": children must be an array");
        children.reserve(c->size());
        for (std::size_t i = 0; i < c->size(); ++i)
            children.push_back(ast_from_json((*c)[i], where + "/children/" + std::to_string(i)));
    }
    return AstNode(label->get<std::string>(), std::move(value), std::move(children));
}

nlohmann::ordered_json ast_to_json(const AstNode& node) {
    nlohmann::ordered_json j;
    j["label"] = node.label();
    if (node.value()) j["value"] = *node.value();
    if (!node.children().empty()) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& c : node.children()) arr.push_back(ast_to_json(c));
        j["children"] = std::move(arr);
    }
    return j;
}

AstNode parse_ast(std::string_view text) { return ast_from_json(parse_json_document(text)); }

std::string serialize_ast(const AstNode& node) { return ast_to_json(node).dump(); }

namespace {

AstNode rename(const AstNode& n, const std::set<std::string>& labels, std::map<std::string, std::string>& names) {
    std::optional<std::string> value = n.value();
    if (value && labels.count(n.label())) {
        auto [it, inserted] = names.try_emplace(*value, "var_" + std::to_string(names.size()));
        value = it->second;
    }
    std::vector<AstNode> kids;
    kids.reserve(n.children().size());
    for (const auto& c : n.children()) kids.push_back(rename(c, labels, names));
    return AstNode(n.label(), std::move(value), std::move(kids));
}

}  // namespace

AstNode anonymize_identifiers(const AstNode& root, const std::set<std::string>& identifier_labels) {
    std::map<std::string, std::string> names;
    return rename(root, identifier_labels, names);
}

}  // namespace ddfb
