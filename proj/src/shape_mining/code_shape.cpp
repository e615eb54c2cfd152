#include "ddfb/code_shape.hpp"

#include <algorithm>

#include "ddfb/errors.hpp"

namespace ddfb {

std::string escape_token_part(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        if (c == '\\' || c == '/' || c == '|' || c == ',' || c == '=') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string node_token(const AstNode& node, bool include_values) {
    std::string t = escape_token_part(node.label());
    if (include_values && node.value()) {
        t.push_back('=');
        t += escape_token_part(*node.value());
    }
    return t;
}

namespace {

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(sep);
        out += parts[i];
    }
    return out;
}

std::string make_id(const std::vector<std::string>& stem, const std::vector<std::string>& window) {
    return join(stem, '/') + "|" + join(window, ',');
}

// Splits on an unescaped separator, keeping escapes intact.
std::vector<std::string> split_unescaped(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            cur.push_back(s[i]);
            cur.push_back(s[++i]);
        } else if (s[i] == sep) {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(s[i]);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

}  // namespace

CodeShape::CodeShape(std::vector<std::string> stem, std::vector<std::string> window, bool include_values)
    : stem_(std::move(stem)), window_(std::move(window)), include_values_(include_values) {
    if (stem_.empty()) throw ValidationError("code shape needs a non-empty stem");
    for (const auto& t : stem_)
        if (t.empty()) throw ValidationError("code shape has an empty stem token");
    for (const auto& t : window_)
        if (t.empty()) throw ValidationError("code shape has an empty window token");
    id_ = make_id(stem_, window_);
}

CodeShape CodeShape::parse(std::string_view canonical, bool include_values) {
    auto halves = split_unescaped(canonical, '|');
    if (halves.size() != 2) throw ValidationError("malformed code shape '" + std::string(canonical) + "'");
    auto stem = split_unescaped(halves[0], '/');
    std::vector<std::string> window;
    if (!halves[1].empty()) window = split_unescaped(halves[1], ',');
    return CodeShape(std::move(stem), std::move(window), include_values);
}

namespace {

void collect(const AstNode& node, std::vector<std::string>& path, int p_max, int q_max, bool values,
             std::vector<CodeShape>& out) {
    path.push_back(node_token(node, values));
    std::vector<std::string> kids;
    kids.reserve(node.children().size());
    for (const auto& c : node.children()) kids.push_back(node_token(c, values));

    const int depth = static_cast<int>(path.size());
    for (int p = 1; p <= std::min(p_max, depth); ++p) {
        std::vector<std::string> stem(path.end() - p, path.end());
        if (kids.empty()) out.emplace_back(stem, std::vector<std::string>{}, values);
        const int n = static_cast<int>(kids.size());
        for (int q = 1; q <= std::min(q_max, n); ++q)
            for (int start = 0; start + q <= n; ++start)
                out.emplace_back(stem, std::vector<std::string>(kids.begin() + start, kids.begin() + start + q),
                                 values);
    }
    for (const auto& c : node.children()) collect(c, path, p_max, q_max, values, out);
    path.pop_back();
}

bool window_in(const std::vector<std::string>& kids, const std::vector<std::string>& window) {
    if (window.empty()) return true;
    if (window.size() > kids.size()) return false;
    return std::search(kids.begin(), kids.end(), window.begin(), window.end()) != kids.end();
}

bool occurs_at(const CodeShape& shape, const AstNode& node, std::vector<std::string>& path) {
    path.push_back(node_token(node, shape.include_values()));
    bool found = false;
    const auto& stem = shape.stem();
    if (path.size() >= stem.size() && std::equal(stem.begin(), stem.end(), path.end() - stem.size())) {
        std::vector<std::string> kids;
        for (const auto& c : node.children()) kids.push_back(node_token(c, shape.include_values()));
        found = window_in(kids, shape.window());
    }
    for (std::size_t i = 0; !found && i < node.children().size(); ++i)
        found = occurs_at(shape, node.children()[i], path);
    path.pop_back();
    return found;
}

}  // namespace

std::vector<CodeShape> extract_code_shapes(const AstNode& root, int p_max, int q_max, bool include_values) {
    std::vector<CodeShape> out;
    std::vector<std::string> path;
    collect(root, path, p_max, q_max, include_values, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool shape_occurs(const CodeShape& shape, const AstNode& root) {
    std::vector<std::string> path;
    return occurs_at(shape, root, path);
}

namespace {

void profile(const AstNode& node, std::vector<std::string>& path, int p_max, int q_max, bool values,
             std::unordered_set<std::string>& stems, std::unordered_set<std::string>& shapes) {
    path.push_back(node_token(node, values));
    std::vector<std::string> kids;
    for (const auto& c : node.children()) kids.push_back(node_token(c, values));
    const int depth = static_cast<int>(path.size());
    const int n = static_cast<int>(kids.size());
    for (int p = 1; p <= std::min(p_max, depth); ++p) {
        std::vector<std::string> stem(path.end() - p, path.end());
        stems.insert(make_id(stem, {}));
        for (int q = 1; q <= std::min(q_max, n); ++q)
            for (int start = 0; start + q <= n; ++start)
                shapes.insert(make_id(stem, std::vector<std::string>(kids.begin() + start, kids.begin() + start + q)));
    }
    for (const auto& c : node.children()) profile(c, path, p_max, q_max, values, stems, shapes);
    path.pop_back();
}

}  // namespace

TreeProfile::TreeProfile(const AstNode& root, int p_max, int q_max, bool include_values)
    : root_(&root), p_max_(p_max), q_max_(q_max), include_values_(include_values) {
    std::vector<std::string> path;
    profile(root, path, p_max, q_max, include_values, stems_, shapes_);
}

bool TreeProfile::contains(const CodeShape& shape) const {
    if (shape.include_values() != include_values_ || static_cast<int>(shape.stem().size()) > p_max_ ||
        static_cast<int>(shape.window().size()) > q_max_)
        return shape_occurs(shape, *root_);
    if (shape.window().empty()) return stems_.count(shape.id()) > 0;
    return shapes_.count(shape.id()) > 0;
}

}  // namespace ddfb
