#include <sstream>

#include "ddfb/graph.hpp"
#include "ddfb/text.hpp"

namespace ddfb {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out + "\"";
}

}  // namespace

std::string export_dot(const TransitionGraph& g, const DotStyle& style) {
    const bool expert = g.source() == GraphSource::expert;
    const std::string shape = expert ? "ellipse" : "diamond";
    const std::string color = expert ? "black" : "blue";
    std::ostringstream os;
    os << "digraph " << (expert ? "expert" : "system") << " {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=" << shape << ", color=" << color << ", fontcolor=" << color << "];\n";
    for (const auto& n : g.nodes())
        os << "  " << quoted(n.label()) << " [shape=" << shape << ", color=" << color << "];\n";
    for (const auto& t : g.transitions()) {
        const double pw = style.penwidth_base + style.penwidth_per_student * static_cast<double>(t.weight);
        std::vector<std::string> label;
        if (style.weight_labels) label.push_back(std::to_string(t.weight));
        if (style.time_labels && t.total_seconds) label.push_back(format_fixed(*t.total_seconds / 60.0, 1) + " min");
        os << "  " << quoted(t.from.label()) << " -> " << quoted(t.to.label()) << " [color=" << (t.backward ? "red" : color)
           << ", penwidth=" << format_fixed(pw, 2);
        if (!label.empty()) os << ", label=" << quoted(join(label, " / "));
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

nlohmann::ordered_json graph_to_json(const TransitionGraph& g) {
    nlohmann::ordered_json doc;
    doc["source"] = to_string(g.source());
    doc["population"] = g.population();
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const auto& n : g.nodes()) nodes.push_back(n.label());
    doc["nodes"] = std::move(nodes);
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (const auto& t : g.transitions()) {
        nlohmann::ordered_json e;
        e["from"] = t.from.label();
        e["to"] = t.to.label();
        e["weight"] = t.weight;
        e["occurrences"] = t.occurrences;
        e["backward"] = t.backward;
        e["total_seconds"] = t.total_seconds ? nlohmann::ordered_json(*t.total_seconds) : nlohmann::ordered_json(nullptr);
        edges.push_back(std::move(e));
    }
    doc["edges"] = std::move(edges);
    return doc;
}

}  // namespace ddfb
