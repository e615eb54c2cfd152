#include "ddfb/squiral.hpp"

#include <algorithm>

#include "ddfb/errors.hpp"

namespace ddfb::squiral {

namespace {

AstNode leaf(std::string label, std::optional<std::string> value = std::nullopt) {
    return AstNode(std::move(label), std::move(value));
}

AstNode node(std::string label, std::vector<AstNode> children, std::optional<std::string> value = std::nullopt) {
    return AstNode(std::move(label), std::move(value), std::move(children));
}

AstNode lit(const std::string& v) { return leaf("literal", v); }
AstNode var(const std::string& v) { return leaf("var", v); }

const char* kBlockName = "CreateASquiralOfSize";

AstNode pen_block(int variant) {
    switch (variant) {
        case 1: return leaf("setPenState", "down");
        case 2: return leaf("penDown", "true");
        case 3: return leaf("pen", "down");
        default: return leaf("penDown");
    }
}

AstNode turn_block(int variant) {
    switch (variant) {
        case 1: return node("turnLeft", {lit("90")});
        case 2: return node("turnRight", {lit("90")});
        case 3: return node("rotate", {lit("90")});
        default: return node("turn", {lit("90")});
    }
}

AstNode change_block(int variant) {
    switch (variant) {
        case 1: return node("change", {var("length"), lit("5")});
        case 2: return node("change", {var("length"), lit("20")});
        case 3: return node("set", {var("length"), node("sum", {var("length"), lit("10")})});
        default: return node("change", {var("length"), lit("10")});
    }
}

std::string move_var_name(int variant) {
    switch (variant) {
        case 1: return "side";
        case 2: return "len";
        case 3: return "distance";
        default: return "length";
    }
}

std::vector<AstNode> loop_body(const CodeState& s, const Variants& v) {
    std::vector<AstNode> body;
    if (s.move) body.push_back(node("move", {s.move_var ? var(move_var_name(v.move)) : lit("10")}));
    if (s.turn) body.push_back(turn_block(v.turn));
    if (s.change) body.push_back(change_block(v.change));
    return body;
}

AstNode loop(const CodeState& s, const Variants& v) {
    auto body = loop_body(s, v);
    if (s.count && v.count == 1) {
        std::vector<AstNode> inner{lit("4")};
        for (auto& b : body) inner.push_back(std::move(b));
        return node("repeat", {var("size"), node("repeat", std::move(inner))});
    }
    std::vector<AstNode> kids;
    if (!s.count)
        kids.push_back(lit("10"));
    else if (v.count == 2)
        kids.push_back(node("product", {lit("4"), var("size")}));
    else
        kids.push_back(node("product", {var("size"), lit("4")}));
    for (auto& b : body) kids.push_back(std::move(b));
    return node("repeat", std::move(kids));
}

}  // namespace

CodeState state_for(const std::vector<int>& objectives) {
    CodeState s;
    for (int o : objectives) {
        switch (o) {
            case 1: s.block = true; break;
            case 2: s.loop = s.count = true; break;
            case 3: s.loop = s.move = s.move_var = true; break;
            case 4: s.loop = s.move = s.pen = s.turn = s.change = true; break;
            default: throw ValidationError("objective id " + std::to_string(o) + " outside 1..4");
        }
    }
    return s;
}

AstNode build(const CodeState& s, const Variants& v) {
    std::vector<AstNode> script;
    script.push_back(leaf(v.call == 3 ? "receiveKey" : "receiveGo"));
    if (v.call != 1) script.push_back(leaf("clear"));

    std::vector<AstNode> code;  // pen and loop, wherever they live
    if (s.pen) code.push_back(pen_block(v.pen));
    if (s.loop) code.push_back(loop(s, v));

    if (s.block) {
        script.push_back(node("customBlockCall", {lit(v.call == 2 ? "5" : "10")}, kBlockName));
    } else {
        for (auto& c : code) script.push_back(std::move(c));
        code.clear();
    }
    if (s.flat_steps > 0) {
        if (!s.pen) script.push_back(pen_block(0));
        for (int i = 0; i < s.flat_steps; ++i) {
            script.push_back(node("move", {lit(std::to_string(10 * (i / 2 + 1)))}));
            script.push_back(node("turn", {lit("90")}));
        }
    }
    for (int i = 0; i < s.spare_blocks; ++i) script.push_back(node("say", {lit("hello")}));

    std::vector<AstNode> top;
    top.push_back(node("script", std::move(script)));
    if (s.block) {
        std::vector<AstNode> def{leaf("param", "size"), leaf("param", "length")};
        for (auto& c : code) def.push_back(std::move(c));
        top.push_back(node("customBlocks", {node("customBlock", std::move(def), kBlockName)}));
    }
    return node("snapshot", std::move(top));
}

AstNode solution(const Variants& v) {
    CodeState s = state_for({1, 2, 3, 4});
    return build(s, v);
}

AstNode flat_solution(int steps) {
    CodeState s;
    s.flat_steps = steps;
    return build(s);
}

namespace {

bool is_var(const AstNode& n) { return n.label() == "var"; }
bool is_lit(const AstNode& n, const char* v) { return n.label() == "literal" && n.value() == v; }

void collect(const AstNode& n, const std::string& label, std::vector<const AstNode*>& out) {
    if (n.label() == label) out.push_back(&n);
    for (const auto& c : n.children()) collect(c, label, out);
}

// Statements under a repeat, excluding its count expression, searched
// through nested repeats.
void loop_statements(const AstNode& repeat, std::vector<const AstNode*>& out) {
    const auto& kids = repeat.children();
    for (std::size_t i = 1; i < kids.size(); ++i) {
        out.push_back(&kids[i]);
        if (kids[i].label() == "repeat") loop_statements(kids[i], out);
    }
}

bool correct_count(const AstNode& repeat) {
    const auto& kids = repeat.children();
    if (kids.empty()) return false;
    const auto& c = kids[0];
    if (c.label() == "product" && c.children().size() == 2) {
        const auto& a = c.children()[0];
        const auto& b = c.children()[1];
        return (is_var(a) && a.value() == "size" && is_lit(b, "4")) ||
               (is_var(b) && b.value() == "size" && is_lit(a, "4"));
    }
    if (is_var(c) && c.value() == "size")
        for (std::size_t i = 1; i < kids.size(); ++i)
            if (kids[i].label() == "repeat" && !kids[i].children().empty() && is_lit(kids[i].children()[0], "4"))
                return true;
    return false;
}

bool is_pen_down(const AstNode& n) {
    return (n.label() == "penDown") || (n.label() == "setPenState" && n.value() == "down") ||
           (n.label() == "pen" && n.value() == "down");
}

bool is_turn_90(const AstNode& n) {
    const bool turnish = n.label() == "turn" || n.label() == "turnLeft" || n.label() == "turnRight" ||
                         n.label() == "rotate";
    return turnish && n.children().size() == 1 && is_lit(n.children()[0], "90");
}

bool is_length_change(const AstNode& n) {
    if (n.label() == "change") return n.children().size() == 2 && is_var(n.children()[0]);
    if (n.label() == "set" && n.children().size() == 2 && is_var(n.children()[0])) {
        const auto& e = n.children()[1];
        return e.label() == "sum" && std::any_of(e.children().begin(), e.children().end(), [&](const AstNode& x) {
                   return is_var(x) && x.value() == n.children()[0].value();
               });
    }
    return false;
}

// pen-down blocks that are not inside any repeat
bool pen_outside_loop(const AstNode& n) {
    if (n.label() == "repeat") return false;
    if (is_pen_down(n)) return true;
    return std::any_of(n.children().begin(), n.children().end(), pen_outside_loop);
}

}  // namespace

std::array<bool, kObjectives> expert_objectives(const AstNode& root) {
    std::array<bool, kObjectives> out{};

    std::vector<const AstNode*> defs, calls, repeats;
    collect(root, "customBlock", defs);
    collect(root, "customBlockCall", calls);
    collect(root, "repeat", repeats);

    const bool defined =
        std::any_of(defs.begin(), defs.end(), [](const AstNode* d) { return d->value() == kBlockName; });
    const bool called =
        std::any_of(calls.begin(), calls.end(), [](const AstNode* c) { return c->value() == kBlockName; });
    out[0] = defined && called;

    out[1] = std::any_of(repeats.begin(), repeats.end(), [](const AstNode* r) { return correct_count(*r); });

    for (const auto* r : repeats) {
        std::vector<const AstNode*> stmts;
        loop_statements(*r, stmts);
        bool move_any = false, move_var = false, turn = false, change = false;
        for (const auto* s : stmts) {
            if (s->label() == "move") {
                move_any = true;
                if (s->children().size() == 1 && is_var(s->children()[0])) move_var = true;
            }
            turn = turn || is_turn_90(*s);
            change = change || is_length_change(*s);
        }
        out[2] = out[2] || move_var;
        out[3] = out[3] || (move_any && turn && change);
    }
    out[3] = out[3] && pen_outside_loop(root);
    return out;
}

std::vector<int> expert_objective_set(const AstNode& root) {
    const auto a = expert_objectives(root);
    std::vector<int> out;
    for (int i = 0; i < kObjectives; ++i)
        if (a[static_cast<std::size_t>(i)]) out.push_back(i + 1);
    return out;
}

}  // namespace ddfb::squiral
