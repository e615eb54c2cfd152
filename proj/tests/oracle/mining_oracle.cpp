#include "oracle/mining_oracle.hpp"

#include <algorithm>
#include <random>

#include "ddfb/code_shape.hpp"
#include "ddfb/mining.hpp"
#include "ddfb/occurrence.hpp"

namespace oracle {

namespace {

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (std::string("\\/|,=").find(c) != std::string::npos) out += '\\';
        out += c;
    }
    return out;
}

std::string tok(const ddfb::AstNode& nd, bool values) {
    std::string t = esc(nd.label());
    if (values && nd.value()) t += "=" + esc(*nd.value());
    return t;
}

std::string make_id(const std::vector<std::string>& stem, const std::vector<std::string>& window) {
    std::string id;
    for (std::size_t i = 0; i < stem.size(); ++i) id += (i ? "/" : "") + stem[i];
    id += "|";
    for (std::size_t i = 0; i < window.size(); ++i) id += (i ? "," : "") + window[i];
    return id;
}

// Calls f(node, path) for every node, path = tokens from the root down to node.
template <class F>
void walk(const ddfb::AstNode& nd, bool values, std::vector<std::string>& path, F&& f) {
    path.push_back(tok(nd, values));
    f(nd, path);
    for (const auto& c : nd.children()) walk(c, values, path, f);
    path.pop_back();
}

std::size_t inter(const Ids& a, const Ids& b) {
    std::size_t k = 0;
    for (int x : a) k += b.count(x);
    return k;
}

Ids unite(const Ids& a, const Ids& b) {
    Ids u = a;
    u.insert(b.begin(), b.end());
    return u;
}

}  // namespace

std::vector<Shape> extract(const ddfb::AstNode& root, int p, int q, bool values) {
    std::map<std::string, Shape> out;
    std::vector<std::string> path;
    walk(root, values, path, [&](const ddfb::AstNode& nd, const std::vector<std::string>& pth) {
        std::vector<std::string> kids;
        for (const auto& c : nd.children()) kids.push_back(tok(c, values));
        for (int len = 1; len <= p; ++len) {
            if (static_cast<std::size_t>(len) > pth.size()) break;
            std::vector<std::string> stem(pth.end() - len, pth.end());
            if (kids.empty()) {
                Shape s{stem, {}, make_id(stem, {})};
                out.emplace(s.id, s);
            }
            for (std::size_t w = 1; w <= kids.size() && w <= static_cast<std::size_t>(q); ++w)
                for (std::size_t start = 0; start + w <= kids.size(); ++start) {
                    std::vector<std::string> win(kids.begin() + static_cast<long>(start),
                                                 kids.begin() + static_cast<long>(start + w));
                    Shape s{stem, win, make_id(stem, win)};
                    out.emplace(s.id, s);
                }
        }
    });
    std::vector<Shape> v;
    for (auto& [_, s] : out) v.push_back(s);
    return v;
}

bool occurs(const Shape& s, const ddfb::AstNode& root, bool values) {
    bool found = false;
    std::vector<std::string> path;
    walk(root, values, path, [&](const ddfb::AstNode& nd, const std::vector<std::string>& pth) {
        if (found || pth.size() < s.stem.size()) return;
        if (!std::equal(s.stem.begin(), s.stem.end(), pth.end() - static_cast<long>(s.stem.size()))) return;
        std::vector<std::string> kids;
        for (const auto& c : nd.children()) kids.push_back(tok(c, values));
        if (s.window.empty()) {
            found = true;
            return;
        }
        for (std::size_t start = 0; start + s.window.size() <= kids.size(); ++start)
            if (std::equal(s.window.begin(), s.window.end(), kids.begin() + static_cast<long>(start))) found = true;
    });
    return found;
}

Stages run(const ddfb::SolutionCorpus& corpus, const Config& cfg) {
    Stages st;
    std::map<std::string, Shape> all;
    for (const auto& sol : corpus.solutions())
        for (auto& s : extract(sol.root, cfg.p, cfg.q, cfg.values)) all.emplace(s.id, s);
    for (const auto& [id, s] : all) {
        st.shapes.push_back(id);
        Ids ids;
        for (std::size_t k = 0; k < corpus.size(); ++k)
            if (occurs(s, corpus[k].root, cfg.values)) ids.insert(static_cast<int>(k));
        st.occurrences[id] = ids;
    }
    for (std::size_t i = 0; i < st.shapes.size(); ++i)
        for (std::size_t j = i + 1; j < st.shapes.size(); ++j) {
            const auto& a = st.occurrences[st.shapes[i]];
            const auto& b = st.occurrences[st.shapes[j]];
            st.overlap[{st.shapes[i], st.shapes[j]}] = {inter(a, b), unite(a, b).size()};
        }

    // Redundancy: ordered pair scan; a removed shape takes no further part.
    std::set<std::string> removed;
    for (std::size_t i = 0; i < st.shapes.size(); ++i) {
        if (removed.count(st.shapes[i])) continue;
        for (std::size_t j = i + 1; j < st.shapes.size(); ++j) {
            if (removed.count(st.shapes[j])) continue;
            auto [in, un] = st.overlap[{st.shapes[i], st.shapes[j]}];
            // J > num/den  <=>  in * den > num * un   (J = 0 when both empty)
            if (un == 0 || static_cast<long long>(in) * cfg.dedupe.den <= cfg.dedupe.num * static_cast<long long>(un))
                continue;
            const Shape& a = all.at(st.shapes[i]);
            const Shape& b = all.at(st.shapes[j]);
            if (a.labels() < b.labels()) {
                removed.insert(a.id);
                break;
            }
            removed.insert(b.id);
        }
    }
    for (const auto& id : st.shapes) (removed.count(id) ? st.dedupe_removed : st.dedupe_survivors).push_back(id);

    // Decisions: min overlap partner, emitted when its support is lower.
    std::map<std::string, Decision> decisions;
    const auto& surv = st.dedupe_survivors;
    for (std::size_t i = 0; i < surv.size(); ++i) {
        const Ids& si = st.occurrences[surv[i]];
        std::size_t best = surv.size();
        std::size_t best_overlap = 0;
        for (std::size_t j = 0; j < surv.size(); ++j) {
            if (j == i) continue;
            std::size_t o = inter(si, st.occurrences[surv[j]]);
            if (best == surv.size() || o < best_overlap) {
                best = j;
                best_overlap = o;
            }
        }
        if (best == surv.size()) continue;
        const Ids& sj = st.occurrences[surv[best]];
        if (!(sj.size() < si.size())) continue;
        std::string a = surv[i], b = surv[best];
        if (b < a) std::swap(a, b);
        decisions.emplace(a + " || " + b, Decision{a, b, unite(si, sj)});
    }
    for (auto& [_, d] : decisions) st.decisions.push_back(d);

    const auto n = static_cast<long long>(corpus.size());
    auto keep = [&](std::size_t count) {
        // support < num/den removes
        return !(static_cast<long long>(count) * cfg.support.den < cfg.support.num * n);
    };
    for (const auto& id : surv)
        if (keep(st.occurrences[id].size())) st.filter_survivors.push_back(id);
    for (const auto& [id, d] : decisions)
        if (keep(d.occurrences.size())) st.filter_survivors.push_back(id);
    return st;
}

namespace {

const char* kLabels[] = {"a", "b", "c", "d", "e"};

ddfb::AstNode random_tree(std::mt19937& rng, int& budget, int depth) {
    std::uniform_int_distribution<int> lab(0, 4), kids(0, 3), coin(0, 3);
    std::vector<ddfb::AstNode> ch;
    --budget;
    const int k = depth >= 3 ? 0 : kids(rng);
    for (int i = 0; i < k && budget > 0; ++i) ch.push_back(random_tree(rng, budget, depth + 1));
    std::optional<std::string> value;
    if (coin(rng) == 0) value = std::to_string(coin(rng));
    return ddfb::AstNode(kLabels[lab(rng)], value, std::move(ch));
}

// Drops, relabels or revalues nodes below the root with small probability.
ddfb::AstNode mutate(const ddfb::AstNode& nd, std::mt19937& rng, bool is_root) {
    std::uniform_int_distribution<int> pct(0, 99), lab(0, 4);
    std::vector<ddfb::AstNode> ch;
    for (const auto& c : nd.children())
        if (pct(rng) >= 12) ch.push_back(mutate(c, rng, false));
    std::string label = nd.label();
    std::optional<std::string> value = nd.value();
    if (!is_root && pct(rng) < 8) label = kLabels[lab(rng)];
    if (pct(rng) < 6) value = value ? std::nullopt : std::optional<std::string>("9");
    return ddfb::AstNode(label, value, std::move(ch));
}

}  // namespace

ddfb::SolutionCorpus random_corpus(unsigned seed) {
    std::mt19937 rng(seed);
    int budget = 15;
    ddfb::AstNode base = random_tree(rng, budget, 0);
    std::uniform_int_distribution<int> count(1, 10);
    const int n = count(rng);
    std::vector<ddfb::Solution> sols;
    for (int i = 0; i < n; ++i) sols.push_back({"sol" + std::to_string(i), i == 0 ? base : mutate(base, rng, true)});
    return ddfb::SolutionCorpus(std::move(sols));
}

Config random_config(unsigned seed) {
    std::mt19937 rng(seed * 7919u + 1u);
    Config c;
    std::uniform_int_distribution<int> pick(0, 2), grid(8, 20), pq(1, 4);
    if (pick(rng) == 0) return c;
    c.p = pq(rng) > 3 ? 3 : pq(rng);
    c.q = pq(rng);
    c.values = pick(rng) != 0;
    c.dedupe = {grid(rng), 20};
    c.support = {grid(rng) - 6, 20};
    return c;
}

std::vector<std::string> diff_against_miner(const ddfb::SolutionCorpus& corpus, const Config& cfg) {
    std::vector<std::string> out;
    auto fail = [&](const std::string& what) { out.push_back(what); };
    const Stages want = run(corpus, cfg);

    ddfb::MiningConfig mc;
    mc.p_max = cfg.p;
    mc.q_max = cfg.q;
    mc.include_values = cfg.values;
    mc.jaccard_dedupe_threshold = cfg.dedupe.value();
    mc.support_threshold = cfg.support.value();

    std::vector<ddfb::CodeShape> shapes;
    for (const auto& s : corpus.solutions()) {
        auto part = ddfb::extract_code_shapes(s.root, cfg.p, cfg.q, cfg.values);
        shapes.insert(shapes.end(), part.begin(), part.end());
    }
    std::sort(shapes.begin(), shapes.end());
    shapes.erase(std::unique(shapes.begin(), shapes.end()), shapes.end());
    std::vector<std::string> got_ids;
    for (const auto& s : shapes) got_ids.push_back(s.id());
    if (got_ids != want.shapes) {
        fail("extracted shapes differ: " + std::to_string(got_ids.size()) + " vs " + std::to_string(want.shapes.size()));
        return out;
    }

    const auto index = ddfb::build_occurrence_index(corpus, shapes, cfg.p, cfg.q);
    for (const auto& s : shapes) {
        Ids got;
        for (auto m : index.occurrences(s.id()).members()) got.insert(static_cast<int>(m));
        if (got != want.occurrences.at(s.id())) fail("S_c differs for " + s.id());
    }
    for (std::size_t i = 0; i < shapes.size(); ++i)
        for (std::size_t j = i + 1; j < shapes.size(); ++j) {
            auto [in, un] = want.overlap.at({shapes[i].id(), shapes[j].id()});
            const double expect = un == 0 ? 0.0 : static_cast<double>(in) / static_cast<double>(un);
            const double got = ddfb::jaccard(index.occurrences(shapes[i].id()), index.occurrences(shapes[j].id()));
            if (got != expect) fail("J differs for " + shapes[i].id() + " / " + shapes[j].id());
        }

    const auto dd = ddfb::dedupe_redundant(shapes, index, mc);
    std::vector<std::string> surv;
    for (const auto& s : dd.survivors) surv.push_back(s.id());
    if (surv != want.dedupe_survivors) {
        fail("dedupe survivors differ: " + std::to_string(surv.size()) + " vs " +
             std::to_string(want.dedupe_survivors.size()));
        return out;
    }
    std::vector<std::string> removed;
    for (const auto& r : dd.removals) removed.push_back(r.item);
    std::sort(removed.begin(), removed.end());
    if (removed != want.dedupe_removed) fail("dedupe removal list differs");

    const auto decisions = ddfb::build_decision_shapes(dd.survivors, index, mc);
    if (decisions.size() != want.decisions.size()) {
        fail("decision count differs: " + std::to_string(decisions.size()) + " vs " +
             std::to_string(want.decisions.size()));
        return out;
    }
    for (std::size_t k = 0; k < decisions.size(); ++k) {
        const auto& d = decisions[k];
        const auto& w = want.decisions[k];
        Ids got;
        for (auto m : d.occurrences.members()) got.insert(static_cast<int>(m));
        if (d.first.id() != w.first || d.second.id() != w.second || got != w.occurrences)
            fail("decision " + std::to_string(k) + " differs: " + d.id());
    }

    std::vector<ddfb::MinedItem> items;
    for (const auto& s : dd.survivors) items.push_back(ddfb::make_shape_item(s, index));
    for (const auto& d : decisions) items.push_back(d.as_item());
    const auto filtered = ddfb::filter_by_support(items, mc);
    std::vector<std::string> kept;
    for (const auto& it : filtered.survivors) kept.push_back(it.id);
    if (kept != want.filter_survivors) fail("support survivors differ");

    // The bundled pipeline must agree with the stage-by-stage run.
    if (!want.filter_survivors.empty()) {
        try {
            const auto res = ddfb::mine(corpus, nullptr, mc);
            std::vector<std::string> members;
            for (const auto& f : res.features)
                for (const auto& m : f.members) members.push_back(m.id);
            std::sort(members.begin(), members.end());
            std::vector<std::string> expect = want.filter_survivors;
            std::sort(expect.begin(), expect.end());
            if (members != expect) fail("mine() feature members differ from the filtered set");
        } catch (const std::exception& e) {
            fail(std::string("mine() threw: ") + e.what());
        }
    }
    return out;
}

}  // namespace oracle
