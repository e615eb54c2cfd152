#include "ddfb/mining.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "ddfb/errors.hpp"

namespace ddfb {

void MiningConfig::validate() const {
    if (p_max < 1) throw ValidationError("p_max must be >= 1");
    if (q_max < 1) throw ValidationError("q_max must be >= 1");
    auto unit = [](double v, const char* name) {
        if (!(v > 0.0 && v <= 1.0)) throw ValidationError(std::string(name) + " must lie in (0, 1]");
    };
    unit(jaccard_dedupe_threshold, "jaccard_dedupe_threshold");
    unit(support_threshold, "support_threshold");
    if (!(resolution_drop_threshold >= 0.0 && resolution_drop_threshold <= 1.0))
        throw ValidationError("resolution_drop_threshold must lie in [0, 1]");
    if (min_features && *min_features < 1) throw ValidationError("min_features must be >= 1");
    if (max_features && *max_features < 1) throw ValidationError("max_features must be >= 1");
    if (min_features && max_features && *min_features > *max_features)
        throw ValidationError("min_features exceeds max_features");
}

bool MinedItem::present_in(const TreeProfile& tree) const {
    return std::any_of(branches.begin(), branches.end(), [&](const CodeShape& s) { return tree.contains(s); });
}

MinedItem make_shape_item(const CodeShape& shape, const OccurrenceIndex& index) {
    return MinedItem{shape.id(), {shape}, index.occurrences(shape.id())};
}

std::string DecisionShape::id() const { return first.id() + " || " + second.id(); }

MinedItem DecisionShape::as_item() const { return MinedItem{id(), {first, second}, occurrences}; }

bool FeatureCluster::present_in(const TreeProfile& tree) const {
    return std::all_of(members.begin(), members.end(), [&](const MinedItem& m) { return m.present_in(tree); });
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::vector<CodeShape> sorted_unique(std::vector<CodeShape> shapes) {
    std::sort(shapes.begin(), shapes.end());
    shapes.erase(std::unique(shapes.begin(), shapes.end()), shapes.end());
    return shapes;
}

}  // namespace

DedupeResult dedupe_redundant(const std::vector<CodeShape>& input, const OccurrenceIndex& index,
                              const MiningConfig& config) {
    auto shapes = sorted_unique(input);
    std::vector<const IdSet*> occ;
    occ.reserve(shapes.size());
    for (const auto& s : shapes) occ.push_back(&index.occurrences(s.id()));

    std::vector<bool> alive(shapes.size(), true);
    DedupeResult out;
    const double limit = config.jaccard_dedupe_threshold + kThresholdSlack;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        if (!alive[i]) continue;
        for (std::size_t j = i + 1; j < shapes.size(); ++j) {
            if (!alive[j]) continue;
            const double jac = jaccard(*occ[i], *occ[j]);
            if (!(jac > limit)) continue;
            // j sorts after i, so on equal size j is the one with the greater id
            const bool drop_i = shapes[i].label_count() < shapes[j].label_count();
            const std::size_t gone = drop_i ? i : j;
            const std::size_t kept = drop_i ? j : i;
            alive[gone] = false;
            out.removals.push_back(
                {shapes[gone].id(), "dedupe", "J=" + fmt(jac) + " with larger shape " + shapes[kept].id()});
            if (drop_i) break;
        }
    }
    for (std::size_t i = 0; i < shapes.size(); ++i)
        if (alive[i]) out.survivors.push_back(shapes[i]);
    return out;
}

std::vector<DecisionShape> build_decision_shapes(const std::vector<CodeShape>& input, const OccurrenceIndex& index,
                                                 const MiningConfig&) {
    auto shapes = sorted_unique(input);
    if (shapes.size() < 2) return {};
    std::vector<const IdSet*> occ;
    for (const auto& s : shapes) occ.push_back(&index.occurrences(s.id()));

    std::map<std::string, DecisionShape> found;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        std::size_t best = shapes.size();
        std::size_t best_overlap = 0;
        for (std::size_t j = 0; j < shapes.size(); ++j) {
            if (j == i) continue;
            const auto overlap = occ[i]->intersection_count(*occ[j]);
            if (best == shapes.size() || overlap < best_overlap) {
                best = j;
                best_overlap = overlap;
            }
        }
        if (occ[best]->count() >= occ[i]->count()) continue;
        const auto& a = shapes[std::min(i, best)];
        const auto& b = shapes[std::max(i, best)];
        DecisionShape d{a, b, *occ[std::min(i, best)] | *occ[std::max(i, best)]};
        found.emplace(d.id(), std::move(d));
    }
    std::vector<DecisionShape> out;
    for (auto& [id, d] : found) out.push_back(std::move(d));
    return out;
}

FilterResult filter_by_support(const std::vector<MinedItem>& items, const MiningConfig& config) {
    FilterResult out;
    const double floor = config.support_threshold - kThresholdSlack;
    for (const auto& item : items) {
        const double su = item.support();
        if (su < floor)
            out.removals.push_back({item.id, "support", "support " + fmt(su) + " < " + fmt(config.support_threshold)});
        else
            out.survivors.push_back(item);
    }
    return out;
}

namespace {

// Item presence for every training snapshot plus the adjacent pairs that
// resolution is measured over.
class PresenceTable {
public:
    PresenceTable(const std::vector<MinedItem>& items, const std::vector<StudentTrace>& traces,
                  const MiningConfig& config) {
        for (const auto& t : traces) {
            for (std::size_t k = 0; k < t.size(); ++k) {
                if (k > 0) pairs_.emplace_back(snapshots_, snapshots_ - 1);
                ++snapshots_;
            }
        }
        bits_.assign(items.size(), std::vector<char>(snapshots_, 0));
        std::size_t s = 0;
        for (const auto& t : traces) {
            for (std::size_t k = 0; k < t.size(); ++k, ++s) {
                TreeProfile prof(t[k].root, config.p_max, config.q_max, config.include_values);
                for (std::size_t i = 0; i < items.size(); ++i) bits_[i][s] = items[i].present_in(prof) ? 1 : 0;
            }
        }
    }

    std::size_t pair_count() const { return pairs_.size(); }
    std::size_t snapshot_count() const { return snapshots_; }

    std::vector<char> conjunction(const std::vector<std::size_t>& members) const {
        std::vector<char> out(snapshots_, 1);
        for (auto m : members)
            for (std::size_t s = 0; s < snapshots_; ++s) out[s] = static_cast<char>(out[s] && bits_[m][s]);
        return out;
    }

    double resolution(const std::vector<const std::vector<char>*>& clusters) const {
        std::size_t differing = 0;
        for (const auto& [cur, prev] : pairs_) {
            for (const auto* c : clusters) {
                if ((*c)[cur] != (*c)[prev]) {
                    ++differing;
                    break;
                }
            }
        }
        return static_cast<double>(differing) / static_cast<double>(pairs_.size());
    }

private:
    std::size_t snapshots_ = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::vector<std::vector<char>> bits_;
};

std::size_t adjacent_pairs(const std::vector<StudentTrace>& traces) {
    std::size_t n = 0;
    for (const auto& t : traces) n += t.size() - 1;
    return n;
}

}  // namespace

double resolution(const std::vector<FeatureCluster>& features, const std::vector<StudentTrace>& traces,
                  const MiningConfig& config) {
    if (adjacent_pairs(traces) == 0) throw ValidationError("resolution needs at least one adjacent snapshot pair");
    std::vector<MinedItem> items;
    std::vector<std::vector<std::size_t>> groups;
    for (const auto& f : features) {
        std::vector<std::size_t> g;
        for (const auto& m : f.members) {
            g.push_back(items.size());
            items.push_back(m);
        }
        groups.push_back(std::move(g));
    }
    PresenceTable table(items, traces, config);
    std::vector<std::vector<char>> bits;
    for (const auto& g : groups) bits.push_back(table.conjunction(g));
    std::vector<const std::vector<char>*> ptrs;
    for (const auto& b : bits) ptrs.push_back(&b);
    return table.resolution(ptrs);
}

namespace {

struct WorkCluster {
    std::vector<std::size_t> members;  // item indices, sorted by id
    IdSet occurrences;
    std::vector<char> bits;
};

}  // namespace

ClusterResult cluster_features(const std::vector<MinedItem>& input, const std::vector<StudentTrace>* training_traces,
                               const MiningConfig& config) {
    if (input.empty()) throw ValidationError("cannot cluster an empty item set");
    std::vector<MinedItem> items = input;
    std::sort(items.begin(), items.end(), [](const MinedItem& a, const MinedItem& b) { return a.id < b.id; });

    const bool use_resolution = training_traces && adjacent_pairs(*training_traces) > 0;
    std::optional<PresenceTable> table;
    if (use_resolution) table.emplace(items, *training_traces, config);

    std::vector<WorkCluster> clusters;
    for (std::size_t i = 0; i < items.size(); ++i) {
        WorkCluster c{{i}, items[i].occurrences, {}};
        if (table) c.bits = table->conjunction(c.members);
        clusters.push_back(std::move(c));
    }
    auto current_resolution = [&](const std::vector<WorkCluster>& cs) {
        std::vector<const std::vector<char>*> ptrs;
        for (const auto& c : cs) ptrs.push_back(&c.bits);
        return table->resolution(ptrs);
    };

    ClusterResult out;
    std::optional<double> res;
    if (table) res = current_resolution(clusters);

    while (true) {
        if (clusters.size() <= 1) {
            out.stop_reason = "single feature left";
            break;
        }
        if (config.min_features && static_cast<int>(clusters.size()) <= *config.min_features) {
            out.stop_reason = "min_features reached";
            break;
        }
        const bool forced = config.max_features && static_cast<int>(clusters.size()) > *config.max_features;
        if (!table && !forced && config.max_features && !config.min_features) {
            out.stop_reason = "max_features reached";
            break;
        }

        // Clusters stay sorted by key, so the first strictly-better pair wins ties.
        std::size_t ba = 0, bb = 1;
        double best = -1.0;
        for (std::size_t a = 0; a < clusters.size(); ++a)
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                const double j = jaccard(clusters[a].occurrences, clusters[b].occurrences);
                if (j > best) {
                    best = j;
                    ba = a;
                    bb = b;
                }
            }

        WorkCluster merged;
        merged.members = clusters[ba].members;
        merged.members.insert(merged.members.end(), clusters[bb].members.begin(), clusters[bb].members.end());
        std::sort(merged.members.begin(), merged.members.end());
        merged.occurrences = clusters[ba].occurrences & clusters[bb].occurrences;

        MergeStep step{items[clusters[ba].members.front()].id, items[clusters[bb].members.front()].id, best,
                       res, std::nullopt, false, false};

        std::vector<WorkCluster> next;
        next.reserve(clusters.size() - 1);
        for (std::size_t k = 0; k < clusters.size(); ++k)
            if (k != ba && k != bb) next.push_back(clusters[k]);
        if (table) merged.bits = table->conjunction(merged.members);
        auto pos = std::lower_bound(next.begin(), next.end(), merged, [](const WorkCluster& x, const WorkCluster& y) {
            return x.members.front() < y.members.front();
        });
        next.insert(pos, std::move(merged));

        if (table) {
            const double after = current_resolution(next);
            step.resolution_after = after;
            const double drop = *res > 0.0 ? (*res - after) / *res : 0.0;
            if (drop > config.resolution_drop_threshold + kThresholdSlack && !forced) {
                out.steps.push_back(step);
                out.stop_reason = "resolution drop " + fmt(drop) + " exceeds threshold";
                break;
            }
            step.forced = drop > config.resolution_drop_threshold + kThresholdSlack;
            res = after;
        }
        step.committed = true;
        out.steps.push_back(step);
        clusters = std::move(next);
    }

    int id = 1;
    for (const auto& c : clusters) {
        FeatureCluster f;
        f.id = id++;
        for (auto m : c.members) f.members.push_back(items[m]);
        f.occurrences = c.occurrences;
        out.features.push_back(std::move(f));
    }
    return out;
}

MiningResult mine(const SolutionCorpus& corpus, const std::vector<StudentTrace>* training_traces,
                  const MiningConfig& config) {
    config.validate();
    if (corpus.empty()) throw ValidationError("empty corpus");

    std::vector<CodeShape> all;
    for (const auto& s : corpus.solutions()) {
        auto shapes = extract_code_shapes(s.root, config.p_max, config.q_max, config.include_values);
        all.insert(all.end(), shapes.begin(), shapes.end());
    }
    all = sorted_unique(std::move(all));

    MiningResult result;
    result.config = config;
    auto& rep = result.report;
    rep.corpus_size = corpus.size();
    rep.shapes_extracted = all.size();

    const auto index = build_occurrence_index(corpus, all, config.p_max, config.q_max);
    auto deduped = dedupe_redundant(all, index, config);
    rep.shapes_after_dedupe = deduped.survivors.size();
    rep.removals = deduped.removals;

    result.decisions = build_decision_shapes(deduped.survivors, index, config);
    rep.decisions_built = result.decisions.size();

    std::vector<MinedItem> items;
    for (const auto& s : deduped.survivors) items.push_back(make_shape_item(s, index));
    for (const auto& d : result.decisions) items.push_back(d.as_item());
    rep.items_before_filter = items.size();

    auto filtered = filter_by_support(items, config);
    rep.items_after_filter = filtered.survivors.size();
    rep.removals.insert(rep.removals.end(), filtered.removals.begin(), filtered.removals.end());
    if (filtered.survivors.empty()) throw ValidationError("no code or decision shape reaches the support threshold");

    auto clustered = cluster_features(filtered.survivors, training_traces, config);
    result.features = std::move(clustered.features);
    rep.features = result.features.size();
    rep.merges = std::move(clustered.steps);
    rep.stop_reason = std::move(clustered.stop_reason);
    return result;
}

}  // namespace ddfb
