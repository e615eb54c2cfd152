#include "ddfb/generator.hpp"

#include <algorithm>
#include <cmath>

#include "ddfb/errors.hpp"
#include "ddfb/graph.hpp"

namespace ddfb {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : state_(seed) {}

// splitmix64 is fully specified, unlike the std distributions
std::uint64_t Rng::next() { return splitmix64(state_); }

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

long long Rng::uniform_int(long long lo, long long hi) {
    if (hi < lo) throw InvariantError("uniform_int with an empty range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<long long>(next());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t r;
    do r = next();
    while (r >= limit);
    return lo + static_cast<long long>(r % span);
}

bool Rng::bernoulli(double p) { return uniform01() < p; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (stream * 0xD1B54A32D192ED03ULL);
    return splitmix64(x);
}

std::string to_string(Cohort c) { return c == Cohort::table3 ? "table3" : "in_distribution"; }

Cohort cohort_from_string(std::string_view s) {
    if (s == "table3") return Cohort::table3;
    if (s == "in_distribution") return Cohort::in_distribution;
    throw ValidationError("unknown cohort \"" + std::string(s) + "\" (table3 | in_distribution)");
}

void GeneratorConfig::validate() const {
    auto frac = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(name) + " must lie in [0, 1]");
    };
    frac(custom_block_fraction, "custom_block_fraction");
    frac(nested_loop_fraction, "nested_loop_fraction");
    frac(variant_fraction, "variant_fraction");
    frac(edit_error_rate, "edit_error_rate");
    frac(timestamp_jitter, "timestamp_jitter");
    frac(idle_rate, "idle_rate");
    if (n_solutions < 1) throw ValidationError("n_solutions must be >= 1");
    if (n_traces < 0 || n_training_traces < 0) throw ValidationError("trace counts must be non-negative");
    if (!(mean_gap_s > 0.0)) throw ValidationError("mean_gap_s must be positive");
    if (max_neutral_edits < 0) throw ValidationError("max_neutral_edits must be non-negative");
}

namespace {

std::string two_digit(int i) { return (i < 10 ? "0" : "") + std::to_string(i); }

int rounded_count(double fraction, int n) { return static_cast<int>(std::lround(fraction * n)); }

}  // namespace

SolutionCorpus generate_corpus(const GeneratorConfig& config) {
    config.validate();
    Rng rng(derive_seed(config.seed, 1));
    const int n = config.n_solutions;
    const int n_flat = n - rounded_count(config.custom_block_fraction, n);
    const int n_block = n - n_flat;

    std::vector<squiral::Variants> variants(static_cast<std::size_t>(n_block));
    // Variant slots are dealt round-robin over a shuffled order so that
    // units vary in different solutions wherever the corpus is big enough.
    std::vector<int> order(static_cast<std::size_t>(n_block));
    for (int i = 0; i < n_block; ++i) order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(order);
    std::size_t cursor = 0;
    auto deal = [&](int count, auto&& apply) {
        for (int k = 0; k < count && n_block > 0; ++k) {
            auto& v = variants[static_cast<std::size_t>(order[cursor % order.size()])];
            apply(v, k);
            ++cursor;
        }
    };
    const int per_unit = rounded_count(config.variant_fraction, n_block);
    deal(rounded_count(config.nested_loop_fraction, n_block), [](squiral::Variants& v, int) { v.count = 1; });
    deal(per_unit, [](squiral::Variants& v, int k) { v.call = 1 + k % 3; });
    deal(per_unit, [](squiral::Variants& v, int k) { v.move = 1 + k % 3; });
    deal(per_unit, [](squiral::Variants& v, int k) { v.pen = 1 + k % 3; });
    deal(per_unit, [](squiral::Variants& v, int k) { v.turn = 1 + k % 3; });
    deal(per_unit, [](squiral::Variants& v, int k) { v.change = 1 + k % 3; });

    std::vector<Solution> sols;
    for (int i = 0; i < n_block; ++i)
        sols.push_back({"sol_" + two_digit(i + 1), squiral::solution(variants[static_cast<std::size_t>(i)])});
    for (int i = 0; i < n_flat; ++i)
        sols.push_back({"sol_" + two_digit(n_block + i + 1), squiral::flat_solution(8 + 2 * static_cast<int>(rng.uniform_int(0, 3)))});
    return SolutionCorpus(std::move(sols));
}

std::string TargetPath::render() const {
    std::vector<StateNode> nodes{StateNode::start()};
    for (const auto& s : states) nodes.push_back(StateNode::of(s));
    nodes.push_back(StateNode::end(outcome == FinalOutcome::working ? "WC" : "NWC"));
    return render_path(nodes);
}

TargetPath parse_target_path(std::string_view text) {
    std::vector<std::string> parts;
    std::string cur;
    for (std::size_t i = 0; i < text.size();) {
        if (text.substr(i, 3) == "⇒") {
            parts.push_back(cur);
            cur.clear();
            i += 3;
        } else if (text.substr(i, 2) == "=>") {
            parts.push_back(cur);
            cur.clear();
            i += 2;
        } else {
            if (text[i] != ' ') cur.push_back(text[i]);
            ++i;
        }
    }
    parts.push_back(cur);
    if (parts.size() < 2 || parts.front() != "S") throw ValidationError("target path must start with S");
    TargetPath t;
    if (parts.back() == "WC")
        t.outcome = FinalOutcome::working;
    else if (parts.back() == "NWC")
        t.outcome = FinalOutcome::non_working;
    else
        throw ValidationError("target path must end with WC or NWC");
    for (std::size_t i = 1; i + 1 < parts.size(); ++i) {
        std::vector<int> objs;
        for (char c : parts[i]) {
            if (c < '1' || c > '0' + squiral::kObjectives)
                throw ValidationError("bad state \"" + parts[i] + "\" in target path");
            objs.push_back(c - '0');
        }
        std::sort(objs.begin(), objs.end());
        if (objs.empty() || std::adjacent_find(objs.begin(), objs.end()) != objs.end())
            throw ValidationError("bad state \"" + parts[i] + "\" in target path");
        t.states.push_back(std::move(objs));
    }
    return t;
}

namespace {

using squiral::CodeState;

constexpr bool CodeState::*kUnits[] = {&CodeState::block, &CodeState::loop, &CodeState::count, &CodeState::move,
                                        &CodeState::move_var, &CodeState::pen, &CodeState::turn, &CodeState::change};

void normalize(CodeState& s) {
    if (s.move_var) s.move = true;
}

struct Edit {
    CodeState state;
    bool changed_unit = false;
    bool CodeState::*unit = nullptr;
};

class TraceBuilder {
public:
    TraceBuilder(const GeneratorConfig& config, std::uint64_t seed) : config_(config), rng_(seed) {
        push(CodeState{});
    }

    const CodeState& current() const { return states_.back(); }
    std::vector<int> objectives() const { return squiral::expert_objective_set(squiral::build(current())); }

    void push(const CodeState& s) {
        states_.push_back(s);
        if (times_.empty()) {
            times_.push_back(0.0);
            return;
        }
        double gap;
        if (rng_.bernoulli(config_.idle_rate))
            gap = 181.0 + 420.0 * rng_.uniform01();
        else
            gap = config_.mean_gap_s * (1.0 + config_.timestamp_jitter * (2.0 * rng_.uniform01() - 1.0));
        gap = std::max(1.0, std::round(gap * 10.0) / 10.0);
        times_.push_back(times_.back() + gap);
    }

    void neutral_edits() {
        const auto k = rng_.uniform_int(0, config_.max_neutral_edits);
        for (long long i = 0; i < k; ++i) {
            CodeState s = current();
            if (s.spare_blocks > 0 && rng_.bernoulli(0.5))
                --s.spare_blocks;
            else
                ++s.spare_blocks;
            push(s);
        }
    }

    // Moves from the current state to `target` one unit per edit, keeping
    // the expert objective set at `from` until the final edit lands on `to`.
    // Returns the unit set by the final edit, if any.
    bool CodeState::*step(CodeState target, const std::vector<int>& from, const std::vector<int>& to) {
        target.spare_blocks = current().spare_blocks;
        normalize(target);
        std::vector<bool CodeState::*> diff;
        for (auto u : kUnits)
            if (current().*u != target.*u && u != &CodeState::move) diff.push_back(u);
        if (current().move != target.move && current().move_var == target.move_var) diff.push_back(&CodeState::move);

        for (int attempt = 0; attempt < 200 && diff.size() > 1; ++attempt) {
            auto order = diff;
            rng_.shuffle(order);
            std::vector<CodeState> seq;
            CodeState s = current();
            bool ok = true;
            for (std::size_t i = 0; i < order.size() && ok; ++i) {
                CodeState next = s;
                next.*order[i] = target.*order[i];
                if (order[i] == &CodeState::move && !next.move) next.move_var = false;
                normalize(next);
                const bool last = i + 1 == order.size();
                const auto objs = squiral::expert_objective_set(squiral::build(next));
                const bool visible = !(squiral::build(next) == squiral::build(s));
                ok = visible && (last ? objs == to : objs == from);
                seq.push_back(next);
                s = next;
            }
            if (ok && s == target) {
                for (const auto& st : seq) push(st);
                return order.back();
            }
        }
        if (squiral::expert_objective_set(squiral::build(target)) != to)
            throw InvariantError("target state does not realize its objective set");
        push(target);
        return diff.empty() ? nullptr : diff.back();
    }

    void maybe_dip(bool CodeState::*unit, const std::vector<int>& objs) {
        if (!unit || !rng_.bernoulli(config_.edit_error_rate)) return;
        CodeState broken = current();
        broken.*unit = !(broken.*unit);
        if (unit == &CodeState::move && !broken.move) broken.move_var = false;
        normalize(broken);
        const auto lost = squiral::expert_objective_set(squiral::build(broken));
        if (lost == objs || !std::includes(objs.begin(), objs.end(), lost.begin(), lost.end())) return;
        const CodeState restored = current();
        push(broken);
        push(restored);
    }

    void flat_edits(int steps) {
        for (int i = 1; i <= steps; ++i) {
            CodeState s = current();
            s.flat_steps = i;
            push(s);
            if (i % 3 == 0) neutral_edits();
        }
    }

    StudentTrace finish(const std::string& student_id) const {
        std::vector<Snapshot> snaps;
        for (std::size_t i = 0; i < states_.size(); ++i)
            snaps.push_back({static_cast<int>(i), times_[i], squiral::build(states_[i])});
        return StudentTrace(student_id, std::move(snaps), true);
    }

    Rng& rng() { return rng_; }

private:
    const GeneratorConfig& config_;
    Rng rng_;
    std::vector<CodeState> states_;
    std::vector<double> times_;
};

}  // namespace

GeneratedTrace generate_trace(const GeneratorConfig& config, const TargetPath& target, const std::string& student_id,
                              std::uint64_t seed) {
    config.validate();
    TraceBuilder b(config, seed);
    b.neutral_edits();
    if (target.states.empty()) {
        b.flat_edits(static_cast<int>(6 + b.rng().uniform_int(0, 6)));
    } else {
        std::vector<int> prev;
        for (const auto& objs : target.states) {
            auto unit = b.step(squiral::state_for(objs), prev, objs);
            b.maybe_dip(unit, objs);
            b.neutral_edits();
            prev = objs;
        }
    }
    auto trace = b.finish(student_id);

    ExpertAnnotation ann(student_id, trace.size(), squiral::kObjectives);
    for (std::size_t pos = 0; pos < trace.size(); ++pos)
        for (int o : squiral::expert_objective_set(trace[pos].root)) ann.set_complete(pos, o, true);
    ann.final_outcome = target.outcome;

    const auto realized = expert_path(trace, ann);
    std::vector<StateNode> elided;
    for (auto k : elide_cycles(realized.states)) elided.push_back(realized.states[k]);
    if (render_path(elided) != target.render())
        throw InvariantError(student_id + ": generated trace realizes " + render_path(elided) + " instead of " +
                             target.render());
    return {target, std::move(trace), std::move(ann)};
}

std::vector<TargetPath> table3_expert_paths() {
    const std::vector<std::pair<const char*, int>> rows{
        {"S⇒3⇒13⇒134⇒1234⇒WC", 4}, {"S⇒3⇒34⇒134⇒1234⇒WC", 4}, {"S⇒WC", 4},
        {"S⇒3⇒13⇒134⇒WC", 3},      {"S⇒3⇒34⇒134⇒WC", 5},      {"S⇒1⇒134⇒WC", 5},
        {"S⇒3⇒34⇒NWC", 1},         {"S⇒1⇒13⇒NWC", 1},
    };
    std::vector<TargetPath> out;
    for (const auto& [path, count] : rows)
        for (int i = 0; i < count; ++i) out.push_back(parse_target_path(path));
    return out;
}

std::vector<TargetPath> in_distribution_paths(int n, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 7));
    std::vector<TargetPath> out;
    for (int i = 0; i < n; ++i) {
        TargetPath t;
        std::vector<int> rest{2, 3, 4};
        rng.shuffle(rest);
        std::vector<int> cur{1};
        t.states.push_back(cur);
        std::size_t stop = rest.size();
        if (rng.bernoulli(0.1)) {
            stop = static_cast<std::size_t>(rng.uniform_int(0, 2));
            t.outcome = FinalOutcome::non_working;
        }
        for (std::size_t k = 0; k < stop; ++k) {
            cur.push_back(rest[k]);
            std::sort(cur.begin(), cur.end());
            t.states.push_back(cur);
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<StudentTrace> GeneratedCohort::traces() const {
    std::vector<StudentTrace> out;
    for (const auto& g : items) out.push_back(g.trace);
    return out;
}

std::map<std::string, ExpertAnnotation> GeneratedCohort::truth() const {
    std::map<std::string, ExpertAnnotation> out;
    for (const auto& g : items) out.emplace(g.trace.student_id(), g.annotation);
    return out;
}

GeneratedCohort generate_cohort(const GeneratorConfig& config, const std::vector<TargetPath>& paths,
                                const std::string& id_prefix, std::uint64_t stream) {
    GeneratedCohort c;
    for (std::size_t i = 0; i < paths.size(); ++i)
        c.items.push_back(generate_trace(config, paths[i], id_prefix + two_digit(static_cast<int>(i + 1)),
                                         derive_seed(config.seed, stream * 1000 + i)));
    return c;
}

GeneratedCohort generate_evaluation_traces(const GeneratorConfig& config) {
    config.validate();
    std::vector<TargetPath> paths;
    if (config.cohort == Cohort::table3) {
        const auto base = table3_expert_paths();
        for (int i = 0; i < config.n_traces; ++i) paths.push_back(base[static_cast<std::size_t>(i) % base.size()]);
    } else {
        paths = in_distribution_paths(config.n_traces, derive_seed(config.seed, 2));
    }
    return generate_cohort(config, paths, "student_", 2);
}

GeneratedCohort generate_training_traces(const GeneratorConfig& config) {
    config.validate();
    return generate_cohort(config, in_distribution_paths(config.n_training_traces, derive_seed(config.seed, 3)),
                           "train_", 3);
}

}  // namespace ddfb
