#include "ddfb/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ddfb/errors.hpp"
#include "ddfb/text.hpp"

namespace ddfb {

std::string to_string(GraphSource s) { return s == GraphSource::expert ? "expert" : "system"; }

StateNode StateNode::of(std::vector<int> objectives) {
    if (objectives.empty()) return start();
    std::sort(objectives.begin(), objectives.end());
    objectives.erase(std::unique(objectives.begin(), objectives.end()), objectives.end());
    StateNode n;
    n.kind = Kind::objective_set;
    n.objectives = std::move(objectives);
    return n;
}

StateNode StateNode::end(std::string label) {
    StateNode n;
    n.kind = Kind::terminal;
    n.terminal = std::move(label);
    return n;
}

std::string StateNode::label() const {
    switch (kind) {
        case Kind::start: return "S";
        case Kind::terminal: return terminal;
        case Kind::objective_set: break;
    }
    std::string out;
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        // ids above 9 would be ambiguous when concatenated
        if (i && (objectives[i] > 9 || objectives[i - 1] > 9)) out.push_back(',');
        out += std::to_string(objectives[i]);
    }
    return out;
}

bool StateNode::subset_of(const StateNode& other) const {
    return std::includes(other.objectives.begin(), other.objectives.end(), objectives.begin(), objectives.end());
}

bool operator<(const StateNode& a, const StateNode& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.objectives.size() != b.objectives.size()) return a.objectives.size() < b.objectives.size();
    if (a.objectives != b.objectives) return a.objectives < b.objectives;
    return a.terminal < b.terminal;
}

namespace {

void push_state(StudentPath& p, StateNode s, double t) {
    if (!p.states.empty() && p.states.back() == s) return;
    p.states.push_back(std::move(s));
    p.entry_times.push_back(t);
}

}  // namespace

StudentPath expert_path(const StudentTrace& trace, const ExpertAnnotation& truth) {
    if (truth.num_snapshots() != trace.size())
        throw ValidationError(trace.student_id() + ": annotation and trace lengths differ");
    if (!truth.final_outcome) throw ValidationError(trace.student_id() + ": expert path needs final_outcome");
    StudentPath p;
    p.student_id = trace.student_id();
    const double t0 = trace.start_time();
    push_state(p, StateNode::start(), 0.0);
    for (std::size_t pos = 0; pos < trace.size(); ++pos)
        push_state(p, StateNode::of(truth.complete_set(pos)), trace[pos].timestamp - t0);
    push_state(p, StateNode::end(*truth.final_outcome == FinalOutcome::working ? "WC" : "NWC"), trace.end_time() - t0);
    return p;
}

StudentPath system_path(const EventLog& log) {
    if (log.statuses.empty()) throw ValidationError(log.student_id + ": empty event log");
    StudentPath p;
    p.student_id = log.student_id;
    const double t0 = log.timestamps.front();
    push_state(p, StateNode::start(), 0.0);
    for (std::size_t pos = 0; pos < log.statuses.size(); ++pos) {
        std::vector<int> done;
        for (std::size_t o = 0; o < log.statuses[pos].size(); ++o)
            if (log.statuses[pos][o] == ObjectiveStatus::complete) done.push_back(static_cast<int>(o + 1));
        push_state(p, StateNode::of(std::move(done)), log.timestamps[pos] - t0);
    }
    push_state(p, StateNode::end("END"), log.timestamps.back() - t0);
    return p;
}

std::string render_path(const std::vector<StateNode>& states) {
    std::vector<std::string> labels;
    for (const auto& s : states) labels.push_back(s.label());
    return join(labels, "⇒");
}

TransitionGraph::TransitionGraph(GraphSource source, std::vector<StudentPath> paths, std::size_t population)
    : source_(source), population_(population), paths_(std::move(paths)) {
    if (paths_.empty()) throw ValidationError("cannot build a transition graph from zero paths");
    if (population_ == 0) throw ValidationError("population must be positive");
    const std::string terminal_a = source_ == GraphSource::expert ? "WC" : "END";
    const std::string terminal_b = source_ == GraphSource::expert ? "NWC" : "END";
    for (const auto& p : paths_) {
        if (p.states.size() < 2 || !(p.states.front() == StateNode::start()) || !p.states.back().is_terminal())
            throw ValidationError(p.student_id + ": path must start at S and end at a terminal");
        if (p.states.back().terminal != terminal_a && p.states.back().terminal != terminal_b)
            throw ValidationError(p.student_id + ": terminal " + p.states.back().terminal + " does not belong to a " +
                                  to_string(source_) + " graph");
        if (p.entry_times.size() != p.states.size())
            throw ValidationError(p.student_id + ": one entry time per state expected");
        for (std::size_t k = 1; k + 1 < p.states.size(); ++k)
            if (p.states[k].is_terminal())
                throw ValidationError(p.student_id + ": terminal inside a path");
    }
    rebuild();
}

void TransitionGraph::rebuild() {
    struct Acc {
        std::set<std::string> students;
        long long occurrences = 0;
        double seconds = 0.0;
    };
    std::map<std::pair<StateNode, StateNode>, Acc> acc;
    for (const auto& p : paths_) {
        for (std::size_t k = 0; k + 1 < p.states.size(); ++k) {
            auto& a = acc[{p.states[k], p.states[k + 1]}];
            a.students.insert(p.student_id);
            ++a.occurrences;
            a.seconds += p.entry_times[k + 1] - p.entry_times[k];
        }
    }
    std::vector<Transition> kept;
    for (const auto& [key, a] : acc) {
        Transition t{key.first, key.second, static_cast<long long>(a.students.size()), a.occurrences, false, a.seconds};
        t.backward = !t.to.is_terminal() && !t.from.subset_of(t.to);
        if (t.weight < min_weight_) continue;
        if (forward_only_ && t.backward) continue;
        kept.push_back(std::move(t));
    }

    std::set<StateNode> reach{StateNode::start()};
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto& t : kept)
            if (reach.count(t.from) && reach.insert(t.to).second) grew = true;
    }
    transitions_.clear();
    for (auto& t : kept)
        if (reach.count(t.from)) transitions_.push_back(std::move(t));
    nodes_.assign(reach.begin(), reach.end());
}

TransitionGraph TransitionGraph::with_min_weight(long long w) const {
    TransitionGraph g = *this;
    g.min_weight_ = std::max(min_weight_, w);
    g.rebuild();
    return g;
}

TransitionGraph TransitionGraph::without_backward() const {
    TransitionGraph g = *this;
    g.forward_only_ = true;
    g.rebuild();
    return g;
}

TransitionGraph TransitionGraph::with_paths(std::vector<StudentPath> paths) const {
    TransitionGraph g = *this;
    g.paths_ = std::move(paths);
    g.rebuild();
    return g;
}

TransitionGraph aggregate(GraphSource source, std::vector<StudentPath> paths, std::size_t population) {
    return TransitionGraph(source, std::move(paths), population);
}

TransitionGraph simplify_phase1(const TransitionGraph& g, double min_fraction) {
    if (min_fraction < 0.0 || min_fraction > 1.0) throw ValidationError("min_fraction must lie in [0, 1]");
    const double raw = min_fraction * static_cast<double>(g.population());
    // 0.1 * 30 is 3.0000000000000004 in binary; don't let that become 4
    const auto threshold = static_cast<long long>(std::ceil(raw - 1e-9));
    return g.with_min_weight(threshold);
}

TransitionGraph simplify_phase2(const TransitionGraph& g) { return g.without_backward(); }

std::vector<std::size_t> elide_cycles(const std::vector<StateNode>& states) {
    std::vector<std::size_t> keep(states.size());
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;

    while (true) {
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < keep.size(); ++i) {
            for (std::size_t j = i + 1; j < keep.size(); ++j) {
                if (!(states[keep[i]] == states[keep[j]])) continue;
                if (bj == 0 || j - i < bj - bi) {
                    bi = i;
                    bj = j;
                }
                break;  // only the nearest repeat of position i matters
            }
        }
        if (bj == 0) break;
        keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(bi + 1), keep.begin() + static_cast<std::ptrdiff_t>(bj + 1));
    }

    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t k = 1; k + 1 < keep.size(); ++k) {
            const auto& cur = states[keep[k]];
            const auto& next = states[keep[k + 1]];
            if (next.is_terminal() || cur.subset_of(next)) continue;
            keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(k));
            changed = true;
            break;
        }
    }
    return keep;
}

TransitionGraph simplify_phase3(const TransitionGraph& g) {
    std::vector<StudentPath> paths;
    for (const auto& p : g.paths()) {
        StudentPath q;
        q.student_id = p.student_id;
        for (auto k : elide_cycles(p.states)) {
            q.states.push_back(p.states[k]);
            q.entry_times.push_back(p.entry_times[k]);
        }
        paths.push_back(std::move(q));
    }
    return g.with_paths(std::move(paths));
}

std::vector<FrequentPath> frequent_paths(const TransitionGraph& g, long long min_count) {
    std::map<std::string, FrequentPath> groups;
    for (const auto& p : g.paths()) {
        auto& f = groups[render_path(p.states)];
        f.states = p.states;
        ++f.frequency;
    }
    std::vector<std::pair<std::string, FrequentPath>> sorted(groups.begin(), groups.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.second.frequency > b.second.frequency; });
    std::vector<FrequentPath> out;
    for (auto& [key, f] : sorted)
        if (f.frequency >= min_count) out.push_back(std::move(f));
    return out;
}

std::string paths_csv(const std::vector<FrequentPath>& paths, char id_prefix) {
    std::string out = csv_row({"path_id", "path", "frequency"});
    for (std::size_t i = 0; i < paths.size(); ++i)
        out += csv_row({std::string(1, id_prefix) + std::to_string(i + 1), render_path(paths[i].states),
                        std::to_string(paths[i].frequency)});
    return out;
}

}  // namespace ddfb
