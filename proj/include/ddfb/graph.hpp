#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddfb/annotation.hpp"
#include "ddfb/replay.hpp"

namespace ddfb {

enum class GraphSource { expert, system };
std::string to_string(GraphSource s);

struct StateNode {
    enum class Kind { start, objective_set, terminal };
    Kind kind = Kind::start;
    std::vector<int> objectives;  // sorted; empty for start and terminals
    std::string terminal;         // WC, NWC or END

    static StateNode start() { return {}; }
    static StateNode of(std::vector<int> objectives);  // empty set gives start
    static StateNode end(std::string label);

    bool is_terminal() const { return kind == Kind::terminal; }
    // "S", "134", "WC"
    std::string label() const;
    // True when every objective of this state is also in `other`.
    bool subset_of(const StateNode& other) const;

    friend bool operator==(const StateNode&, const StateNode&) = default;
    // start, then objective sets by size and ids, then terminals
    friend bool operator<(const StateNode& a, const StateNode& b);
};

struct StudentPath {
    std::string student_id;
    std::vector<StateNode> states;
    std::vector<double> entry_times;  // seconds from trace start, one per state
};

// Expert path from the truth matrix; needs final_outcome for WC/NWC.
StudentPath expert_path(const StudentTrace& trace, const ExpertAnnotation& truth);
// System path from per-snapshot statuses (complete objectives only).
StudentPath system_path(const EventLog& log);

std::string render_path(const std::vector<StateNode>& states);

struct Transition {
    StateNode from;
    StateNode to;
    long long weight = 0;       // distinct students
    long long occurrences = 0;  // raw count
    bool backward = false;
    std::optional<double> total_seconds;
};

class TransitionGraph {
public:
    TransitionGraph() = default;
    // Throws ValidationError on an empty path list or a path that does not
    // start at S and end at a terminal.
    TransitionGraph(GraphSource source, std::vector<StudentPath> paths, std::size_t population);

    GraphSource source() const { return source_; }
    std::size_t population() const { return population_; }
    const std::vector<StudentPath>& paths() const { return paths_; }
    const std::vector<StateNode>& nodes() const { return nodes_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    long long min_weight() const { return min_weight_; }
    bool forward_only() const { return forward_only_; }

    TransitionGraph with_min_weight(long long w) const;
    TransitionGraph without_backward() const;
    TransitionGraph with_paths(std::vector<StudentPath> paths) const;

private:
    void rebuild();

    GraphSource source_ = GraphSource::expert;
    std::size_t population_ = 0;
    std::vector<StudentPath> paths_;
    long long min_weight_ = 0;
    bool forward_only_ = false;
    std::vector<StateNode> nodes_;
    std::vector<Transition> transitions_;
};

TransitionGraph aggregate(GraphSource source, std::vector<StudentPath> paths, std::size_t population);

// Drops edges with weight < ceil(min_fraction * population).
TransitionGraph simplify_phase1(const TransitionGraph& g, double min_fraction = 0.10);
// Drops backward edges.
TransitionGraph simplify_phase2(const TransitionGraph& g);
// Elides cycles in every student path and re-aggregates.
TransitionGraph simplify_phase3(const TransitionGraph& g);

// Removes the states between two occurrences of the same state, shortest
// such cycle first (leftmost on ties), until no state repeats; then drops
// states that are not contained in their non-terminal successor.
std::vector<std::size_t> elide_cycles(const std::vector<StateNode>& states);  // kept positions

struct FrequentPath {
    std::vector<StateNode> states;
    long long frequency = 0;
};

// Identical full paths grouped; frequency >= min_count; sorted by
// frequency (descending) then rendered path.
std::vector<FrequentPath> frequent_paths(const TransitionGraph& g, long long min_count);

struct DotStyle {
    double penwidth_base = 1.0;
    double penwidth_per_student = 0.5;
    bool weight_labels = true;
    bool time_labels = false;  // minutes spent along each edge
};

std::string export_dot(const TransitionGraph& g, const DotStyle& style = {});
nlohmann::ordered_json graph_to_json(const TransitionGraph& g);
// path id, arrow-joined states, frequency
std::string paths_csv(const std::vector<FrequentPath>& paths, char id_prefix);

}  // namespace ddfb
