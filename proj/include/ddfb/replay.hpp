#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ddfb/objectives.hpp"
#include "ddfb/trace.hpp"

namespace ddfb {

enum class EventKind { completed, broken, recompleted };
std::string to_string(EventKind k);
EventKind event_kind_from_string(std::string_view s);

struct FeedbackEvent {
    int snapshot_index = 0;
    int position = -1;  // trace position, -1 until resolved against a trace
    int objective_id = 0;
    EventKind kind = EventKind::completed;

    friend bool operator==(const FeedbackEvent&, const FeedbackEvent&) = default;
};

struct StepResult {
    StatusVector statuses;
    std::vector<FeedbackEvent> events;  // ordered by objective id
};

StepResult step(const StatusVector& prior, const Snapshot& snapshot, int position, const FeatureSet& features,
                const ObjectiveSet& objectives);

// Per-snapshot statuses and the feedback stream of one trace.
struct EventLog {
    std::string student_id;
    std::size_t num_objectives = 0;
    std::vector<int> snapshot_indices;
    std::vector<double> timestamps;
    std::vector<FeatureState> states;     // empty when rebuilt from an event file
    std::vector<StatusVector> statuses;   // one per snapshot
    std::vector<FeedbackEvent> events;

    const StatusVector& final_statuses() const { return statuses.back(); }
};

EventLog replay(const StudentTrace& trace, const FeatureSet& features, const ObjectiveSet& objectives);

// One JSON object per event: {student_id, snapshot_index, objective_id, kind}.
void write_events(std::ostream& out, const EventLog& log);

// Events grouped by student in file order. Positions stay -1.
std::map<std::string, std::vector<FeedbackEvent>> read_events(std::istream& in);

// Rebuilds per-snapshot statuses from an event stream. Throws
// ValidationError when an event names an unknown snapshot or objective or the
// kinds do not follow the status machine.
EventLog rebuild_log(const StudentTrace& trace, std::size_t num_objectives, std::vector<FeedbackEvent> events);

}  // namespace ddfb
