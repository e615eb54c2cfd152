#include "ddfb/replay.hpp"

#include <istream>
#include <ostream>

#include "ddfb/errors.hpp"

namespace ddfb {

using nlohmann::ordered_json;

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::completed: return "completed";
        case EventKind::broken: return "broken";
        case EventKind::recompleted: return "recompleted";
    }
    return "?";
}

EventKind event_kind_from_string(std::string_view s) {
    if (s == "completed") return EventKind::completed;
    if (s == "broken") return EventKind::broken;
    if (s == "recompleted") return EventKind::recompleted;
    throw ValidationError("unknown event kind \"" + std::string(s) + "\"");
}

namespace {

std::optional<EventKind> transition(ObjectiveStatus from, ObjectiveStatus to) {
    if (from == to) return std::nullopt;
    if (to == ObjectiveStatus::broken) return EventKind::broken;
    if (to == ObjectiveStatus::complete)
        return from == ObjectiveStatus::inactive ? EventKind::completed : EventKind::recompleted;
    throw InvariantError("objective returned to inactive");
}

}  // namespace

StepResult step(const StatusVector& prior, const Snapshot& snapshot, int position, const FeatureSet& features,
                const ObjectiveSet& objectives) {
    StepResult out;
    out.statuses = objective_statuses(feature_state(snapshot.root, features), prior, objectives);
    for (std::size_t i = 0; i < objectives.size(); ++i)
        if (auto kind = transition(prior[i], out.statuses[i]))
            out.events.push_back({snapshot.index, position, static_cast<int>(i + 1), *kind});
    return out;
}

EventLog replay(const StudentTrace& trace, const FeatureSet& features, const ObjectiveSet& objectives) {
    objectives.check_features(features.size());
    EventLog log;
    log.student_id = trace.student_id();
    log.num_objectives = objectives.size();
    StatusVector status(objectives.size(), ObjectiveStatus::inactive);
    for (std::size_t pos = 0; pos < trace.size(); ++pos) {
        const auto& snap = trace[pos];
        auto state = feature_state(snap.root, features);
        StatusVector next = objective_statuses(state, status, objectives);
        for (std::size_t i = 0; i < objectives.size(); ++i)
            if (auto kind = transition(status[i], next[i]))
                log.events.push_back({snap.index, static_cast<int>(pos), static_cast<int>(i + 1), *kind});
        status = next;
        log.snapshot_indices.push_back(snap.index);
        log.timestamps.push_back(snap.timestamp);
        log.states.push_back(std::move(state));
        log.statuses.push_back(std::move(next));
    }
    return log;
}

void write_events(std::ostream& out, const EventLog& log) {
    for (const auto& e : log.events) {
        ordered_json rec;
        rec["student_id"] = log.student_id;
        rec["snapshot_index"] = e.snapshot_index;
        rec["objective_id"] = e.objective_id;
        rec["kind"] = to_string(e.kind);
        out << rec.dump() << '\n';
    }
}

std::map<std::string, std::vector<FeedbackEvent>> read_events(std::istream& in) {
    std::map<std::string, std::vector<FeedbackEvent>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = "event line " + std::to_string(lineno);
        ordered_json rec;
        try {
            rec = parse_json_document(line);
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
        if (!rec.is_object()) throw ParseError(where + ": expected an object");
        auto need = [&](const char* key) -> const ordered_json& {
            if (!rec.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
            return rec[key];
        };
        const auto& sid = need("student_id");
        const auto& idx = need("snapshot_index");
        const auto& obj = need("objective_id");
        const auto& kind = need("kind");
        if (!sid.is_string() || !idx.is_number_integer() || !obj.is_number_integer() || !kind.is_string())
            throw ParseError(where + ": field of the wrong type");
        out[sid.get<std::string>()].push_back(
            {idx.get<int>(), -1, obj.get<int>(), event_kind_from_string(kind.get<std::string>())});
    }
    return out;
}

EventLog rebuild_log(const StudentTrace& trace, std::size_t num_objectives, std::vector<FeedbackEvent> events) {
    EventLog log;
    log.student_id = trace.student_id();
    log.num_objectives = num_objectives;
    for (auto& e : events) {
        e.position = trace.position_of(e.snapshot_index);
        if (e.position < 0)
            throw ValidationError(trace.student_id() + ": event at unknown snapshot " + std::to_string(e.snapshot_index));
        if (e.objective_id < 1 || static_cast<std::size_t>(e.objective_id) > num_objectives)
            throw ValidationError(trace.student_id() + ": event for unknown objective " + std::to_string(e.objective_id));
    }
    std::stable_sort(events.begin(), events.end(), [](const FeedbackEvent& a, const FeedbackEvent& b) {
        return a.position != b.position ? a.position < b.position : a.objective_id < b.objective_id;
    });

    StatusVector status(num_objectives, ObjectiveStatus::inactive);
    std::size_t k = 0;
    for (std::size_t pos = 0; pos < trace.size(); ++pos) {
        for (; k < events.size() && events[k].position == static_cast<int>(pos); ++k) {
            auto& s = status[static_cast<std::size_t>(events[k].objective_id - 1)];
            const auto kind = events[k].kind;
            const bool ok = (kind == EventKind::completed && s == ObjectiveStatus::inactive) ||
                            (kind == EventKind::broken && s == ObjectiveStatus::complete) ||
                            (kind == EventKind::recompleted && s == ObjectiveStatus::broken);
            if (!ok)
                throw ValidationError(trace.student_id() + ": " + to_string(kind) + " event for objective " +
                                      std::to_string(events[k].objective_id) + " at snapshot " +
                                      std::to_string(events[k].snapshot_index) + " while " + to_string(s));
            s = kind == EventKind::broken ? ObjectiveStatus::broken : ObjectiveStatus::complete;
        }
        log.snapshot_indices.push_back(trace[pos].index);
        log.timestamps.push_back(trace[pos].timestamp);
        log.statuses.push_back(status);
    }
    log.events = std::move(events);
    return log;
}

}  // namespace ddfb
