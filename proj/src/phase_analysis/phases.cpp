#include "ddfb/phases.hpp"

#include "ddfb/errors.hpp"
#include "ddfb/text.hpp"

namespace ddfb {

PhaseBoundaries segment_phases(const StudentTrace& trace, const EventLog& log) {
    if (log.statuses.size() != trace.size()) throw ValidationError(trace.student_id() + ": log does not match trace");
    PhaseBoundaries b;
    b.start = trace.start_time();
    b.end = trace.end_time();

    int a_pos = -1;
    for (const auto& e : log.events)
        if (e.kind == EventKind::completed) a_pos = std::max(a_pos, e.position);
    if (a_pos < 0) {
        b.whole_trace_a = true;
        b.a_end = b.b_end = b.end;
        b.empty_b = b.empty_c = true;
        return b;
    }
    b.a_end = trace[static_cast<std::size_t>(a_pos)].timestamp;

    int b_pos = -1;
    for (const auto& e : log.events)
        if (e.kind != EventKind::completed && e.position > a_pos) b_pos = std::max(b_pos, e.position);
    b.b_end = b_pos < 0 ? b.a_end : trace[static_cast<std::size_t>(b_pos)].timestamp;
    b.empty_b = b.b_end == b.a_end;
    b.empty_c = b.end == b.b_end;
    return b;
}

ActiveIdle active_idle(const StudentTrace& trace, double lo, double hi, double threshold_s) {
    if (threshold_s < 0.0) throw ValidationError("idle threshold must be non-negative");
    ActiveIdle out;
    for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
        const double t = trace[k].timestamp;
        if (t < lo || t >= hi) continue;
        const double gap = trace[k + 1].timestamp - t;
        (gap > threshold_s ? out.idle : out.active) += gap;
    }
    return out;
}

PhaseReport phase_report(const std::vector<StudentTrace>& traces, const std::map<std::string, EventLog>& logs,
                         const std::vector<FirstDetectionRecord>& records, std::size_t num_objectives,
                         double idle_threshold_s) {
    if (num_objectives == 0) throw ValidationError("phase report needs at least one objective");
    std::map<std::string, std::vector<const FirstDetectionRecord*>> by_student;
    for (const auto& r : records) by_student[r.student_id].push_back(&r);

    PhaseReport rep;
    rep.idle_threshold_s = idle_threshold_s;
    for (const auto& t : traces) {
        auto log = logs.find(t.student_id());
        if (log == logs.end()) throw ValidationError(t.student_id() + ": no event log");
        const auto& recs = by_student[t.student_id()];
        if (recs.size() != num_objectives)
            throw ValidationError(t.student_id() + ": expected " + std::to_string(num_objectives) +
                                  " first-detection records, got " + std::to_string(recs.size()));
        PhaseRow row;
        row.student_id = t.student_id();
        row.bounds = segment_phases(t, log->second);
        const auto& b = row.bounds;
        // gap-start intervals [start, a_end), [a_end, b_end), [b_end, end)
        // tile the trace because every boundary is a snapshot timestamp
        row.a = active_idle(t, b.start, b.a_end, idle_threshold_s);
        row.b = active_idle(t, b.a_end, b.b_end, idle_threshold_s);
        row.c = active_idle(t, b.b_end, b.end, idle_threshold_s);

        double correct = 0, incorrect = 0, early = 0, late = 0;
        for (const auto* r : recs) {
            switch (r->type) {
                case DetectionType::CD:
                case DetectionType::CND: ++correct; break;
                case DetectionType::ID:
                case DetectionType::IND: ++incorrect; break;
                case DetectionType::E: ++early; break;
                case DetectionType::L: ++late; break;
            }
        }
        const auto n = static_cast<double>(num_objectives);
        row.correct_ratio = correct / n;
        row.incorrect_ratio = incorrect / n;
        row.early_ratio = early / n;
        row.late_ratio = late / n;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

namespace {

std::string secs(double v) { return format_fixed(v, 3); }
std::string ratio(double v) { return format_fixed(v, 4); }
std::string flag(bool v) { return v ? "1" : "0"; }

}  // namespace

std::string phase_report_csv(const PhaseReport& rep) {
    std::string out = csv_row({"student_id", "trace_start_s", "a_end_s", "b_end_s", "trace_end_s", "a_seconds",
                               "b_seconds", "c_seconds", "a_active_s", "a_idle_s", "b_active_s", "b_idle_s",
                               "c_active_s", "c_idle_s", "whole_trace_a", "empty_b", "empty_c", "correct_ratio",
                               "incorrect_ratio", "early_ratio", "late_ratio"});
    for (const auto& r : rep.rows) {
        const auto& b = r.bounds;
        out += csv_row({r.student_id, secs(b.start), secs(b.a_end), secs(b.b_end), secs(b.end), secs(b.a_seconds()),
                        secs(b.b_seconds()), secs(b.c_seconds()), secs(r.a.active), secs(r.a.idle), secs(r.b.active),
                        secs(r.b.idle), secs(r.c.active), secs(r.c.idle), flag(b.whole_trace_a), flag(b.empty_b),
                        flag(b.empty_c), ratio(r.correct_ratio), ratio(r.incorrect_ratio), ratio(r.early_ratio),
                        ratio(r.late_ratio)});
    }
    return out;
}

std::string scatter_correct_vs_active_csv(const PhaseReport& rep) {
    std::string out = csv_row({"student_id", "phase_a_correct_ratio", "phase_a_active_minutes"});
    for (const auto& r : rep.rows)
        out += csv_row({r.student_id, ratio(r.correct_ratio), format_fixed(r.a.active / 60.0, 3)});
    return out;
}

std::string scatter_early_vs_idle_csv(const PhaseReport& rep) {
    std::string out = csv_row({"student_id", "phase_a_early_ratio", "phase_a_idle_minutes"});
    for (const auto& r : rep.rows)
        out += csv_row({r.student_id, ratio(r.early_ratio), format_fixed(r.a.idle / 60.0, 3)});
    return out;
}

std::string scatter_ratios_vs_bc_csv(const PhaseReport& rep) {
    std::string out = csv_row({"student_id", "phase_a_correct_ratio", "phase_a_incorrect_ratio", "phase_a_early_ratio",
                               "phase_a_late_ratio", "phase_b_active_minutes", "phase_b_idle_minutes",
                               "phase_c_active_minutes", "phase_c_idle_minutes"});
    for (const auto& r : rep.rows)
        out += csv_row({r.student_id, ratio(r.correct_ratio), ratio(r.incorrect_ratio), ratio(r.early_ratio),
                        ratio(r.late_ratio), format_fixed(r.b.active / 60.0, 3), format_fixed(r.b.idle / 60.0, 3),
                        format_fixed(r.c.active / 60.0, 3), format_fixed(r.c.idle / 60.0, 3)});
    return out;
}

}  // namespace ddfb
