#pragma once

#include <map>
#include <string>
#include <vector>

#include "ddfb/evaluation.hpp"

namespace ddfb {

inline constexpr double kDefaultIdleGapSeconds = 180.0;

// Boundaries are absolute trace timestamps. A = [start, a_end],
// B = (a_end, b_end], C = (b_end, end].
struct PhaseBoundaries {
    double start = 0.0;
    double a_end = 0.0;
    double b_end = 0.0;
    double end = 0.0;
    bool whole_trace_a = false;  // no first-time detection at all
    bool empty_b = false;
    bool empty_c = false;

    double a_seconds() const { return a_end - start; }
    double b_seconds() const { return b_end - a_end; }
    double c_seconds() const { return end - b_end; }
};

PhaseBoundaries segment_phases(const StudentTrace& trace, const EventLog& log);

struct ActiveIdle {
    double active = 0.0;
    double idle = 0.0;
};

// Sums the inter-snapshot gaps whose start lies in [lo, hi); a gap longer
// than threshold_s is idle.
ActiveIdle active_idle(const StudentTrace& trace, double lo, double hi, double threshold_s = kDefaultIdleGapSeconds);

struct PhaseRow {
    std::string student_id;
    PhaseBoundaries bounds;
    ActiveIdle a, b, c;
    double correct_ratio = 0.0;    // (CD + CND) / objectives
    double incorrect_ratio = 0.0;  // (ID + IND) / objectives
    double early_ratio = 0.0;
    double late_ratio = 0.0;
};

struct PhaseReport {
    double idle_threshold_s = kDefaultIdleGapSeconds;
    std::vector<PhaseRow> rows;
};

// `records` must hold one record per objective for every trace.
PhaseReport phase_report(const std::vector<StudentTrace>& traces, const std::map<std::string, EventLog>& logs,
                         const std::vector<FirstDetectionRecord>& records, std::size_t num_objectives,
                         double idle_threshold_s = kDefaultIdleGapSeconds);

std::string phase_report_csv(const PhaseReport& report);
// phase-A correct ratio against phase-A active time
std::string scatter_correct_vs_active_csv(const PhaseReport& report);
// phase-A early ratio against phase-A idle time
std::string scatter_early_vs_idle_csv(const PhaseReport& report);
// phase-A ratios against phase-B and phase-C active and idle time
std::string scatter_ratios_vs_bc_csv(const PhaseReport& report);

}  // namespace ddfb
