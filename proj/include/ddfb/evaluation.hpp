#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ddfb/annotation.hpp"
#include "ddfb/replay.hpp"

namespace ddfb {

enum class Tag { TP, TN, FP, FN };
std::string to_string(Tag t);

struct TaggedEvent {
    std::string student_id;
    int objective_id = 0;
    int snapshot_index = 0;
    int position = 0;
    Tag tag = Tag::TP;
    std::optional<EventKind> kind;  // absent for a missed expert completion
};

// Completion events are checked against the expert matrix within
// +-tolerance_edits positions, broken events at their own position. Expert
// completions with no system completion in the window become FN.
std::vector<TaggedEvent> tag_events(const EventLog& log, const ExpertAnnotation& truth, int tolerance_edits);

struct ConfusionCounts {
    long long tp = 0;
    long long tn = 0;
    long long fp = 0;
    long long fn = 0;

    long long total() const { return tp + tn + fp + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o);
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts count_tags(const std::vector<TaggedEvent>& tagged);

// Ratios with a zero denominator stay empty.
struct MetricsReport {
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> tnr;
    std::optional<double> fpr;
    std::optional<double> fnr;
};

MetricsReport confusion_metrics(const ConfusionCounts& c);

enum class DetectionType { CD, CND, ID, IND, E, L };
inline constexpr std::array<DetectionType, 6> kDetectionTypes{DetectionType::CD, DetectionType::CND,
                                                              DetectionType::ID, DetectionType::IND,
                                                              DetectionType::E,  DetectionType::L};
std::string to_string(DetectionType t);
std::optional<DetectionType> detection_type_from_string(std::string_view s);
bool is_faulty(DetectionType t);

// t_s: first system completion, t_e: first expert completion (same axis).
DetectionType classify_detection(std::optional<long long> t_s, std::optional<long long> t_e);

struct FirstDetectionRecord {
    std::string student_id;
    int objective_id = 0;
    std::optional<int> system_index;
    std::optional<int> expert_index;
    DetectionType type = DetectionType::CND;
};

// One record per objective. Comparison uses trace positions; the record
// reports snapshot indices.
std::vector<FirstDetectionRecord> classify_first_detections(const EventLog& log, const StudentTrace& trace,
                                                            const ExpertAnnotation& truth);

struct DetectionSummary {
    std::map<DetectionType, long long> counts;
    long long total = 0;
    std::optional<double> fully_incorrect;      // (ID+IND)/total
    std::optional<double> partially_incorrect;  // (E+L)/total
    std::optional<double> strictly_correct;     // (CD+CND)/total
};

DetectionSummary detection_summary(const std::vector<FirstDetectionRecord>& records);

struct TimingOffsetStats {
    std::optional<double> near_miss;  // (E+L)/(CD+E+L)
    long long reclassified = 0;       // E/L first completions that had been tagged TP
    ConfusionCounts strict_counts;    // those completions counted as FP instead
    MetricsReport strict_metrics;
};

// `tagged` is the tagging of the same logs the records came from.
TimingOffsetStats timing_offset_stats(const std::vector<FirstDetectionRecord>& records,
                                      const std::vector<TaggedEvent>& tagged);

struct ImpactRow {
    DetectionType type = DetectionType::CD;
    long long count = 0;
    std::map<int, long long> per_objective;
    std::optional<long long> impacted;  // faulty types only
    std::optional<double> ratio;
};

struct ImpactCooccurrence {
    ImpactType impact = ImpactType::IPB;
    long long count = 0;
    std::set<DetectionType> detection_types;
};

struct ImpactTable {
    std::vector<ImpactRow> rows;  // kDetectionTypes order
    std::vector<ImpactCooccurrence> cooccurrences;  // IPB, ITS, ES
    long long faulty_total = 0;
    long long faulty_impacted = 0;
};

// A faulty record is impacted when its student carries an impact linked to
// that record's type. An impact without an entry in the annotation's links
// is linked to every faulty type. Each (student, impact, type) link counts once in the
// co-occurrence table, and only when the student has a record of that type.
ImpactTable impact_tables(const std::vector<FirstDetectionRecord>& records,
                          const std::map<std::string, ExpertAnnotation>& truth);

struct ImpactFlag {
    ImpactType impact = ImpactType::IPB;
    std::vector<int> snapshot_indices;  // triggering snapshots
    std::string evidence;
};

struct HeuristicConfig {
    double its_alpha = 0.5;
};

std::vector<ImpactFlag> flag_impacts_heuristic(const StudentTrace& trace, const EventLog& log,
                                               const ExpertAnnotation& truth,
                                               const std::vector<FirstDetectionRecord>& records,
                                               const HeuristicConfig& config = {});

// "31.03%" for decimals = 2, "31%" for decimals = 0.
std::string format_percent(double fraction, int decimals);

std::string tagged_events_csv(const std::vector<TaggedEvent>& tagged);
std::string metrics_csv(const ConfusionCounts& counts, const MetricsReport& m, const std::string& mode);
std::string detections_csv(const std::vector<FirstDetectionRecord>& records);
std::string impact_table_csv(const ImpactTable& table, std::size_t num_objectives);
std::string cooccurrence_csv(const ImpactTable& table);
std::string flags_csv(const std::map<std::string, std::vector<ImpactFlag>>& flags);

struct EvaluationSummaryInput {
    ConfusionCounts counts;
    MetricsReport metrics;
    DetectionSummary detections;
    TimingOffsetStats timing;
    ImpactTable impacts;
    std::size_t num_objectives = 0;
};

std::string evaluation_summary_text(const EvaluationSummaryInput& in);

}  // namespace ddfb
