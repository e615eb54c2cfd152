#include <set>
#include <tuple>

#include "ddfb/errors.hpp"
#include "ddfb/evaluation.hpp"

namespace ddfb {

std::string to_string(DetectionType t) {
    switch (t) {
        case DetectionType::CD: return "CD";
        case DetectionType::CND: return "CND";
        case DetectionType::ID: return "ID";
        case DetectionType::IND: return "IND";
        case DetectionType::E: return "E";
        case DetectionType::L: return "L";
    }
    return "?";
}

std::optional<DetectionType> detection_type_from_string(std::string_view s) {
    for (auto t : kDetectionTypes)
        if (to_string(t) == s) return t;
    return std::nullopt;
}

bool is_faulty(DetectionType t) { return t != DetectionType::CD && t != DetectionType::CND; }

DetectionType classify_detection(std::optional<long long> t_s, std::optional<long long> t_e) {
    if (!t_s && !t_e) return DetectionType::CND;
    if (!t_e) return DetectionType::ID;
    if (!t_s) return DetectionType::IND;
    if (*t_s == *t_e) return DetectionType::CD;
    return *t_s < *t_e ? DetectionType::E : DetectionType::L;
}

std::vector<FirstDetectionRecord> classify_first_detections(const EventLog& log, const StudentTrace& trace,
                                                            const ExpertAnnotation& truth) {
    if (truth.num_snapshots() != trace.size())
        throw ValidationError(trace.student_id() + ": annotation and trace lengths differ");
    if (log.num_objectives != truth.num_objectives())
        throw ValidationError(trace.student_id() + ": annotation and event log objective counts differ");
    std::vector<FirstDetectionRecord> out;
    for (int obj = 1; obj <= static_cast<int>(truth.num_objectives()); ++obj) {
        std::optional<long long> ts;
        for (const auto& e : log.events) {
            if (e.objective_id == obj && e.kind == EventKind::completed) {
                ts = e.position;
                break;
            }
        }
        std::optional<long long> te;
        if (auto f = truth.first_complete(obj)) te = static_cast<long long>(*f);

        FirstDetectionRecord r;
        r.student_id = trace.student_id();
        r.objective_id = obj;
        if (ts) r.system_index = trace[static_cast<std::size_t>(*ts)].index;
        if (te) r.expert_index = trace[static_cast<std::size_t>(*te)].index;
        r.type = classify_detection(ts, te);
        out.push_back(std::move(r));
    }
    return out;
}

namespace {

std::optional<double> frac(long long num, long long den) {
    if (den <= 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

DetectionSummary detection_summary(const std::vector<FirstDetectionRecord>& records) {
    DetectionSummary s;
    for (auto t : kDetectionTypes) s.counts[t] = 0;
    for (const auto& r : records) ++s.counts[r.type];
    s.total = static_cast<long long>(records.size());
    auto c = [&](DetectionType t) { return s.counts[t]; };
    s.fully_incorrect = frac(c(DetectionType::ID) + c(DetectionType::IND), s.total);
    s.partially_incorrect = frac(c(DetectionType::E) + c(DetectionType::L), s.total);
    s.strictly_correct = frac(c(DetectionType::CD) + c(DetectionType::CND), s.total);
    return s;
}

TimingOffsetStats timing_offset_stats(const std::vector<FirstDetectionRecord>& records,
                                      const std::vector<TaggedEvent>& tagged) {
    long long cd = 0, off = 0;
    std::set<std::tuple<std::string, int, int>> offset_firsts;
    for (const auto& r : records) {
        if (r.type == DetectionType::CD) ++cd;
        if (r.type == DetectionType::E || r.type == DetectionType::L) {
            ++off;
            offset_firsts.emplace(r.student_id, r.objective_id, *r.system_index);
        }
    }
    TimingOffsetStats out;
    out.near_miss = frac(off, cd + off);
    for (const auto& t : tagged) {
        if (t.tag == Tag::TP && t.kind == EventKind::completed &&
            offset_firsts.count({t.student_id, t.objective_id, t.snapshot_index}))
            ++out.reclassified;
    }
    out.strict_counts = count_tags(tagged);
    out.strict_counts.tp -= out.reclassified;
    out.strict_counts.fp += out.reclassified;
    out.strict_metrics = confusion_metrics(out.strict_counts);
    return out;
}

}  // namespace ddfb
