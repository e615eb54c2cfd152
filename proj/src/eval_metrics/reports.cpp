#include <sstream>

#include "ddfb/evaluation.hpp"
#include "ddfb/text.hpp"

namespace ddfb {

std::string format_percent(double fraction, int decimals) { return format_fixed(fraction * 100.0, decimals) + "%"; }

std::string tagged_events_csv(const std::vector<TaggedEvent>& tagged) {
    std::string out = csv_row({"student_id", "objective_id", "snapshot_index", "event", "tag"});
    for (const auto& t : tagged)
        out += csv_row({t.student_id, std::to_string(t.objective_id), std::to_string(t.snapshot_index),
                        t.kind ? to_string(*t.kind) : "missed", to_string(t.tag)});
    return out;
}

std::string metrics_csv(const ConfusionCounts& c, const MetricsReport& m, const std::string& mode) {
    std::string out = csv_row({"mode", "tp", "tn", "fp", "fn", "accuracy", "precision", "recall", "f1", "tnr", "fpr",
                               "fnr"});
    out += csv_row({mode, std::to_string(c.tp), std::to_string(c.tn), std::to_string(c.fp), std::to_string(c.fn),
                    format_fixed(m.accuracy), format_fixed(m.precision), format_fixed(m.recall), format_fixed(m.f1),
                    format_fixed(m.tnr), format_fixed(m.fpr), format_fixed(m.fnr)});
    return out;
}

std::string detections_csv(const std::vector<FirstDetectionRecord>& records) {
    std::string out = csv_row({"student_id", "objective_id", "system_index", "expert_index", "type"});
    for (const auto& r : records)
        out += csv_row({r.student_id, std::to_string(r.objective_id),
                        r.system_index ? std::to_string(*r.system_index) : "",
                        r.expert_index ? std::to_string(*r.expert_index) : "", to_string(r.type)});
    return out;
}

std::string impact_table_csv(const ImpactTable& table, std::size_t num_objectives) {
    std::vector<std::string> header{"type", "count"};
    for (std::size_t o = 1; o <= num_objectives; ++o) header.push_back("objective_" + std::to_string(o));
    header.push_back("impacted");
    header.push_back("impacted_ratio");
    std::string out = csv_row(header);
    for (const auto& r : table.rows) {
        std::vector<std::string> row{to_string(r.type), std::to_string(r.count)};
        for (std::size_t o = 1; o <= num_objectives; ++o) {
            auto it = r.per_objective.find(static_cast<int>(o));
            row.push_back(std::to_string(it == r.per_objective.end() ? 0 : it->second));
        }
        row.push_back(r.impacted ? std::to_string(*r.impacted) : "");
        row.push_back(format_fixed(r.ratio));
        out += csv_row(row);
    }
    return out;
}

std::string cooccurrence_csv(const ImpactTable& table) {
    std::string out = csv_row({"impact", "count", "detection_types"});
    for (const auto& c : table.cooccurrences) {
        std::vector<std::string> types;
        for (auto t : c.detection_types) types.push_back(to_string(t));
        out += csv_row({to_string(c.impact), std::to_string(c.count), join(types, " ")});
    }
    return out;
}

std::string flags_csv(const std::map<std::string, std::vector<ImpactFlag>>& flags) {
    std::string out = csv_row({"student_id", "impact", "snapshot_indices", "evidence"});
    for (const auto& [student, list] : flags) {
        for (const auto& f : list) {
            std::vector<std::string> idx;
            for (int i : f.snapshot_indices) idx.push_back(std::to_string(i));
            out += csv_row({student, to_string(f.impact), join(idx, " "), f.evidence});
        }
    }
    return out;
}

namespace {

std::string pct(const std::optional<double>& v) { return v ? format_percent(*v, 2) : "n/a"; }

}  // namespace

std::string evaluation_summary_text(const EvaluationSummaryInput& in) {
    std::ostringstream os;
    const auto& c = in.counts;
    const auto& m = in.metrics;
    os << "Event tagging\n";
    os << "  TP " << c.tp << "  TN " << c.tn << "  FP " << c.fp << "  FN " << c.fn << "\n";
    os << "  accuracy " << pct(m.accuracy) << "  precision " << pct(m.precision) << "  recall " << pct(m.recall)
       << "  F1 " << pct(m.f1) << "\n";
    os << "  TNR " << pct(m.tnr) << "  FPR " << pct(m.fpr) << "  FNR " << pct(m.fnr) << "\n";
    const auto& sm = in.timing.strict_metrics;
    os << "  strict (early/late as incorrect): accuracy " << pct(sm.accuracy) << "  recall " << pct(sm.recall)
       << "  reclassified " << in.timing.reclassified << "\n\n";

    const auto& d = in.detections;
    os << "First-time detections (" << d.total << ")\n";
    for (auto t : kDetectionTypes) os << "  " << to_string(t) << " " << d.counts.at(t) << "\n";
    os << "  completely incorrect " << pct(d.fully_incorrect) << "  partially incorrect " << pct(d.partially_incorrect)
       << "  near-miss " << pct(in.timing.near_miss) << "\n\n";

    os << "Detections with unintended impacts\n";
    for (const auto& r : in.impacts.rows) {
        os << "  " << to_string(r.type) << " (" << r.count << ")";
        for (std::size_t o = 1; o <= in.num_objectives; ++o) {
            auto it = r.per_objective.find(static_cast<int>(o));
            os << "  obj" << o << " " << (it == r.per_objective.end() ? 0 : it->second);
        }
        if (r.impacted) os << "  impacted " << *r.impacted << " " << pct(r.ratio);
        os << "\n";
    }
    os << "\nImpact co-occurrence\n";
    for (const auto& co : in.impacts.cooccurrences) {
        os << "  " << to_string(co.impact) << " " << co.count;
        std::vector<std::string> types;
        for (auto t : co.detection_types) types.push_back(to_string(t));
        if (!types.empty()) os << "  " << join(types, ", ");
        os << "\n";
    }
    return os.str();
}

}  // namespace ddfb
