#include <algorithm>

#include "ddfb/errors.hpp"
#include "ddfb/evaluation.hpp"

namespace ddfb {

namespace {

bool linked(const ExpertAnnotation& ann, ImpactType impact, DetectionType type) {
    auto it = ann.impact_links.find(impact);
    if (it == ann.impact_links.end()) return true;
    return it->second.count(to_string(type)) > 0;
}

}  // namespace

ImpactTable impact_tables(const std::vector<FirstDetectionRecord>& records,
                          const std::map<std::string, ExpertAnnotation>& truth) {
    ImpactTable table;
    std::map<DetectionType, ImpactRow> rows;
    for (auto t : kDetectionTypes) {
        rows[t].type = t;
        if (is_faulty(t)) rows[t].impacted = 0;
    }
    // detection types present per student
    std::map<std::string, std::set<DetectionType>> seen;
    for (const auto& r : records) {
        auto& row = rows[r.type];
        ++row.count;
        ++row.per_objective[r.objective_id];
        seen[r.student_id].insert(r.type);
        if (!is_faulty(r.type)) continue;
        ++table.faulty_total;
        auto it = truth.find(r.student_id);
        if (it == truth.end()) continue;
        const auto& ann = it->second;
        const bool hit =
            std::any_of(ann.impacts.begin(), ann.impacts.end(), [&](ImpactType i) { return linked(ann, i, r.type); });
        if (hit) {
            ++*row.impacted;
            ++table.faulty_impacted;
        }
    }
    for (auto t : kDetectionTypes) {
        auto& row = rows[t];
        if (row.impacted && row.count > 0)
            row.ratio = static_cast<double>(*row.impacted) / static_cast<double>(row.count);
        table.rows.push_back(row);
    }

    for (auto impact : {ImpactType::IPB, ImpactType::ITS, ImpactType::ES}) {
        ImpactCooccurrence co;
        co.impact = impact;
        for (const auto& [student, types] : seen) {
            auto it = truth.find(student);
            if (it == truth.end() || !it->second.impacts.count(impact)) continue;
            for (auto t : types) {
                if (!is_faulty(t) || !linked(it->second, impact, t)) continue;
                ++co.count;
                co.detection_types.insert(t);
            }
        }
        table.cooccurrences.push_back(std::move(co));
    }
    return table;
}

std::vector<ImpactFlag> flag_impacts_heuristic(const StudentTrace& trace, const EventLog& log,
                                               const ExpertAnnotation& truth,
                                               const std::vector<FirstDetectionRecord>& records,
                                               const HeuristicConfig& config) {
    if (truth.num_snapshots() != trace.size() || log.statuses.size() != trace.size())
        throw ValidationError(trace.student_id() + ": trace, log and annotation lengths differ");
    const std::size_t n = trace.size();
    const std::size_t last = n - 1;
    const int n_obj = static_cast<int>(truth.num_objectives());
    std::vector<ImpactFlag> flags;

    // ES: submitted on an all-green panel while the expert disagrees
    const auto& final_status = log.final_statuses();
    const bool all_green = !final_status.empty() && std::all_of(final_status.begin(), final_status.end(), [](auto s) {
        return s == ObjectiveStatus::complete;
    });
    if (all_green && truth.complete_set(last).size() < static_cast<std::size_t>(n_obj)) {
        flags.push_back({ImpactType::ES, {trace[last].index},
                         "all objectives detected at the final snapshot, expert marks " +
                             std::to_string(n_obj - static_cast<int>(truth.complete_set(last).size())) + " incomplete"});
    }

    // ITS: kept working long after reaching an expert-correct state
    const bool missed = std::any_of(records.begin(), records.end(), [](const FirstDetectionRecord& r) {
        return r.type == DetectionType::IND || r.type == DetectionType::L;
    });
    if (missed) {
        for (std::size_t q = 0; q < n; ++q) {
            if (truth.complete_set(q).size() != static_cast<std::size_t>(n_obj)) continue;
            const double reached = trace[q].timestamp - trace.start_time();
            const double more = trace.end_time() - trace[q].timestamp;
            if (more > 0.0 && more >= config.its_alpha * reached)
                flags.push_back({ImpactType::ITS, {trace[q].index, trace[last].index},
                                 "expert-complete after " + std::to_string(static_cast<long long>(reached)) +
                                     " s, worked " + std::to_string(static_cast<long long>(more)) + " s more"});
            break;
        }
    }

    // IPB: the expert state regresses while an early or wrong detection is shown
    for (const auto& r : records) {
        if ((r.type != DetectionType::ID && r.type != DetectionType::E) || !r.system_index) continue;
        const int p = trace.position_of(*r.system_index);
        bool found = false;
        for (std::size_t q = static_cast<std::size_t>(p) + 1; q < n && !found; ++q) {
            const auto before = truth.complete_set(q - 1);
            const auto now = truth.complete_set(q);
            if (std::includes(now.begin(), now.end(), before.begin(), before.end())) continue;
            flags.push_back({ImpactType::IPB, {*r.system_index, trace[q].index},
                             "objective " + std::to_string(r.objective_id) + " shown as " + to_string(r.type) +
                                 ", expert state regresses later"});
            found = true;
        }
        if (found) break;
    }
    return flags;
}

}  // namespace ddfb
