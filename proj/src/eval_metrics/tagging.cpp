#include <algorithm>

#include "ddfb/errors.hpp"
#include "ddfb/evaluation.hpp"

namespace ddfb {

std::string to_string(Tag t) {
    switch (t) {
        case Tag::TP: return "TP";
        case Tag::TN: return "TN";
        case Tag::FP: return "FP";
        case Tag::FN: return "FN";
    }
    return "?";
}

namespace {

void check_shapes(const EventLog& log, const ExpertAnnotation& truth) {
    if (log.statuses.size() != truth.num_snapshots())
        throw ValidationError(log.student_id + ": annotation covers " + std::to_string(truth.num_snapshots()) +
                              " snapshots but the trace has " + std::to_string(log.statuses.size()));
    if (log.num_objectives != truth.num_objectives())
        throw ValidationError(log.student_id + ": annotation has " + std::to_string(truth.num_objectives()) +
                              " objectives, the event log " + std::to_string(log.num_objectives));
}

}  // namespace

std::vector<TaggedEvent> tag_events(const EventLog& log, const ExpertAnnotation& truth, int tolerance_edits) {
    if (tolerance_edits < 0) throw ValidationError("tolerance must be non-negative");
    check_shapes(log, truth);
    const int n = static_cast<int>(truth.num_snapshots());
    auto window = [&](int pos) { return std::pair{std::max(0, pos - tolerance_edits), std::min(n - 1, pos + tolerance_edits)}; };

    std::vector<TaggedEvent> out;
    for (const auto& e : log.events) {
        TaggedEvent t{log.student_id, e.objective_id, e.snapshot_index, e.position, Tag::TP, e.kind};
        if (e.kind == EventKind::broken) {
            t.tag = truth.complete(static_cast<std::size_t>(e.position), e.objective_id) ? Tag::FN : Tag::TN;
        } else {
            const auto [lo, hi] = window(e.position);
            bool hit = false;
            for (int p = lo; p <= hi && !hit; ++p) hit = truth.complete(static_cast<std::size_t>(p), e.objective_id);
            t.tag = hit ? Tag::TP : Tag::FP;
        }
        out.push_back(std::move(t));
    }

    for (int obj = 1; obj <= static_cast<int>(truth.num_objectives()); ++obj) {
        for (int q = 0; q < n; ++q) {
            const bool now = truth.complete(static_cast<std::size_t>(q), obj);
            const bool before = q > 0 && truth.complete(static_cast<std::size_t>(q - 1), obj);
            if (!now || before) continue;
            const auto [lo, hi] = window(q);
            const bool detected = std::any_of(log.events.begin(), log.events.end(), [&](const FeedbackEvent& e) {
                return e.objective_id == obj && e.kind != EventKind::broken && e.position >= lo && e.position <= hi;
            });
            if (!detected) out.push_back({log.student_id, obj, log.snapshot_indices[static_cast<std::size_t>(q)], q, Tag::FN, std::nullopt});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const TaggedEvent& a, const TaggedEvent& b) {
        return a.position != b.position ? a.position < b.position : a.objective_id < b.objective_id;
    });
    return out;
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
}

ConfusionCounts count_tags(const std::vector<TaggedEvent>& tagged) {
    ConfusionCounts c;
    for (const auto& t : tagged) {
        switch (t.tag) {
            case Tag::TP: ++c.tp; break;
            case Tag::TN: ++c.tn; break;
            case Tag::FP: ++c.fp; break;
            case Tag::FN: ++c.fn; break;
        }
    }
    return c;
}

}  // namespace ddfb
