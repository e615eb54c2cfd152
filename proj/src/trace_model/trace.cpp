#include "ddfb/trace.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ddfb/errors.hpp"

namespace ddfb {

StudentTrace::StudentTrace(std::string student_id, std::vector<Snapshot> snapshots, bool submitted)
    : student_id_(std::move(student_id)), snapshots_(std::move(snapshots)), submitted_(submitted) {
    if (snapshots_.empty()) throw ValidationError("trace '" + student_id_ + "' has no snapshots");
    std::stable_sort(snapshots_.begin(), snapshots_.end(),
                     [](const Snapshot& a, const Snapshot& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < snapshots_.size(); ++i) {
        const auto& s = snapshots_[i];
        if (s.index < 0) throw ValidationError("trace '" + student_id_ + "': negative snapshot index");
        if (!(s.timestamp >= 0.0))
            throw ValidationError("trace '" + student_id_ + "': negative timestamp at index " +
                                  std::to_string(s.index));
        if (i == 0) continue;
        const auto& prev = snapshots_[i - 1];
        if (prev.index == s.index)
            throw ValidationError("trace '" + student_id_ + "': duplicate snapshot index " +
                                  std::to_string(s.index));
        if (s.timestamp < prev.timestamp)
            throw ValidationError("trace '" + student_id_ + "': timestamp decreases at index " +
                                  std::to_string(s.index));
    }
}

int StudentTrace::position_of(int index) const {
    auto it = std::lower_bound(snapshots_.begin(), snapshots_.end(), index,
                               [](const Snapshot& s, int i) { return s.index < i; });
    if (it == snapshots_.end() || it->index != index) return -1;
    return static_cast<int>(it - snapshots_.begin());
}

namespace {

struct Record {
    std::string student_id;
    Snapshot snapshot;
    bool submitted = false;
};

Record parse_record(const std::string& line, std::size_t line_no, const IngestOptions& opts) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("trace record on line " + std::to_string(line_no) + ": " + e.what());
    }
    auto fail = [&](const std::string& why) {
        throw ValidationError("trace record on line " + std::to_string(line_no) + ": " + why);
    };
    if (!doc.is_object()) fail("not an object");
    for (const char* key : {"student_id", "index", "timestamp_s", "ast"})
        if (!doc.contains(key)) fail(std::string("missing '") + key + "'");
    if (!doc["student_id"].is_string()) fail("student_id must be a string");
    if (!doc["index"].is_number_integer()) fail("index must be an integer");
    if (!doc["timestamp_s"].is_number()) fail("timestamp_s must be a number");

    Record r{doc["student_id"].get<std::string>(),
             Snapshot{doc["index"].get<int>(), doc["timestamp_s"].get<double>(),
                      ast_from_json(doc["ast"], "ast")},
             false};
    if (auto s = doc.find("submitted"); s != doc.end()) {
        if (!s->is_boolean()) fail("submitted must be a boolean");
        r.submitted = s->get<bool>();
    }
    if (opts.anonymize_identifiers)
        r.snapshot.root = anonymize_identifiers(r.snapshot.root, opts.identifier_labels);
    return r;
}

std::vector<Record> read_records(std::istream& in, const IngestOptions& opts) {
    std::vector<Record> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_record(line, line_no, opts));
    }
    return out;
}

}  // namespace

StudentTrace parse_trace(std::istream& in, const IngestOptions& opts) {
    auto records = read_records(in, opts);
    if (records.empty()) throw ValidationError("trace stream has no records");
    std::vector<Snapshot> snaps;
    bool submitted = false;
    for (auto& r : records) {
        if (r.student_id != records.front().student_id)
            throw ValidationError("trace stream mixes students '" + records.front().student_id + "' and '" +
                                  r.student_id + "'");
        submitted = submitted || r.submitted;
        snaps.push_back(std::move(r.snapshot));
    }
    return StudentTrace(records.front().student_id, std::move(snaps), submitted);
}

std::vector<StudentTrace> parse_traces(std::istream& in, const IngestOptions& opts) {
    auto records = read_records(in, opts);
    std::vector<std::string> order;
    std::map<std::string, std::pair<std::vector<Snapshot>, bool>> groups;
    for (auto& r : records) {
        auto [it, inserted] = groups.try_emplace(r.student_id);
        if (inserted) order.push_back(r.student_id);
        it->second.second = it->second.second || r.submitted;
        it->second.first.push_back(std::move(r.snapshot));
    }
    std::vector<StudentTrace> traces;
    traces.reserve(order.size());
    for (const auto& id : order) {
        auto& g = groups[id];
        traces.emplace_back(id, std::move(g.first), g.second);
    }
    return traces;
}

void write_trace(std::ostream& out, const StudentTrace& trace) {
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& s = trace[i];
        nlohmann::ordered_json rec;
        rec["student_id"] = trace.student_id();
        rec["index"] = s.index;
        rec["timestamp_s"] = s.timestamp;
        rec["ast"] = ast_to_json(s.root);
        if (trace.submitted() && i + 1 == trace.size()) rec["submitted"] = true;
        out << rec.dump() << '\n';
    }
}

}  // namespace ddfb
