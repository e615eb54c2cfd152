#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ddfb/ast.hpp"

namespace ddfb {

struct Snapshot {
    int index = 0;           // edit sequence number, strictly increasing in a trace
    double timestamp = 0.0;  // seconds since trace start
    AstNode root;
};

struct IngestOptions {
    bool anonymize_identifiers = false;
    std::set<std::string> identifier_labels{"var"};
};

class StudentTrace {
public:
    // Sorts by index and validates: non-empty, unique indices, timestamps
    // non-negative and non-decreasing in index order.
    StudentTrace(std::string student_id, std::vector<Snapshot> snapshots, bool submitted = false);

    const std::string& student_id() const { return student_id_; }
    const std::vector<Snapshot>& snapshots() const { return snapshots_; }
    std::size_t size() const { return snapshots_.size(); }
    const Snapshot& operator[](std::size_t pos) const { return snapshots_[pos]; }
    bool submitted() const { return submitted_; }

    double start_time() const { return snapshots_.front().timestamp; }
    double end_time() const { return snapshots_.back().timestamp; }

    // Position of the snapshot carrying `index`, or -1.
    int position_of(int index) const;

private:
    std::string student_id_;
    std::vector<Snapshot> snapshots_;
    bool submitted_;
};

// One student's records, one JSON object per line:
// {"student_id", "index", "timestamp_s", "ast", "submitted"?}.
StudentTrace parse_trace(std::istream& in, const IngestOptions& opts = {});

// A file may interleave several students; traces come back in order of
// first appearance.
std::vector<StudentTrace> parse_traces(std::istream& in, const IngestOptions& opts = {});

void write_trace(std::ostream& out, const StudentTrace& trace);

}  // namespace ddfb
