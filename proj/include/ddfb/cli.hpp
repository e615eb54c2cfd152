#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ddfb/evaluation.hpp"
#include "ddfb/generator.hpp"
#include "ddfb/graph.hpp"
#include "ddfb/mining.hpp"
#include "json.hpp"

namespace ddfb::cli {

namespace fs = std::filesystem;

struct RunPaths {
    std::optional<fs::path> corpus;
    std::optional<fs::path> traces;
    std::optional<fs::path> annotations;
    std::optional<fs::path> training_traces;
    std::optional<fs::path> training_annotations;
    std::optional<fs::path> objectives;
    std::optional<fs::path> features;
    std::optional<fs::path> events;
    std::optional<fs::path> detections;
    fs::path output_dir = "run";
};

struct GraphOptions {
    GraphSource mode = GraphSource::expert;
    int stages = 3;               // simplification phases applied, 0..3
    double min_fraction = 0.10;   // phase 1 student share
    long long min_path_count = 1;
    bool time_labels = false;
};

struct RunConfig {
    RunPaths paths;
    MiningConfig mining;
    int tolerance_edits = 0;
    HeuristicConfig heuristics;
    GraphOptions graph;
    double idle_threshold_s = 180.0;
    GeneratorConfig generator;  // generator.seed doubles as the run seed
    std::vector<std::string> objective_labels;

    RunConfig();
    void validate() const;
};

// Unknown keys are validation errors, so typos do not pass silently.
RunConfig run_config_from_json(const nlohmann::ordered_json& doc);
nlohmann::ordered_json run_config_to_json(const RunConfig& config);
RunConfig load_run_config(const fs::path& file);

std::string read_file(const fs::path& file);
void write_file(const fs::path& file, std::string_view content);

// One directory per invocation: outputs, copies of every input under
// inputs/, the effective config and a manifest.
class RunDirectory {
public:
    RunDirectory(fs::path root, std::string command, bool timestamp);
    const fs::path& root() const { return root_; }
    bool timestamp() const { return timestamp_; }
    // Copies `source` to inputs/<role><ext> and returns its text.
    std::string echo_input(const std::string& role, const fs::path& source);
    // Same, for input text already read.
    void record_input(const std::string& role, const fs::path& source, std::string_view text);
    void write(const std::string& name, std::string_view content);
    // A child directory for a bundled step; it writes its own manifest.
    RunDirectory child(const std::string& name, const std::string& command) const;
    void finish(const RunConfig& config);

private:
    fs::path root_;
    std::string command_;
    bool timestamp_;
    nlohmann::ordered_json inputs_ = nlohmann::ordered_json::array();
    std::vector<std::string> outputs_;
};

// "generated 2026-01-01T00:00:00Z" or nothing with --no-timestamp.
std::string header_line(const RunDirectory& dir);

void cmd_mine(const RunConfig& cfg, RunDirectory& dir);
void cmd_replay(const RunConfig& cfg, RunDirectory& dir);
void cmd_evaluate(const RunConfig& cfg, RunDirectory& dir);
void cmd_graph(const RunConfig& cfg, RunDirectory& dir);
void cmd_phases(const RunConfig& cfg, RunDirectory& dir);
void cmd_gen(const RunConfig& cfg, RunDirectory& dir);
void cmd_report(const RunConfig& cfg, RunDirectory& dir);

// Reads the detections CSV written by evaluate.
std::vector<FirstDetectionRecord> parse_detections_csv(std::string_view text);

// Maps an exception escaping a command to the process exit code.
int exit_code_for(const std::exception& e);

}  // namespace ddfb::cli
