#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "ddfb/ast.hpp"
#include "ddfb/cli.hpp"
#include "ddfb/errors.hpp"

namespace ddfb::cli {

using nlohmann::ordered_json;

namespace {

const std::vector<std::string> kDefaultLabels{
    "Make a Squiral custom block and use it in your code.",
    "The Squiral custom block rotates the correct number of times.",
    "The length of each side of the Squiral is based on a variable.",
    "The length of the Squiral increases with each side.",
};

void check_keys(const ordered_json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ValidationError(where + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ValidationError(where + ": unknown key \"" + key + "\"");
}

// Typed readers; absent keys and nulls keep the default.
template <class T>
void read(const ordered_json& obj, const char* key, T& out, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return;
    const std::string name = where + "/" + key;
    if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw ValidationError(name + " must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) throw ValidationError(name + " must be an integer");
        if constexpr (std::is_unsigned_v<T>)
            if (it->is_number_integer() && !it->is_number_unsigned() && it->get<long long>() < 0)
                throw ValidationError(name + " must be non-negative");
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!it->is_number()) throw ValidationError(name + " must be a number");
    } else {
        if (!it->is_string()) throw ValidationError(name + " must be a string");
    }
    out = it->get<T>();
}

void read_opt_int(const ordered_json& obj, const char* key, std::optional<int>& out, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (it->is_null()) {
        out.reset();
        return;
    }
    if (!it->is_number_integer()) throw ValidationError(where + "/" + key + " must be an integer or null");
    out = it->get<int>();
}

void read_path(const ordered_json& obj, const char* key, std::optional<fs::path>& out) {
    std::string s;
    read(obj, key, s, "/paths");
    if (!s.empty()) out = s;
}

ordered_json path_json(const std::optional<fs::path>& p) { return p ? ordered_json(p->string()) : ordered_json(); }

ordered_json opt_json(const std::optional<int>& v) { return v ? ordered_json(*v) : ordered_json(); }

}  // namespace

RunConfig::RunConfig() : objective_labels(kDefaultLabels) {}

void RunConfig::validate() const {
    mining.validate();
    generator.validate();
    if (tolerance_edits < 0) throw ValidationError("tolerance_edits must be non-negative");
    if (!(heuristics.its_alpha >= 0.0)) throw ValidationError("its_alpha must be non-negative");
    if (graph.stages < 0 || graph.stages > 3) throw ValidationError("graph stages must lie in 0..3");
    if (!(graph.min_fraction >= 0.0 && graph.min_fraction <= 1.0))
        throw ValidationError("graph min_fraction must lie in [0, 1]");
    if (graph.min_path_count < 1) throw ValidationError("min_path_count must be >= 1");
    if (!(idle_threshold_s > 0.0)) throw ValidationError("idle_threshold_s must be positive");
    if (objective_labels.empty()) throw ValidationError("objective_labels must not be empty");
}

RunConfig run_config_from_json(const ordered_json& doc) {
    RunConfig c;
    check_keys(doc, "config",
               {"paths", "mining", "evaluation", "graph", "phases", "generator", "objective_labels"});

    if (auto it = doc.find("paths"); it != doc.end()) {
        const auto& p = *it;
        check_keys(p, "/paths",
                   {"corpus", "traces", "annotations", "training_traces", "training_annotations", "objectives",
                    "features", "events", "detections", "output_dir"});
        read_path(p, "corpus", c.paths.corpus);
        read_path(p, "traces", c.paths.traces);
        read_path(p, "annotations", c.paths.annotations);
        read_path(p, "training_traces", c.paths.training_traces);
        read_path(p, "training_annotations", c.paths.training_annotations);
        read_path(p, "objectives", c.paths.objectives);
        read_path(p, "features", c.paths.features);
        read_path(p, "events", c.paths.events);
        read_path(p, "detections", c.paths.detections);
        std::string out;
        read(p, "output_dir", out, "/paths");
        if (!out.empty()) c.paths.output_dir = out;
    }

    if (auto it = doc.find("mining"); it != doc.end()) {
        const auto& m = *it;
        const std::string w = "/mining";
        check_keys(m, w,
                   {"p_max", "q_max", "jaccard_dedupe_threshold", "support_threshold", "include_values",
                    "resolution_drop_threshold", "min_features", "max_features"});
        read(m, "p_max", c.mining.p_max, w);
        read(m, "q_max", c.mining.q_max, w);
        read(m, "jaccard_dedupe_threshold", c.mining.jaccard_dedupe_threshold, w);
        read(m, "support_threshold", c.mining.support_threshold, w);
        read(m, "include_values", c.mining.include_values, w);
        read(m, "resolution_drop_threshold", c.mining.resolution_drop_threshold, w);
        read_opt_int(m, "min_features", c.mining.min_features, w);
        read_opt_int(m, "max_features", c.mining.max_features, w);
    }

    if (auto it = doc.find("evaluation"); it != doc.end()) {
        check_keys(*it, "/evaluation", {"tolerance_edits", "its_alpha"});
        read(*it, "tolerance_edits", c.tolerance_edits, "/evaluation");
        read(*it, "its_alpha", c.heuristics.its_alpha, "/evaluation");
    }

    if (auto it = doc.find("graph"); it != doc.end()) {
        const std::string w = "/graph";
        check_keys(*it, w, {"mode", "stages", "min_fraction", "min_path_count", "time_labels"});
        std::string mode = to_string(c.graph.mode);
        read(*it, "mode", mode, w);
        if (mode == "expert")
            c.graph.mode = GraphSource::expert;
        else if (mode == "system")
            c.graph.mode = GraphSource::system;
        else
            throw ValidationError("/graph/mode must be \"expert\" or \"system\"");
        read(*it, "stages", c.graph.stages, w);
        read(*it, "min_fraction", c.graph.min_fraction, w);
        read(*it, "min_path_count", c.graph.min_path_count, w);
        read(*it, "time_labels", c.graph.time_labels, w);
    }

    if (auto it = doc.find("phases"); it != doc.end()) {
        check_keys(*it, "/phases", {"idle_threshold_s"});
        read(*it, "idle_threshold_s", c.idle_threshold_s, "/phases");
    }

    if (auto it = doc.find("generator"); it != doc.end()) {
        const auto& g = *it;
        const std::string w = "/generator";
        check_keys(g, w,
                   {"seed", "n_solutions", "custom_block_fraction", "nested_loop_fraction", "variant_fraction",
                    "n_traces", "cohort", "n_training_traces", "edit_error_rate", "mean_gap_s", "timestamp_jitter",
                    "idle_rate", "max_neutral_edits"});
        auto& gc = c.generator;
        read(g, "seed", gc.seed, w);
        read(g, "n_solutions", gc.n_solutions, w);
        read(g, "custom_block_fraction", gc.custom_block_fraction, w);
        read(g, "nested_loop_fraction", gc.nested_loop_fraction, w);
        read(g, "variant_fraction", gc.variant_fraction, w);
        read(g, "n_traces", gc.n_traces, w);
        std::string cohort = to_string(gc.cohort);
        read(g, "cohort", cohort, w);
        gc.cohort = cohort_from_string(cohort);
        read(g, "n_training_traces", gc.n_training_traces, w);
        read(g, "edit_error_rate", gc.edit_error_rate, w);
        read(g, "mean_gap_s", gc.mean_gap_s, w);
        read(g, "timestamp_jitter", gc.timestamp_jitter, w);
        read(g, "idle_rate", gc.idle_rate, w);
        read(g, "max_neutral_edits", gc.max_neutral_edits, w);
    }

    if (auto it = doc.find("objective_labels"); it != doc.end()) {
        if (!it->is_array()) throw ValidationError("objective_labels must be an array of strings");
        c.objective_labels.clear();
        for (const auto& l : *it) {
            if (!l.is_string()) throw ValidationError("objective_labels must be an array of strings");
            c.objective_labels.push_back(l.get<std::string>());
        }
    }

    c.validate();
    return c;
}

ordered_json run_config_to_json(const RunConfig& c) {
    ordered_json j;
    j["paths"] = {{"corpus", path_json(c.paths.corpus)},
                  {"traces", path_json(c.paths.traces)},
                  {"annotations", path_json(c.paths.annotations)},
                  {"training_traces", path_json(c.paths.training_traces)},
                  {"training_annotations", path_json(c.paths.training_annotations)},
                  {"objectives", path_json(c.paths.objectives)},
                  {"features", path_json(c.paths.features)},
                  {"events", path_json(c.paths.events)},
                  {"detections", path_json(c.paths.detections)},
                  {"output_dir", c.paths.output_dir.string()}};
    const auto& m = c.mining;
    j["mining"] = {{"p_max", m.p_max},
                   {"q_max", m.q_max},
                   {"jaccard_dedupe_threshold", m.jaccard_dedupe_threshold},
                   {"support_threshold", m.support_threshold},
                   {"include_values", m.include_values},
                   {"resolution_drop_threshold", m.resolution_drop_threshold},
                   {"min_features", opt_json(m.min_features)},
                   {"max_features", opt_json(m.max_features)}};
    j["evaluation"] = {{"tolerance_edits", c.tolerance_edits}, {"its_alpha", c.heuristics.its_alpha}};
    j["graph"] = {{"mode", to_string(c.graph.mode)},
                  {"stages", c.graph.stages},
                  {"min_fraction", c.graph.min_fraction},
                  {"min_path_count", c.graph.min_path_count},
                  {"time_labels", c.graph.time_labels}};
    j["phases"] = {{"idle_threshold_s", c.idle_threshold_s}};
    const auto& g = c.generator;
    j["generator"] = {{"seed", g.seed},
                      {"n_solutions", g.n_solutions},
                      {"custom_block_fraction", g.custom_block_fraction},
                      {"nested_loop_fraction", g.nested_loop_fraction},
                      {"variant_fraction", g.variant_fraction},
                      {"n_traces", g.n_traces},
                      {"cohort", to_string(g.cohort)},
                      {"n_training_traces", g.n_training_traces},
                      {"edit_error_rate", g.edit_error_rate},
                      {"mean_gap_s", g.mean_gap_s},
                      {"timestamp_jitter", g.timestamp_jitter},
                      {"idle_rate", g.idle_rate},
                      {"max_neutral_edits", g.max_neutral_edits}};
    j["objective_labels"] = c.objective_labels;
    return j;
}

RunConfig load_run_config(const fs::path& file) { return run_config_from_json(parse_json_document(read_file(file))); }

std::string read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading " + file.string());
    return ss.str();
}

void write_file(const fs::path& file, std::string_view content) {
    std::error_code ec;
    if (file.has_parent_path()) fs::create_directories(file.parent_path(), ec);
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + file.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("error while writing " + file.string());
}

RunDirectory::RunDirectory(fs::path root, std::string command, bool timestamp)
    : root_(std::move(root)), command_(std::move(command)), timestamp_(timestamp) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec || !fs::is_directory(root_)) throw IoError("cannot create output directory " + root_.string());
}

std::string RunDirectory::echo_input(const std::string& role, const fs::path& source) {
    std::string text = read_file(source);
    record_input(role, source, text);
    return text;
}

void RunDirectory::record_input(const std::string& role, const fs::path& source, std::string_view text) {
    const std::string copy = "inputs/" + role + source.extension().string();
    write_file(root_ / copy, text);
    inputs_.push_back({{"role", role}, {"source", source.string()}, {"copy", copy}, {"bytes", text.size()}});
}

void RunDirectory::write(const std::string& name, std::string_view content) {
    write_file(root_ / name, content);
    outputs_.push_back(name);
}

RunDirectory RunDirectory::child(const std::string& name, const std::string& command) const {
    return RunDirectory(root_ / name, command, timestamp_);
}

std::string header_line(const RunDirectory& dir) {
    if (!dir.timestamp()) return "";
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string("generated ") + buf + "\n";
}

void RunDirectory::finish(const RunConfig& config) {
    write_file(root_ / "config.json", run_config_to_json(config).dump(2) + "\n");
    ordered_json manifest;
    manifest["command"] = command_;
    if (timestamp_) {
        std::string h = header_line(*this);
        manifest["created"] = h.substr(10, h.size() - 11);
    }
    manifest["config"] = "config.json";
    manifest["inputs"] = inputs_;
    manifest["outputs"] = outputs_;
    write_file(root_ / "manifest.json", manifest.dump(2) + "\n");
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ValidationError*>(&e)) return 1;
    if (dynamic_cast<const IoError*>(&e)) return 2;
    if (dynamic_cast<const nlohmann::json::exception*>(&e)) return 1;
    if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return 2;
    return 3;
}

}  // namespace ddfb::cli
