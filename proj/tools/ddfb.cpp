#include <iostream>

#include "CLI11.hpp"
#include "ddfb/ast.hpp"
#include "ddfb/cli.hpp"

using namespace ddfb::cli;

namespace {

struct PathFlags {
    std::string corpus, traces, annotations, training_traces, training_annotations, objectives, features, events,
        detections;
};

void apply(const PathFlags& f, RunPaths& p) {
    auto set = [](const std::string& v, std::optional<fs::path>& dst) {
        if (!v.empty()) dst = v;
    };
    set(f.corpus, p.corpus);
    set(f.traces, p.traces);
    set(f.annotations, p.annotations);
    set(f.training_traces, p.training_traces);
    set(f.training_annotations, p.training_annotations);
    set(f.objectives, p.objectives);
    set(f.features, p.features);
    set(f.events, p.events);
    set(f.detections, p.detections);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data-driven objective feedback: mining, replay and evaluation"};
    app.require_subcommand(1);

    std::string config_file, out_dir;
    std::optional<std::uint64_t> seed;
    bool no_timestamp = false;
    app.add_option("--config", config_file, "run config document");
    app.add_option("--out", out_dir, "run directory");
    app.add_option("--seed", seed, "generator seed");
    app.add_flag("--no-timestamp", no_timestamp, "omit timestamps from manifests and report headers");

    PathFlags pf;
    std::string mode;
    std::optional<int> stages, tolerance;
    std::optional<double> idle;

    auto* mine = app.add_subcommand("mine", "mine features from a solution corpus");
    mine->add_option("--corpus", pf.corpus);
    mine->add_option("--training-traces", pf.training_traces);
    mine->add_option("--training-annotations", pf.training_annotations, "derive objectives from these");

    auto* replay = app.add_subcommand("replay", "replay traces and emit feedback events");
    replay->add_option("--traces", pf.traces);
    replay->add_option("--features", pf.features);
    replay->add_option("--objectives", pf.objectives);

    auto* evaluate = app.add_subcommand("evaluate", "tag events against expert annotations");
    evaluate->add_option("--traces", pf.traces);
    evaluate->add_option("--events", pf.events);
    evaluate->add_option("--annotations", pf.annotations);
    evaluate->add_option("--objectives", pf.objectives);
    evaluate->add_option("--tolerance", tolerance, "edits of slack for completion events");

    auto* graph = app.add_subcommand("graph", "build and simplify the state transition graph");
    graph->add_option("--traces", pf.traces);
    graph->add_option("--annotations", pf.annotations);
    graph->add_option("--events", pf.events);
    graph->add_option("--objectives", pf.objectives);
    graph->add_option("--mode", mode)->check(CLI::IsMember({"expert", "system"}));
    graph->add_option("--stages", stages)->check(CLI::Range(0, 3));

    auto* phases = app.add_subcommand("phases", "segment attempts into phases");
    phases->add_option("--traces", pf.traces);
    phases->add_option("--events", pf.events);
    phases->add_option("--detections", pf.detections);
    phases->add_option("--annotations", pf.annotations);
    phases->add_option("--objectives", pf.objectives);
    phases->add_option("--idle-threshold", idle, "seconds");

    auto* gen = app.add_subcommand("gen", "generate a synthetic corpus, traces and annotations");

    auto* report = app.add_subcommand("report", "run every step into one directory");
    report->add_option("--corpus", pf.corpus);
    report->add_option("--traces", pf.traces);
    report->add_option("--annotations", pf.annotations);
    report->add_option("--training-traces", pf.training_traces);
    report->add_option("--training-annotations", pf.training_annotations);
    report->add_option("--objectives", pf.objectives);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        const std::string config_text = config_file.empty() ? "" : read_file(config_file);
        RunConfig cfg = config_file.empty() ? RunConfig{} : run_config_from_json(ddfb::parse_json_document(config_text));
        apply(pf, cfg.paths);
        if (!out_dir.empty()) cfg.paths.output_dir = out_dir;
        if (seed) cfg.generator.seed = *seed;
        if (!mode.empty()) cfg.graph.mode = mode == "expert" ? ddfb::GraphSource::expert : ddfb::GraphSource::system;
        if (stages) cfg.graph.stages = *stages;
        if (tolerance) cfg.tolerance_edits = *tolerance;
        if (idle) cfg.idle_threshold_s = *idle;
        cfg.validate();

        CLI::App* sub = app.get_subcommands().front();
        RunDirectory dir(cfg.paths.output_dir, sub->get_name(), !no_timestamp);
        if (!config_file.empty()) dir.record_input("config", config_file, config_text);
        if (sub == mine) cmd_mine(cfg, dir);
        else if (sub == replay) cmd_replay(cfg, dir);
        else if (sub == evaluate) cmd_evaluate(cfg, dir);
        else if (sub == graph) cmd_graph(cfg, dir);
        else if (sub == phases) cmd_phases(cfg, dir);
        else if (sub == gen) cmd_gen(cfg, dir);
        else if (sub == report) cmd_report(cfg, dir);
        dir.finish(cfg);
        std::cout << dir.root().string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}
