#include <algorithm>
#include <map>
#include <sstream>

#include "ddfb/annotation.hpp"
#include "ddfb/cli.hpp"
#include "ddfb/corpus.hpp"
#include "ddfb/derive.hpp"
#include "ddfb/errors.hpp"
#include "ddfb/features_io.hpp"
#include "ddfb/phases.hpp"
#include "ddfb/replay.hpp"
#include "ddfb/text.hpp"

namespace ddfb::cli {

namespace {

const char* const kFeatures = "features.json";
const char* const kObjectives = "objectives.json";
const char* const kEvents = "events.jsonl";
const char* const kDetections = "detections.csv";

const fs::path& require(const std::optional<fs::path>& p, const char* what, const char* command) {
    if (!p) throw ValidationError(std::string(command) + " needs --" + what);
    return *p;
}

std::vector<StudentTrace> load_traces(RunDirectory& dir, const std::string& role, const fs::path& file) {
    std::istringstream in(dir.echo_input(role, file));
    auto traces = parse_traces(in);
    if (traces.empty()) throw ValidationError(file.string() + ": no traces");
    return traces;
}

std::map<std::string, ExpertAnnotation> load_annotations(RunDirectory& dir, const std::string& role,
                                                         const fs::path& file, const std::vector<StudentTrace>& traces,
                                                         std::size_t n_obj) {
    auto set = parse_annotation_set(dir.echo_input(role, file), traces, n_obj);
    for (const auto& t : traces)
        if (!set.count(t.student_id())) throw ValidationError("no annotation for student " + t.student_id());
    return set;
}

std::optional<ObjectiveSet> load_objectives(const RunConfig& cfg, RunDirectory& dir) {
    if (!cfg.paths.objectives) return std::nullopt;
    return parse_objectives(dir.echo_input("objectives", *cfg.paths.objectives));
}

std::size_t objective_count(const RunConfig& cfg, const std::optional<ObjectiveSet>& objectives) {
    return objectives ? objectives->size() : cfg.objective_labels.size();
}

std::map<std::string, EventLog> load_logs(RunDirectory& dir, const fs::path& file,
                                          const std::vector<StudentTrace>& traces, std::size_t n_obj) {
    std::istringstream in(dir.echo_input("events", file));
    auto events = read_events(in);
    std::map<std::string, EventLog> logs;
    for (const auto& t : traces) {
        auto it = events.find(t.student_id());
        logs.emplace(t.student_id(),
                     rebuild_log(t, n_obj, it == events.end() ? std::vector<FeedbackEvent>{} : it->second));
        if (it != events.end()) events.erase(it);
    }
    if (!events.empty()) throw ValidationError("events for unknown student " + events.begin()->first);
    return logs;
}

std::string without_header(const std::string& csv) {
    auto nl = csv.find('\n');
    return nl == std::string::npos ? "" : csv.substr(nl + 1);
}

std::string mining_report_text(const MiningResult& r, const RunDirectory& dir) {
    std::ostringstream os;
    os << header_line(dir);
    const auto& rep = r.report;
    os << "corpus solutions      " << rep.corpus_size << "\n"
       << "shapes extracted      " << rep.shapes_extracted << "\n"
       << "after dedupe          " << rep.shapes_after_dedupe << "\n"
       << "decision shapes       " << rep.decisions_built << "\n"
       << "candidates            " << rep.items_before_filter << "\n"
       << "after support filter  " << rep.items_after_filter << "\n"
       << "features              " << rep.features << "\n"
       << "stop                  " << rep.stop_reason << "\n\n";
    for (const auto& f : r.features) {
        os << "F" << f.id << "  support " << format_fixed(f.occurrences.universe() == 0
                                                              ? 0.0
                                                              : static_cast<double>(f.occurrences.count()) /
                                                                    static_cast<double>(f.occurrences.universe()),
                                                          3)
           << "\n";
        for (const auto& m : f.members) os << "    " << m.id << "\n";
    }
    os << "\nmerges\n";
    for (const auto& m : rep.merges) {
        os << "  " << (m.committed ? (m.forced ? "forced  " : "merged  ") : "rejected") << "  J=" << format_fixed(m.similarity, 4);
        if (m.resolution_before)
            os << "  resolution " << format_fixed(*m.resolution_before, 4) << " -> " << format_fixed(m.resolution_after, 4);
        os << "\n    " << m.a << "\n    " << m.b << "\n";
    }
    os << "\nremovals\n";
    for (const auto& x : rep.removals) os << "  [" << x.stage << "] " << x.item << "  (" << x.cause << ")\n";
    return os.str();
}

std::string derived_csv(const std::vector<DerivedObjective>& derived) {
    std::string out = csv_row({"objective_id", "label", "required_features", "agreement"});
    for (const auto& d : derived) {
        std::vector<std::string> req;
        for (int f : d.spec.required) req.push_back(std::to_string(f));
        out += csv_row({std::to_string(d.spec.id), d.spec.label, join(req, " "), format_fixed(d.agreement)});
    }
    return out;
}

char status_char(ObjectiveStatus s) {
    switch (s) {
        case ObjectiveStatus::complete: return 'c';
        case ObjectiveStatus::broken: return 'b';
        default: return '-';
    }
}

std::string states_csv(const std::vector<EventLog>& logs) {
    std::string out = csv_row({"student_id", "snapshot_index", "timestamp_s", "feature_state", "objective_status"});
    for (const auto& log : logs)
        for (std::size_t k = 0; k < log.snapshot_indices.size(); ++k) {
            std::string st;
            for (auto s : log.statuses[k]) st += status_char(s);
            out += csv_row({log.student_id, std::to_string(log.snapshot_indices[k]), format_fixed(log.timestamps[k], 3),
                            log.states[k].to_string(), st});
        }
    return out;
}

std::string annotations_json(const GeneratedCohort& cohort) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& item : cohort.items) arr.push_back(annotation_to_json(item.annotation, item.trace));
    return arr.dump(2) + "\n";
}

std::string traces_jsonl(const GeneratedCohort& cohort) {
    std::ostringstream os;
    for (const auto& item : cohort.items) write_trace(os, item.trace);
    return os.str();
}

std::string targets_csv(const GeneratedCohort& cohort, const std::string& cohort_name) {
    std::string out = csv_row({"student_id", "cohort", "target_path"});
    for (const auto& item : cohort.items) out += csv_row({item.trace.student_id(), cohort_name, item.target.render()});
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                fields.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.emplace_back();
        } else {
            fields.back() += ch;
        }
    }
    if (quoted) throw ParseError("unterminated quote in CSV line: " + line);
    return fields;
}

std::optional<int> opt_index(const std::string& s, const std::string& where) {
    if (s.empty()) return std::nullopt;
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw ParseError(where + ": bad integer \"" + s + "\"");
        return v;
    } catch (const std::logic_error&) {
        throw ParseError(where + ": bad integer \"" + s + "\"");
    }
}

}  // namespace

std::vector<FirstDetectionRecord> parse_detections_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"student_id", "objective_id",
                                                                                     "system_index", "expert_index",
                                                                                     "type"})
        throw ParseError("detections CSV: unexpected header");
    std::vector<FirstDetectionRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::string where = "detections CSV line " + std::to_string(lineno);
        auto f = split_csv_line(line);
        if (f.size() != 5) throw ParseError(where + ": expected 5 fields");
        FirstDetectionRecord r;
        r.student_id = f[0];
        auto obj = opt_index(f[1], where);
        if (!obj || *obj < 1) throw ParseError(where + ": objective_id must be a positive integer");
        r.objective_id = *obj;
        r.system_index = opt_index(f[2], where);
        r.expert_index = opt_index(f[3], where);
        auto type = detection_type_from_string(f[4]);
        if (!type) throw ParseError(where + ": unknown detection type \"" + f[4] + "\"");
        r.type = *type;
        out.push_back(std::move(r));
    }
    return out;
}

void cmd_mine(const RunConfig& cfg, RunDirectory& dir) {
    const auto& corpus_path = require(cfg.paths.corpus, "corpus", "mine");
    const SolutionCorpus corpus = parse_corpus(dir.echo_input("corpus", corpus_path));
    if (corpus.empty()) throw ValidationError("empty corpus");

    std::optional<std::vector<StudentTrace>> training;
    if (cfg.paths.training_traces) training = load_traces(dir, "training_traces", *cfg.paths.training_traces);
    const MiningResult result = mine(corpus, training ? &*training : nullptr, cfg.mining);
    dir.write(kFeatures, serialize_features(result));
    dir.write("mining_report.txt", mining_report_text(result, dir));

    if (cfg.paths.training_annotations) {
        if (!training) throw ValidationError("training annotations need --training-traces");
        auto truth = load_annotations(dir, "training_annotations", *cfg.paths.training_annotations, *training,
                                      cfg.objective_labels.size());
        auto derived = derive_objectives(to_feature_set(result), *training, truth, cfg.objective_labels);
        dir.write(kObjectives, objectives_to_json(to_objective_set(derived)).dump(2) + "\n");
        dir.write("derived_objectives.csv", derived_csv(derived));
    }
}

void cmd_replay(const RunConfig& cfg, RunDirectory& dir) {
    const auto traces = load_traces(dir, "traces", require(cfg.paths.traces, "traces", "replay"));
    const FeatureSet features =
        parse_features(dir.echo_input("features", require(cfg.paths.features, "features", "replay")));
    const ObjectiveSet objectives =
        parse_objectives(dir.echo_input("objectives", require(cfg.paths.objectives, "objectives", "replay")));
    objectives.check_features(features.size());

    std::vector<EventLog> logs;
    std::ostringstream events;
    for (const auto& t : traces) {
        logs.push_back(replay(t, features, objectives));
        write_events(events, logs.back());
    }
    dir.write(kEvents, events.str());
    dir.write("feature_states.csv", states_csv(logs));
}

void cmd_evaluate(const RunConfig& cfg, RunDirectory& dir) {
    const auto traces = load_traces(dir, "traces", require(cfg.paths.traces, "traces", "evaluate"));
    const auto objectives = load_objectives(cfg, dir);
    const std::size_t n_obj = objective_count(cfg, objectives);
    const auto logs = load_logs(dir, require(cfg.paths.events, "events", "evaluate"), traces, n_obj);
    const auto truth =
        load_annotations(dir, "annotations", require(cfg.paths.annotations, "annotations", "evaluate"), traces, n_obj);

    std::vector<TaggedEvent> tagged;
    std::vector<FirstDetectionRecord> records;
    std::map<std::string, std::vector<ImpactFlag>> flags;
    for (const auto& t : traces) {
        const auto& log = logs.at(t.student_id());
        const auto& a = truth.at(t.student_id());
        if (a.num_snapshots() != t.size()) throw ValidationError("annotation length mismatch for " + t.student_id());
        auto tg = tag_events(log, a, cfg.tolerance_edits);
        tagged.insert(tagged.end(), tg.begin(), tg.end());
        auto rec = classify_first_detections(log, t, a);
        auto fl = flag_impacts_heuristic(t, log, a, rec, cfg.heuristics);
        if (!fl.empty()) flags.emplace(t.student_id(), std::move(fl));
        records.insert(records.end(), rec.begin(), rec.end());
    }

    EvaluationSummaryInput sum;
    sum.counts = count_tags(tagged);
    sum.metrics = confusion_metrics(sum.counts);
    sum.detections = detection_summary(records);
    sum.timing = timing_offset_stats(records, tagged);
    sum.impacts = impact_tables(records, truth);
    sum.num_objectives = n_obj;

    dir.write("tagged_events.csv", tagged_events_csv(tagged));
    dir.write("metrics.csv", metrics_csv(sum.counts, sum.metrics, "tolerance_" + std::to_string(cfg.tolerance_edits)) +
                                 without_header(metrics_csv(sum.timing.strict_counts, sum.timing.strict_metrics, "strict")));
    dir.write(kDetections, detections_csv(records));
    dir.write("impact_table.csv", impact_table_csv(sum.impacts, n_obj));
    dir.write("impact_cooccurrence.csv", cooccurrence_csv(sum.impacts));
    dir.write("impact_flags.csv", flags_csv(flags));
    dir.write("summary.txt", header_line(dir) + evaluation_summary_text(sum));
}

void cmd_graph(const RunConfig& cfg, RunDirectory& dir) {
    const auto traces = load_traces(dir, "traces", require(cfg.paths.traces, "traces", "graph"));
    const auto objectives = load_objectives(cfg, dir);
    const std::size_t n_obj = objective_count(cfg, objectives);
    std::vector<StudentPath> paths;
    if (cfg.graph.mode == GraphSource::expert) {
        const auto truth = load_annotations(dir, "annotations",
                                            require(cfg.paths.annotations, "annotations", "graph --mode expert"),
                                            traces, n_obj);
        for (const auto& t : traces) paths.push_back(expert_path(t, truth.at(t.student_id())));
    } else {
        const auto logs = load_logs(dir, require(cfg.paths.events, "events", "graph --mode system"), traces, n_obj);
        for (const auto& t : traces) paths.push_back(system_path(logs.at(t.student_id())));
    }

    TransitionGraph g = aggregate(cfg.graph.mode, std::move(paths), traces.size());
    DotStyle style;
    style.time_labels = cfg.graph.time_labels;
    auto emit = [&](int stage, const TransitionGraph& graph) {
        const std::string stem = "stage_" + std::to_string(stage);
        dir.write(stem + ".dot", export_dot(graph, style));
        dir.write(stem + ".json", graph_to_json(graph).dump(2) + "\n");
    };
    emit(0, g);
    for (int stage = 1; stage <= cfg.graph.stages; ++stage) {
        if (stage == 1) g = simplify_phase1(g, cfg.graph.min_fraction);
        if (stage == 2) g = simplify_phase2(g);
        if (stage == 3) g = simplify_phase3(g);
        emit(stage, g);
    }
    dir.write("graph.dot", export_dot(g, style));
    const char prefix = cfg.graph.mode == GraphSource::expert ? 'e' : 's';
    dir.write("paths.csv", paths_csv(frequent_paths(g, cfg.graph.min_path_count), prefix));
}

void cmd_phases(const RunConfig& cfg, RunDirectory& dir) {
    const auto traces = load_traces(dir, "traces", require(cfg.paths.traces, "traces", "phases"));
    const auto objectives = load_objectives(cfg, dir);
    const std::size_t n_obj = objective_count(cfg, objectives);
    const auto logs = load_logs(dir, require(cfg.paths.events, "events", "phases"), traces, n_obj);

    std::vector<FirstDetectionRecord> records;
    if (cfg.paths.detections) {
        records = parse_detections_csv(dir.echo_input("detections", *cfg.paths.detections));
    } else if (cfg.paths.annotations) {
        const auto truth = load_annotations(dir, "annotations", *cfg.paths.annotations, traces, n_obj);
        for (const auto& t : traces) {
            auto rec = classify_first_detections(logs.at(t.student_id()), t, truth.at(t.student_id()));
            records.insert(records.end(), rec.begin(), rec.end());
        }
    } else {
        throw ValidationError("phases needs --detections or --annotations");
    }

    const PhaseReport report = phase_report(traces, logs, records, n_obj, cfg.idle_threshold_s);
    dir.write("phase_report.csv", phase_report_csv(report));
    dir.write("scatter_correct_vs_active.csv", scatter_correct_vs_active_csv(report));
    dir.write("scatter_early_vs_idle.csv", scatter_early_vs_idle_csv(report));
    dir.write("scatter_ratios_vs_bc.csv", scatter_ratios_vs_bc_csv(report));
}

void cmd_gen(const RunConfig& cfg, RunDirectory& dir) {
    const auto& g = cfg.generator;
    dir.write("corpus.json", serialize_corpus(generate_corpus(g)));
    const auto eval = generate_evaluation_traces(g);
    dir.write("traces.jsonl", traces_jsonl(eval));
    dir.write("annotations.json", annotations_json(eval));
    std::string targets = targets_csv(eval, to_string(g.cohort));
    if (g.n_training_traces > 0) {
        const auto train = generate_training_traces(g);
        dir.write("training_traces.jsonl", traces_jsonl(train));
        dir.write("training_annotations.json", annotations_json(train));
        targets += without_header(targets_csv(train, "training"));
    }
    dir.write("target_paths.csv", targets);
}

void cmd_report(const RunConfig& cfg, RunDirectory& dir) {
    RunConfig c = cfg;
    std::ostringstream summary;
    summary << header_line(dir);

    if (!c.paths.corpus) {
        auto sub = dir.child("gen", "gen");
        cmd_gen(c, sub);
        sub.finish(c);
        c.paths.corpus = sub.root() / "corpus.json";
        c.paths.traces = sub.root() / "traces.jsonl";
        c.paths.annotations = sub.root() / "annotations.json";
        if (c.generator.n_training_traces > 0) {
            c.paths.training_traces = sub.root() / "training_traces.jsonl";
            c.paths.training_annotations = sub.root() / "training_annotations.json";
        }
        summary << "generated corpus and traces (seed " << c.generator.seed << ", cohort "
                << to_string(c.generator.cohort) << ")\n";
    }
    if (!c.paths.traces || !c.paths.annotations)
        throw ValidationError("report needs --traces and --annotations when a corpus is given");

    {
        RunConfig mc = c;
        if (c.paths.objectives) mc.paths.training_annotations.reset();
        auto sub = dir.child("mine", "mine");
        cmd_mine(mc, sub);
        sub.finish(mc);
        c.paths.features = sub.root() / kFeatures;
        if (!c.paths.objectives) {
            if (!fs::exists(sub.root() / kObjectives))
                throw ValidationError("report needs --objectives or training traces with annotations");
            c.paths.objectives = sub.root() / kObjectives;
        }
        summary << "mined features: see mine/mining_report.txt\n";
    }
    {
        auto sub = dir.child("replay", "replay");
        cmd_replay(c, sub);
        sub.finish(c);
        c.paths.events = sub.root() / kEvents;
    }
    {
        auto sub = dir.child("evaluate", "evaluate");
        cmd_evaluate(c, sub);
        sub.finish(c);
        c.paths.detections = sub.root() / kDetections;
        summary << "\n" << read_file(sub.root() / "metrics.csv");
    }
    for (auto mode : {GraphSource::expert, GraphSource::system}) {
        RunConfig gc = c;
        gc.graph.mode = mode;
        auto sub = dir.child("graph_" + to_string(mode), "graph");
        cmd_graph(gc, sub);
        sub.finish(gc);
        summary << "\n" << to_string(mode) << " paths\n" << read_file(sub.root() / "paths.csv");
    }
    {
        auto sub = dir.child("phases", "phases");
        cmd_phases(c, sub);
        sub.finish(c);
    }
    dir.write("summary.txt", summary.str());
}

}  // namespace ddfb::cli
