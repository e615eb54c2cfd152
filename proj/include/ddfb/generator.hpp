#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ddfb/annotation.hpp"
#include "ddfb/corpus.hpp"
#include "ddfb/squiral.hpp"
#include "ddfb/trace.hpp"

namespace ddfb {

// Deterministic 64-bit generator with distribution mappings written out by
// hand, so the same seed gives the same data with any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next();
    double uniform01();                           // [0, 1)
    long long uniform_int(long long lo, long long hi);  // inclusive
    bool bernoulli(double p);
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[static_cast<std::size_t>(uniform_int(0, static_cast<long long>(i) - 1))]);
    }

private:
    std::uint64_t state_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

enum class Cohort { table3, in_distribution };
std::string to_string(Cohort c);
Cohort cohort_from_string(std::string_view s);

struct GeneratorConfig {
    std::uint64_t seed = 1;
    int n_solutions = 20;
    double custom_block_fraction = 1.0;  // the rest are flat move/turn sequences
    double nested_loop_fraction = 0.15;  // of custom-block solutions
    double variant_fraction = 0.15;      // per unit, of custom-block solutions
    int n_traces = 27;
    Cohort cohort = Cohort::table3;
    int n_training_traces = 27;  // always in-distribution
    double edit_error_rate = 0.15;  // chance of a break-and-restore dip after a completion
    double mean_gap_s = 40.0;
    double timestamp_jitter = 0.5;  // relative spread of the gap
    double idle_rate = 0.05;        // chance that a gap is a long pause
    int max_neutral_edits = 2;

    // Throws ValidationError.
    void validate() const;
};

SolutionCorpus generate_corpus(const GeneratorConfig& config);

// Objective sets after S, then the terminal (WC or NWC).
struct TargetPath {
    std::vector<std::vector<int>> states;
    FinalOutcome outcome = FinalOutcome::working;

    std::string render() const;
};

// Accepts "S⇒3⇒34⇒WC" or "S=>3=>34=>WC".
TargetPath parse_target_path(std::string_view text);

struct GeneratedTrace {
    TargetPath target;
    StudentTrace trace;
    ExpertAnnotation annotation;
};

// The expert matrix comes from the hand rules in squiral.hpp applied to each
// snapshot; after cycle elision it realizes exactly `target`. Throws
// InvariantError if it does not.
GeneratedTrace generate_trace(const GeneratorConfig& config, const TargetPath& target, const std::string& student_id,
                              std::uint64_t seed);

// The 25 frequent expert paths plus two rare NWC endings, 27 in all.
std::vector<TargetPath> table3_expert_paths();
// Every path starts by creating the custom block, then adds objectives
// 2-4 in a random order; a few attempts stop early with NWC.
std::vector<TargetPath> in_distribution_paths(int n, std::uint64_t seed);

struct GeneratedCohort {
    std::vector<GeneratedTrace> items;

    std::vector<StudentTrace> traces() const;
    std::map<std::string, ExpertAnnotation> truth() const;
};

GeneratedCohort generate_cohort(const GeneratorConfig& config, const std::vector<TargetPath>& paths,
                                const std::string& id_prefix, std::uint64_t stream);

// Evaluation cohort per config.cohort, and the training cohort.
GeneratedCohort generate_evaluation_traces(const GeneratorConfig& config);
GeneratedCohort generate_training_traces(const GeneratorConfig& config);

}  // namespace ddfb
