#pragma once

// Brute-force reference for the mining stages. Everything here is written
// from the definitions, with std::set occurrence sets and exact rational
// threshold comparisons, and shares no code with the miner.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ddfb/ast.hpp"
#include "ddfb/corpus.hpp"

namespace oracle {

struct Shape {
    std::vector<std::string> stem;
    std::vector<std::string> window;
    std::string id;
    std::size_t labels() const { return stem.size() + window.size(); }
};

// num/den, compared without rounding.
struct Ratio {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct Config {
    int p = 3;
    int q = 4;
    bool values = true;
    Ratio dedupe{950625, 1000000};
    Ratio support{81, 100};
};

using Ids = std::set<int>;

std::vector<Shape> extract(const ddfb::AstNode& root, int p, int q, bool values);
bool occurs(const Shape& s, const ddfb::AstNode& root, bool values);

struct Decision {
    std::string first;
    std::string second;
    Ids occurrences;
};

struct Stages {
    std::vector<std::string> shapes;  // sorted ids over the whole corpus
    std::map<std::string, Ids> occurrences;
    std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>> overlap;  // |∩|, |∪|
    std::vector<std::string> dedupe_survivors;
    std::vector<std::string> dedupe_removed;
    std::vector<Decision> decisions;          // sorted by "a || b"
    std::vector<std::string> filter_survivors;  // shapes then decisions, each sorted
};

Stages run(const ddfb::SolutionCorpus& corpus, const Config& config);

// Corpus of 1..10 mutated copies of a random base tree (at most 15 nodes
// each), so that shapes overlap heavily and every stage has work to do.
ddfb::SolutionCorpus random_corpus(unsigned seed);
// Default thresholds, or thresholds drawn from k/20 grids.
Config random_config(unsigned seed);

// Runs the miner's stages on the corpus and lists every disagreement with
// the oracle; empty when they match exactly.
std::vector<std::string> diff_against_miner(const ddfb::SolutionCorpus& corpus, const Config& config);

}  // namespace oracle
