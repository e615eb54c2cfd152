#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ddfb/ast.hpp"
#include "ddfb/trace.hpp"

namespace ddfb {

struct Solution {
    std::string id;
    AstNode root;
};

// Final correct solutions used for mining. Ids are unique.
class SolutionCorpus {
public:
    SolutionCorpus() = default;
    explicit SolutionCorpus(std::vector<Solution> solutions);

    const std::vector<Solution>& solutions() const { return solutions_; }
    std::size_t size() const { return solutions_.size(); }
    bool empty() const { return solutions_.empty(); }
    const Solution& operator[](std::size_t i) const { return solutions_[i]; }

private:
    std::vector<Solution> solutions_;
};

// Array of {"solution_id", "ast"}.
SolutionCorpus parse_corpus(std::string_view text, const IngestOptions& opts = {});
std::string serialize_corpus(const SolutionCorpus& corpus);

}  // namespace ddfb
