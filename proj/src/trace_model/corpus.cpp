#include "ddfb/corpus.hpp"

#include <set>

#include "ddfb/errors.hpp"

namespace ddfb {

SolutionCorpus::SolutionCorpus(std::vector<Solution> solutions) : solutions_(std::move(solutions)) {
    std::set<std::string> seen;
    for (const auto& s : solutions_)
        if (!seen.insert(s.id).second) throw ValidationError("duplicate solution_id '" + s.id + "'");
}

SolutionCorpus parse_corpus(std::string_view text, const IngestOptions& opts) {
    auto doc = parse_json_document(text);
    if (!doc.is_array()) throw ValidationError("corpus document must be an array");
    std::vector<Solution> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& item = doc[i];
        const std::string where = "/" + std::to_string(i);
        if (!item.is_object() || !item.contains("solution_id") || !item.contains("ast"))
            throw ValidationError("corpus entry " + where + " needs solution_id and ast");
        std::string id;
        if (item["solution_id"].is_string())
            id = item["solution_id"].get<std::string>();
        else if (item["solution_id"].is_number_integer())
            id = std::to_string(item["solution_id"].get<long long>());
        else
            throw ValidationError("corpus entry " + where + ": solution_id must be a string or integer");
        AstNode root = ast_from_json(item["ast"], where + "/ast");
        if (opts.anonymize_identifiers) root = anonymize_identifiers(root, opts.identifier_labels);
        out.push_back(Solution{std::move(id), std::move(root)});
    }
    return SolutionCorpus(std::move(out));
}

std::string serialize_corpus(const SolutionCorpus& corpus) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : corpus.solutions()) {
        nlohmann::ordered_json j;
        j["solution_id"] = s.id;
        j["ast"] = ast_to_json(s.root);
        arr.push_back(std::move(j));
    }
    return arr.dump(1);
}

}  // namespace ddfb
