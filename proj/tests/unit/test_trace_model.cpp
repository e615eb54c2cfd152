#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ddfb/annotation.hpp"
#include "ddfb/ast.hpp"
#include "ddfb/corpus.hpp"
#include "ddfb/errors.hpp"
#include "ddfb/trace.hpp"
#include "support/builders.hpp"

using namespace ddfb;
using ddfb::testing::make_trace;
using ddfb::testing::n;
using ddfb::testing::v;

namespace {

// Squiral reference solution: a custom block holding pen down and a repeat
// with move/turn/change, called from the green-flag script.
const char* kSquiral = R"({"label":"snapshot","children":[
  {"label":"script","children":[
    {"label":"receiveGo"},
    {"label":"customBlockCall","value":"CreateASquiralOfSize","children":[{"label":"literal","value":"10"}]}]},
  {"label":"customBlocks","children":[
    {"label":"customBlock","value":"CreateASquiralOfSize","children":[
      {"label":"param","value":"size"},
      {"label":"param","value":"length"},
      {"label":"setPenState","value":"down"},
      {"label":"repeat","children":[
        {"label":"product","children":[{"label":"var","value":"size"},{"label":"literal","value":"4"}]},
        {"label":"move","children":[{"label":"var","value":"length"}]},
        {"label":"turnLeft","children":[{"label":"literal","value":"90"}]},
        {"label":"changeVar","value":"length","children":[{"label":"literal","value":"10"}]}]}]}]}]})";

std::string record(int index, double t, const std::string& ast = R"({"label":"snapshot"})") {
    std::ostringstream os;
    os << R"({"student_id":"s1","index":)" << index << R"(,"timestamp_s":)" << t << R"(,"ast":)" << ast << "}\n";
    return os.str();
}

AstNode random_tree(std::mt19937& rng, int depth) {
    static const char* labels[] = {"a", "b", "c"};
    std::uniform_int_distribution<int> lab(0, 2), kids(0, depth > 0 ? 3 : 0), val(0, 3);
    std::vector<AstNode> ch;
    const int k = kids(rng);
    for (int i = 0; i < k; ++i) ch.push_back(random_tree(rng, depth - 1));
    const int vv = val(rng);
    return vv == 0 ? AstNode(labels[lab(rng)], std::to_string(vv), std::move(ch))
                   : AstNode(labels[lab(rng)], std::nullopt, std::move(ch));
}

}  // namespace

TEST(ParseAst, LeafDocument) {
    AstNode node = parse_ast(R"({"label":"pen down"})");
    EXPECT_EQ(node.label(), "pen down");
    EXPECT_TRUE(node.is_leaf());
    EXPECT_FALSE(node.value());
}

TEST(ParseAst, ReferenceSolutionHasAtLeastSixDescendants) {
    AstNode root = parse_ast(kSquiral);
    EXPECT_EQ(root.label(), "snapshot");
    EXPECT_GE(root.size() - 1, 6u);
}

TEST(ParseAst, KeysOutOfOrderAreRejected) {
    EXPECT_THROW(parse_ast(R"({"children":[],"label":"a"})"), ValidationError);
    EXPECT_THROW(parse_ast(R"({"label":"a","children":[],"value":"x"})"), ValidationError);
}

TEST(ParseAst, EmptyLabelIsValidationError) {
    EXPECT_THROW(parse_ast(R"({"label":""})"), ValidationError);
    EXPECT_THROW(AstNode(""), ValidationError);
}

TEST(ParseAst, MalformedDocumentReportsPosition) {
    try {
        parse_ast("{\"label\":\n  \"a\",,}");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
    }
}

TEST(ParseAst, SerializeIsCanonical) {
    AstNode root = parse_ast(kSquiral);
    const std::string once = serialize_ast(root);
    EXPECT_EQ(serialize_ast(parse_ast(once)), once);
    EXPECT_TRUE(ast_equal(parse_ast(once), root));
}

TEST(ParseAst, SerializeRoundTripRandomTrees) {
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        AstNode t = random_tree(rng, 4);
        const std::string s = serialize_ast(t);
        EXPECT_EQ(serialize_ast(parse_ast(s)), s);
        EXPECT_TRUE(ast_equal(parse_ast(s), t));
    }
}

TEST(AstEqual, Examples) {
    AstNode a = n("script", {n("move"), v("turn", "90")});
    EXPECT_TRUE(ast_equal(a, a));
    EXPECT_FALSE(ast_equal(a, n("script", {v("turn", "90"), n("move")})));
    EXPECT_FALSE(ast_equal(v("turn", "90"), v("turn", "45")));
}

TEST(AstEqual, IsAnEquivalenceOnRandomTrees) {
    std::mt19937 rng(11);
    std::vector<AstNode> pool;
    for (int i = 0; i < 60; ++i) pool.push_back(random_tree(rng, 2));
    for (const auto& a : pool) {
        EXPECT_TRUE(ast_equal(a, a));
        for (const auto& b : pool) {
            EXPECT_EQ(ast_equal(a, b), ast_equal(b, a));
            if (!ast_equal(a, b)) continue;
            for (const auto& c : pool)
                if (ast_equal(b, c)) {
                    EXPECT_TRUE(ast_equal(a, c));
                }
        }
    }
}

TEST(Anonymize, RenamesInFirstUseOrder) {
    AstNode t = n("s", {v("var", "length"), v("var", "size"), v("var", "length"), v("literal", "10")});
    AstNode a = anonymize_identifiers(t);
    ASSERT_EQ(a.children().size(), 4u);
    EXPECT_EQ(*a.children()[0].value(), "var_0");
    EXPECT_EQ(*a.children()[1].value(), "var_1");
    EXPECT_EQ(*a.children()[2].value(), "var_0");
    EXPECT_EQ(*a.children()[3].value(), "10");
}

TEST(ParseTrace, ThreeRecords) {
    std::istringstream in(record(0, 0) + record(1, 10) + record(2, 25));
    StudentTrace t = parse_trace(in);
    EXPECT_EQ(t.size(), 3u);
    EXPECT_DOUBLE_EQ(t.end_time(), 25.0);
}

TEST(ParseTrace, IndexGapsArePreserved) {
    std::istringstream in(record(0, 0) + record(2, 5));
    StudentTrace t = parse_trace(in);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t[1].index, 2);
    EXPECT_EQ(t.position_of(2), 1);
    EXPECT_EQ(t.position_of(1), -1);
}

TEST(ParseTrace, SortsByIndex) {
    std::istringstream in(record(2, 20) + record(0, 0) + record(1, 10));
    StudentTrace t = parse_trace(in);
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t[i].index, static_cast<int>(i));
}

TEST(ParseTrace, DecreasingTimestampIsError) {
    std::istringstream in(record(0, 0) + record(1, 30) + record(2, 20));
    EXPECT_THROW(parse_trace(in), ValidationError);
}

TEST(ParseTrace, DuplicateIndexIsError) {
    std::istringstream in(record(0, 0) + record(0, 5));
    EXPECT_THROW(parse_trace(in), ValidationError);
}

TEST(ParseTrace, WriteThenParsePreservesCountAndOrder) {
    std::mt19937 rng(3);
    for (int k = 0; k < 20; ++k) {
        std::vector<AstNode> roots;
        std::vector<double> ts;
        double t = 0;
        const int len = 1 + k % 7;
        for (int i = 0; i < len; ++i) {
            roots.push_back(random_tree(rng, 2));
            ts.push_back(t);
            t += 0.5 * (i % 3);
        }
        StudentTrace trace = make_trace("s" + std::to_string(k), roots, ts);
        std::ostringstream out;
        write_trace(out, trace);
        std::istringstream in(out.str());
        StudentTrace back = parse_trace(in);
        ASSERT_EQ(back.size(), trace.size());
        for (std::size_t i = 0; i < back.size(); ++i) {
            EXPECT_EQ(back[i].index, trace[i].index);
            EXPECT_DOUBLE_EQ(back[i].timestamp, trace[i].timestamp);
            EXPECT_TRUE(ast_equal(back[i].root, trace[i].root));
        }
    }
}

TEST(ParseTraces, SplitsInterleavedStudents) {
    std::string text = record(0, 0);
    text += R"({"student_id":"s2","index":0,"timestamp_s":0,"ast":{"label":"snapshot"}})" "\n";
    text += record(1, 4);
    std::istringstream in(text);
    auto traces = parse_traces(in);
    ASSERT_EQ(traces.size(), 2u);
    EXPECT_EQ(traces[0].student_id(), "s1");
    EXPECT_EQ(traces[0].size(), 2u);
    EXPECT_EQ(traces[1].student_id(), "s2");
}

TEST(ParseAnnotations, FirstCompleteIndexFlipsColumn) {
    StudentTrace t = ddfb::testing::timed_trace("s1", {0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    ExpertAnnotation a = parse_annotations(R"({"student_id":"s1","final_outcome":"working","objectives":{"1":3}})", t, 4);
    EXPECT_EQ(a.num_snapshots(), 10u);
    EXPECT_EQ(a.num_objectives(), 4u);
    for (std::size_t p = 0; p < 10; ++p) {
        EXPECT_EQ(a.complete(p, 1), p >= 3);
        for (int o = 2; o <= 4; ++o) EXPECT_FALSE(a.complete(p, o));
    }
    EXPECT_EQ(a.first_complete(1), std::optional<std::size_t>(3));
    EXPECT_EQ(a.final_outcome, FinalOutcome::working);
}

TEST(ParseAnnotations, IntervalsAndImpacts) {
    StudentTrace t = ddfb::testing::timed_trace("s1", {0, 1, 2, 3, 4, 5});
    ExpertAnnotation a = parse_annotations(
        R"({"student_id":"s1","final_outcome":"non_working","impacts":["ES"],"objectives":{"2":[[1,2],[4,null]]}})", t,
        4);
    std::vector<bool> col;
    for (std::size_t p = 0; p < 6; ++p) col.push_back(a.complete(p, 2));
    EXPECT_EQ(col, (std::vector<bool>{false, true, true, false, true, true}));
    EXPECT_EQ(a.impacts, std::set<ImpactType>{ImpactType::ES});
    EXPECT_EQ(a.final_outcome, FinalOutcome::non_working);
}

TEST(ParseAnnotations, UnknownObjectiveIsError) {
    StudentTrace t = ddfb::testing::timed_trace("s1", {0, 1});
    EXPECT_THROW(parse_annotations(R"({"student_id":"s1","objectives":{"5":0}})", t, 4), ValidationError);
}

TEST(ParseAnnotations, IndexBeyondTraceIsError) {
    StudentTrace t = ddfb::testing::timed_trace("s1", {0, 1});
    EXPECT_THROW(parse_annotations(R"({"student_id":"s1","objectives":{"1":[[0,7]]}})", t, 4), ValidationError);
}

TEST(ParseAnnotations, RoundTrip) {
    StudentTrace t = ddfb::testing::timed_trace("s1", {0, 1, 2, 3, 4});
    ExpertAnnotation a = parse_annotations(
        R"({"student_id":"s1","final_outcome":"working","impacts":["IPB"],"impact_links":{"IPB":["ID"]},"objectives":{"1":[[0,1],[3,null]],"3":2}})",
        t, 3);
    ExpertAnnotation b = annotation_from_json(annotation_to_json(a, t), t, 3);
    for (std::size_t p = 0; p < 5; ++p) EXPECT_EQ(a.complete_set(p), b.complete_set(p));
    EXPECT_EQ(a.impacts, b.impacts);
    EXPECT_EQ(a.impact_links, b.impact_links);
    EXPECT_EQ(a.final_outcome, b.final_outcome);
}

TEST(Corpus, ParseAndSerialize) {
    std::string text = std::string(R"([{"solution_id":"a","ast":)") + kSquiral + R"(},{"solution_id":"b","ast":{"label":"x"}}])";
    SolutionCorpus c = parse_corpus(text);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].id, "a");
    SolutionCorpus back = parse_corpus(serialize_corpus(c));
    EXPECT_TRUE(ast_equal(back[0].root, c[0].root));
    EXPECT_EQ(serialize_corpus(back), serialize_corpus(c));
}

TEST(Corpus, DuplicateIdsRejected) {
    EXPECT_THROW(parse_corpus(R"([{"solution_id":"a","ast":{"label":"x"}},{"solution_id":"a","ast":{"label":"y"}}])"),
                 ValidationError);
}
