#include "rpts/trace_parser.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracle.hpp"
#include "rpts/errors.hpp"
#include "rpts/graph.hpp"
#include "rpts/model.hpp"

namespace rpts {
namespace {

using nlohmann::json;

json load_corpus() {
    std::ifstream in(std::string(RPTS_FIXTURE_DIR) + "/parser_corpus.json");
    EXPECT_TRUE(in.good());
    json doc;
    in >> doc;
    return doc;
}

// The corpus describes clue inventories by count; the texts never matter
// for parsing, only which identifiers resolve.
InstanceRecord corpus_instance(int visual, int textual, bool with_context) {
    InstanceRecord record;
    record.id = "corpus";
    record.language = Language::En;
    record.statement = "statement";
    record.answer = Verdict::Agree;
    record.capabilities = {Capability::Rec};
    record.relationship = Relationship::Independent;
    if (with_context) record.context = "some context";
    for (int i = 1; i <= visual; ++i)
        record.visual_clues.push_back(
            {ClueKind::Visual, i, "", {"visual fact " + std::to_string(i)}});
    for (int i = 1; i <= textual; ++i)
        record.textual_clues.push_back(
            {ClueKind::Textual, i, "textual fact " + std::to_string(i), {}});
    return record;
}

std::string join_lines(const json& lines) {
    std::string text;
    for (const auto& line : lines) {
        text += line.get<std::string>();
        text += '\n';
    }
    return text;
}

std::vector<std::string> serialize_all(const std::vector<ReasoningStep>& steps) {
    std::vector<std::string> lines;
    lines.reserve(steps.size());
    for (const ReasoningStep& step : steps) lines.push_back(canonical_serialize(step));
    return lines;
}

TEST(ParserCorpus, AllCases) {
    json doc = load_corpus();
    ASSERT_TRUE(doc.contains("cases"));
    int executed = 0;

    for (const json& test_case : doc["cases"]) {
        SCOPED_TRACE("case: " + test_case["name"].get<std::string>());
        ++executed;

        InstanceRecord instance =
            corpus_instance(test_case.value("visual", 2), test_case.value("textual", 2),
                            test_case.value("context", true));
        RawTrace raw{join_lines(test_case["input"]), instance.language};

        if (test_case.value("error", "") == "EmptyTrace") {
            EXPECT_THROW(parse_trace(raw), EmptyTrace);
            continue;
        }

        ParseOutcome outcome = parse_trace(raw);

        if (test_case.contains("diagnostics")) {
            const json& expected = test_case["diagnostics"];
            ASSERT_EQ(outcome.diagnostics.size(), expected.size());
            for (size_t i = 0; i < expected.size(); ++i) {
                EXPECT_EQ(outcome.diagnostics[i].line_number,
                          expected[i]["line"].get<int>());
                auto reason =
                    parse_diagnostic_reason(expected[i]["reason"].get<std::string>());
                ASSERT_TRUE(reason.has_value());
                EXPECT_EQ(outcome.diagnostics[i].reason, *reason);
            }
        } else {
            EXPECT_TRUE(outcome.diagnostics.empty());
        }

        // Every accepted step must survive a serialize/parse round trip.
        for (const ReasoningStep& step : outcome.steps) {
            auto reparsed = parse_step_line(canonical_serialize(step));
            ASSERT_TRUE(reparsed.has_value());
            EXPECT_EQ(*reparsed, step);
        }

        if (test_case.value("error", "") == "RemapError") {
            EXPECT_THROW(preprocess(outcome.steps, instance), RemapError);
            continue;
        }

        std::vector<ReasoningStep> cleaned = preprocess(outcome.steps, instance);

        if (test_case.contains("preprocessed")) {
            std::vector<std::string> expected;
            for (const auto& line : test_case["preprocessed"])
                expected.push_back(line.get<std::string>());
            EXPECT_EQ(serialize_all(cleaned), expected);
        }

        // Preprocessing is idempotent: a second pass changes nothing.
        EXPECT_EQ(preprocess(cleaned, instance), cleaned);

        if (test_case.contains("heights")) {
            ReasoningGraph graph = build_graph(cleaned, instance);
            for (const auto& [ordinal, height] : test_case["heights"].items())
                EXPECT_EQ(graph.step_height(std::stoi(ordinal)), height.get<int>())
                    << "ordinal " << ordinal;
        }
    }

    EXPECT_GT(executed, 40);
}

TEST(ParseTrace, EmptyTextThrows) {
    EXPECT_THROW(parse_trace({"", Language::En}), EmptyTrace);
    EXPECT_THROW(parse_trace({"\n\n  \n", Language::En}), EmptyTrace);
}

TEST(ParseTrace, AllLinesMalformedThrows) {
    RawTrace raw{"first paragraph of prose\nsecond paragraph\n", Language::En};
    EXPECT_THROW(parse_trace(raw), EmptyTrace);
}

TEST(ParseStepLine, RejectsGarbage) {
    EXPECT_FALSE(parse_step_line("not a step").has_value());
    EXPECT_FALSE(parse_step_line("[PREMISE: V1] [CONCLUSION 1: missing arrow]").has_value());
    EXPECT_FALSE(parse_step_line("[PREMISE: X1] -> [CONCLUSION 1: bad kind]").has_value());
    EXPECT_FALSE(parse_step_line("[PREMISE: V0] -> [CONCLUSION 1: zero index]").has_value());
    EXPECT_FALSE(parse_step_line("-> [CONCLUSION 1: no premises]").has_value());
    EXPECT_FALSE(parse_step_line("").has_value());
}

TEST(ParseStepLine, AcceptsBareReferences) {
    auto step = parse_step_line("[PREMISE: V] + [PREMISE: T] + [PREMISE: C] + "
                                "[PREMISE: CTX] -> [CONCLUSION 4: everything]");
    ASSERT_TRUE(step.has_value());
    ASSERT_EQ(step->premises.size(), 4u);
    EXPECT_EQ(step->premises[0].kind, RefKind::Visual);
    EXPECT_FALSE(step->premises[0].index.has_value());
    EXPECT_EQ(step->premises[1].kind, RefKind::Textual);
    EXPECT_FALSE(step->premises[1].index.has_value());
    EXPECT_EQ(step->premises[2].kind, RefKind::Conclusion);
    EXPECT_FALSE(step->premises[2].index.has_value());
    EXPECT_EQ(step->premises[3].kind, RefKind::Context);
    EXPECT_EQ(step->ordinal, 4);
    EXPECT_EQ(step->conclusion_text, "everything");
}

TEST(ParseStepLine, CapsReferenceDigits) {
    EXPECT_TRUE(parse_step_line("[PREMISE: V12345678] -> [CONCLUSION 1: x]").has_value());
    EXPECT_FALSE(parse_step_line("[PREMISE: V123456789] -> [CONCLUSION 1: x]").has_value());
}

TEST(DiagnosticReason, StringsRoundTrip) {
    for (DiagnosticReason reason :
         {DiagnosticReason::MalformedLine, DiagnosticReason::BadOrdinal,
          DiagnosticReason::ForwardConclusionRef, DiagnosticReason::UnknownClueRef,
          DiagnosticReason::EmptyPremises}) {
        auto parsed = parse_diagnostic_reason(to_string(reason));
        ASSERT_TRUE(parsed.has_value());
        EXPECT_EQ(*parsed, reason);
    }
    EXPECT_FALSE(parse_diagnostic_reason("NoSuchReason").has_value());
}

// Mutating a clean trace with the redundancies preprocessing removes must
// always land on a fixed point after one pass.
TEST(Preprocess, IdempotentOnRandomDirtyTraces) {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 200; ++trial) {
        SCOPED_TRACE("trial " + std::to_string(trial));
        InstanceRecord instance = oracle::random_instance(rng, 3, 2, true);
        std::vector<ReasoningStep> steps = oracle::random_clean_steps(rng, instance, 6);

        // Dirty the trace: duplicate premises within a step and sprinkle in
        // unnumbered references that R3 will expand.
        for (ReasoningStep& step : steps) {
            if (rng() % 2 == 0 && !step.premises.empty())
                step.premises.push_back(step.premises.front());
            if (rng() % 3 == 0)
                step.premises.push_back({RefKind::Textual, std::nullopt});
            if (rng() % 4 == 0)
                step.premises.push_back({RefKind::Visual, std::nullopt});
        }

        std::vector<ReasoningStep> once = preprocess(steps, instance);
        std::vector<ReasoningStep> twice = preprocess(once, instance);
        EXPECT_EQ(once, twice);

        // The cleaned trace still parses line by line.
        for (const ReasoningStep& step : once) {
            auto reparsed = parse_step_line(canonical_serialize(step));
            ASSERT_TRUE(reparsed.has_value());
            EXPECT_EQ(*reparsed, step);
        }
    }
}

}  // namespace
}  // namespace rpts
