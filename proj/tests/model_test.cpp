#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "rpts/model.hpp"
#include "rpts/trace_parser.hpp"

namespace {

using namespace rpts;

InstanceRecord valid_record() {
    InstanceRecord record;
    record.id = "x-001";
    record.statement = "the shop is closed";
    record.context = "weekend scene";
    record.language = Language::En;
    record.answer = Verdict::Agree;
    record.capabilities = {Capability::Rec, Capability::OCR};
    record.relationship = Relationship::Guided;
    record.guided_subtype = GuidedSubtype::Explicit;
    record.visual_clues = {{ClueKind::Visual, 1, "storefront", {"the sign says closed"}}};
    record.textual_clues = {{ClueKind::Textual, 1, "shops close on sundays", {}}};
    return record;
}

TEST(CanonicalSerialize, TwoPremiseStep) {
    ReasoningStep step{1,
                       {{RefKind::Visual, 1}, {RefKind::Textual, 2}},
                       "the box was open"};
    EXPECT_EQ(canonical_serialize(step),
              "[PREMISE: V1] + [PREMISE: T2] -> [CONCLUSION 1: the box was open]");
}

TEST(CanonicalSerialize, ConclusionReferences) {
    ReasoningStep step{3,
                       {{RefKind::Conclusion, 1}, {RefKind::Conclusion, 2}},
                       "the match is cancelled"};
    EXPECT_EQ(canonical_serialize(step),
              "[PREMISE: C1] + [PREMISE: C2] -> [CONCLUSION 3: the match is cancelled]");
}

TEST(CanonicalSerialize, UnnumberedAndContext) {
    ReasoningStep step{2,
                       {{RefKind::Textual, std::nullopt}, {RefKind::Context, std::nullopt}},
                       "x"};
    EXPECT_EQ(canonical_serialize(step),
              "[PREMISE: T] + [PREMISE: CTX] -> [CONCLUSION 2: x]");
}

TEST(CanonicalSerialize, RoundTripsThroughParser) {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        auto instance = oracle::random_instance(rng, 3, 3, true);
        auto steps = oracle::random_clean_steps(rng, instance, 6);
        for (const auto& step : steps) {
            auto parsed = parse_step_line(canonical_serialize(step));
            ASSERT_TRUE(parsed.has_value());
            EXPECT_EQ(*parsed, step);
        }
    }
}

TEST(CanonicalSerialize, RoundTripsBareReferences) {
    ReasoningStep step{4,
                       {{RefKind::Visual, std::nullopt},
                        {RefKind::Conclusion, std::nullopt},
                        {RefKind::Visual, 12}},
                       "mixed [refs] everywhere"};
    auto parsed = parse_step_line(canonical_serialize(step));
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(*parsed, step);
}

TEST(ValidateInstance, ValidRecordHasNoViolations) {
    EXPECT_TRUE(validate_instance(valid_record()).empty());
}

TEST(ValidateInstance, MissingTextualCluesIsMultimodalityViolation) {
    InstanceRecord record = valid_record();
    record.textual_clues.clear();
    auto violations = validate_instance(record);
    ASSERT_EQ(violations.size(), 1u);
    EXPECT_EQ(violations[0].field, "textual_clues");
}

TEST(ValidateInstance, MissingVisualClues) {
    InstanceRecord record = valid_record();
    record.visual_clues.clear();
    EXPECT_FALSE(validate_instance(record).empty());
}

TEST(ValidateInstance, SubtypeWithoutGuidedRelationship) {
    InstanceRecord record = valid_record();
    record.relationship = Relationship::Independent;
    auto violations = validate_instance(record);
    ASSERT_EQ(violations.size(), 1u);
    EXPECT_EQ(violations[0].field, "guided_subtype");
}

TEST(ValidateInstance, GuidedWithoutSubtype) {
    InstanceRecord record = valid_record();
    record.guided_subtype.reset();
    EXPECT_FALSE(validate_instance(record).empty());
}

TEST(ValidateInstance, EmptyCapabilities) {
    InstanceRecord record = valid_record();
    record.capabilities.clear();
    EXPECT_FALSE(validate_instance(record).empty());
}

TEST(ValidateInstance, UnknownAnswerRejected) {
    InstanceRecord record = valid_record();
    record.answer = Verdict::Unknown;
    EXPECT_FALSE(validate_instance(record).empty());
}

TEST(ValidateInstance, VisualClueNeedsGroundTruth) {
    InstanceRecord record = valid_record();
    record.visual_clues[0].ground_truth_conclusions.clear();
    EXPECT_FALSE(validate_instance(record).empty());
}

TEST(ValidateInstance, TextualClueMustNotCarryGroundTruth) {
    InstanceRecord record = valid_record();
    record.textual_clues[0].ground_truth_conclusions = {"stray"};
    EXPECT_FALSE(validate_instance(record).empty());
}

TEST(ValidateInstance, DuplicateClueIndex) {
    InstanceRecord record = valid_record();
    record.visual_clues.push_back(record.visual_clues[0]);
    EXPECT_FALSE(validate_instance(record).empty());
}

TEST(ValidateInstance, OrderIndependentOverClueLists) {
    InstanceRecord record = valid_record();
    record.visual_clues = {{ClueKind::Visual, 2, "", {"b"}},
                           {ClueKind::Visual, 1, "", {"a"}}};
    InstanceRecord swapped = record;
    std::swap(swapped.visual_clues[0], swapped.visual_clues[1]);
    EXPECT_EQ(validate_instance(record), validate_instance(swapped));
}

TEST(ValidateInstance, ReferenceStepViolationsAreReported) {
    InstanceRecord record = valid_record();
    // Step 2 cites conclusion 2: not strictly earlier.
    record.reference_steps = {
        ReasoningStep{1, {{RefKind::Visual, 1}}, "a"},
        ReasoningStep{2, {{RefKind::Conclusion, 2}}, "b"},
    };
    EXPECT_FALSE(validate_instance(record).empty());
}

TEST(ValidateInstance, ReferenceStepsNeedDenseOrdinals) {
    InstanceRecord record = valid_record();
    record.reference_steps = {ReasoningStep{2, {{RefKind::Visual, 1}}, "a"}};
    EXPECT_FALSE(validate_instance(record).empty());
}

TEST(EnumStrings, RoundTrips) {
    for (Verdict v : {Verdict::Agree, Verdict::Disagree, Verdict::Unknown})
        EXPECT_EQ(parse_verdict_name(to_string(v)), v);
    for (Language l : {Language::En, Language::Zh})
        EXPECT_EQ(parse_language_name(to_string(l)), l);
    for (Capability c : all_capabilities())
        EXPECT_EQ(parse_capability_name(to_string(c)), c);
    for (Relationship r :
         {Relationship::Guided, Relationship::Adversarial, Relationship::Independent})
        EXPECT_EQ(parse_relationship_name(to_string(r)), r);
    EXPECT_FALSE(parse_verdict_name("maybe").has_value());
}

TEST(ClueId, Formats) {
    EXPECT_EQ((Clue{ClueKind::Visual, 1, "", {}}).id(), "V1");
    EXPECT_EQ((Clue{ClueKind::Textual, 12, "", {}}).id(), "T12");
    EXPECT_EQ((Clue{ClueKind::Context, 0, "", {}}).id(), "CTX");
}

}  // namespace
