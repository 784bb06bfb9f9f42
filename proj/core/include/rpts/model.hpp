#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rpts {

/// Kind of an atomic evidence unit (a leaf of the reasoning tree).
enum class ClueKind { Visual, Textual, Context };

/// What a premise token points at. Clue kinds plus intermediate conclusions.
enum class RefKind { Visual, Textual, Context, Conclusion };

/// Final judgment extracted from a trace against the instance statement.
/// Unknown is never a ground-truth answer; it only marks extraction failure.
enum class Verdict { Agree, Disagree, Unknown };

enum class Language { En, Zh };

/// Reasoning capabilities an instance may require.
enum class Capability { Rec, OCR, Com, Math, IC, SA };

/// How the two modalities interact during reasoning.
enum class Relationship { Guided, Adversarial, Independent };

/// For Guided instances: whether one modality names the needed information
/// outright or only hints at it.
enum class GuidedSubtype { Explicit, Implicit };

/// An atomic evidence unit. Identified as V<i>, T<i> or CTX.
/// Visual clues carry their annotated ground-truth conclusions; no image
/// bytes are stored anywhere.
struct Clue {
    ClueKind kind = ClueKind::Textual;
    int index = 0;  // 1-based; 0 for Context (never indexed)
    std::string text;  // clue content, or a human-readable label for Visual
    std::vector<std::string> ground_truth_conclusions;  // Visual only

    std::string id() const;

    friend bool operator==(const Clue&, const Clue&) = default;
};

/// One premise token of a reasoning step. An absent index is an unnumbered
/// reference meaning "all items of this kind".
struct PremiseRef {
    RefKind kind = RefKind::Textual;
    std::optional<int> index;

    std::string token() const;  // "V1", "T", "C3", "CTX"

    friend auto operator<=>(const PremiseRef&, const PremiseRef&) = default;
};

/// One "[PREMISE] + [PREMISE] -> [CONCLUSION]" record.
struct ReasoningStep {
    int ordinal = 0;  // 1-based position in the trace
    std::vector<PremiseRef> premises;
    std::string conclusion_text;

    friend bool operator==(const ReasoningStep&, const ReasoningStep&) = default;
};

/// One benchmark instance: a statement to judge, its evidence, and metadata.
struct InstanceRecord {
    std::string id;
    std::string statement;
    std::string context;  // may be empty; referenced as CTX when present
    Language language = Language::En;
    Verdict answer = Verdict::Agree;  // Agree or Disagree only
    std::set<Capability> capabilities;
    Relationship relationship = Relationship::Guided;
    std::optional<GuidedSubtype> guided_subtype;  // present iff Guided
    std::vector<Clue> visual_clues;
    std::vector<Clue> textual_clues;
    std::optional<std::vector<ReasoningStep>> reference_steps;

    friend bool operator==(const InstanceRecord&, const InstanceRecord&) = default;
};

/// One broken invariant, named by field and rule.
struct Violation {
    std::string field;
    std::string rule;

    std::string to_string() const { return field + ": " + rule; }

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Renders a step as one canonical trace line, e.g.
/// "[PREMISE: V1] + [PREMISE: T2] -> [CONCLUSION 1: the box was open]".
/// Parsing the output reproduces an equal step.
std::string canonical_serialize(const ReasoningStep& step);

/// Checks every InstanceRecord invariant. Violations are data, not failures;
/// the result is independent of clue ordering.
std::vector<Violation> validate_instance(const InstanceRecord& record);

// Enum <-> string helpers. Parsers return nullopt on unknown input.
std::string to_string(ClueKind kind);
std::string to_string(RefKind kind);
std::string to_string(Verdict verdict);
std::string to_string(Language language);
std::string to_string(Capability capability);
std::string to_string(Relationship relationship);
std::string to_string(GuidedSubtype subtype);
std::optional<Verdict> parse_verdict_name(const std::string& name);
std::optional<Language> parse_language_name(const std::string& name);
std::optional<Capability> parse_capability_name(const std::string& name);
std::optional<Relationship> parse_relationship_name(const std::string& name);
std::optional<GuidedSubtype> parse_guided_subtype_name(const std::string& name);

/// All capabilities in their fixed reporting order.
const std::vector<Capability>& all_capabilities();

}  // namespace rpts
