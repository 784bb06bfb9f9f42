#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rpts/model.hpp"

namespace rpts {

/// Raw trace text, one step per line:
///
///   step       = premise *( " + " premise ) " -> " conclusion
///   premise    = "[PREMISE: " ref "]"
///   ref        = ("V" | "T" | "C") [1-9][0-9]*  |  "V" | "T" | "C" | "CTX"
///   conclusion = "[CONCLUSION " ordinal ": " text "]"
///
/// Bare kind letters denote unnumbered references. Blank lines are ignored.
/// The conclusion text runs to the final "]" on the line, so "]" is legal
/// inside the text. Both "->" and the arrow glyph are accepted.
struct RawTrace {
    std::string text;
    Language language = Language::En;
};

enum class DiagnosticReason {
    MalformedLine,
    BadOrdinal,
    ForwardConclusionRef,
    UnknownClueRef,
    EmptyPremises,
};

std::string to_string(DiagnosticReason reason);
std::optional<DiagnosticReason> parse_diagnostic_reason(const std::string& name);

/// Why one input line was skipped. Lines are never silently dropped.
struct ParseDiagnostic {
    int line_number = 0;  // 1-based, counting blank lines
    DiagnosticReason reason = DiagnosticReason::MalformedLine;
    std::string snippet;

    friend bool operator==(const ParseDiagnostic&, const ParseDiagnostic&) = default;
};

struct ParseOutcome {
    std::vector<ReasoningStep> steps;  // ordinals renumbered 1..N
    std::vector<ParseDiagnostic> diagnostics;
};

/// Grammar-level parse of a single step line. No cross-line validation:
/// the ordinal and conclusion references are returned exactly as printed.
/// Inverse of canonical_serialize for every invariant-satisfying step.
std::optional<ReasoningStep> parse_step_line(std::string_view line);

/// Parses a whole trace. Steps come back in input order with ordinals
/// renumbered 1..N over the accepted lines and conclusion references
/// remapped to match. Each skipped line yields exactly one diagnostic:
///   MalformedLine        line does not fit the grammar
///   EmptyPremises        a conclusion with no premise token
///   BadOrdinal           printed ordinal not strictly increasing
///   ForwardConclusionRef reference to this or a later step
///   UnknownClueRef       reference to a skipped or nonexistent step
/// Throws EmptyTrace when no line parses.
ParseOutcome parse_trace(const RawTrace& raw);

/// Applies the four preprocessing rules, in order:
///   R1  within each step, duplicate premises collapse to the first occurrence
///   R2  consecutive steps concluding from the same single visual clue merge
///       into one step, conclusions joined with "; "
///   R3  unnumbered references expand: T to every textual clue, V to every
///       visual clue, C to every earlier conclusion
///   R4  steps left with no premises are removed
/// then renumbers ordinals densely and remaps conclusion references.
///
/// R2 decides eligibility on what a premise list will look like after R3,
/// so a second application can never find a new merge; this keeps
/// preprocess idempotent.
///
/// Throws RemapError when a removed, unmerged step is still referenced.
std::vector<ReasoningStep> preprocess(std::vector<ReasoningStep> steps,
                                      const InstanceRecord& instance);

}  // namespace rpts
