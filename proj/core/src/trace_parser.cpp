#include "rpts/trace_parser.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rpts/errors.hpp"

namespace rpts {

std::string to_string(DiagnosticReason reason) {
    switch (reason) {
        case DiagnosticReason::MalformedLine: return "MalformedLine";
        case DiagnosticReason::BadOrdinal: return "BadOrdinal";
        case DiagnosticReason::ForwardConclusionRef: return "ForwardConclusionRef";
        case DiagnosticReason::UnknownClueRef: return "UnknownClueRef";
        case DiagnosticReason::EmptyPremises: return "EmptyPremises";
    }
    return "?";
}

std::optional<DiagnosticReason> parse_diagnostic_reason(const std::string& name) {
    for (DiagnosticReason r :
         {DiagnosticReason::MalformedLine, DiagnosticReason::BadOrdinal,
          DiagnosticReason::ForwardConclusionRef, DiagnosticReason::UnknownClueRef,
          DiagnosticReason::EmptyPremises})
        if (to_string(r) == name) return r;
    return std::nullopt;
}

namespace {

constexpr std::string_view kArrowAscii = "->";
constexpr std::string_view kArrowGlyph = "\xE2\x86\x92";  // U+2192

struct Cursor {
    std::string_view text;
    size_t pos = 0;

    bool done() const { return pos >= text.size(); }
    void skip_spaces() {
        while (!done() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool consume(std::string_view token) {
        if (text.substr(pos, token.size()) == token) {
            pos += token.size();
            return true;
        }
        return false;
    }
};

std::optional<int> parse_index_digits(Cursor& cur) {
    if (cur.done() || cur.text[cur.pos] < '1' || cur.text[cur.pos] > '9')
        return std::nullopt;
    long value = 0;
    size_t digits = 0;
    while (!cur.done() && cur.text[cur.pos] >= '0' && cur.text[cur.pos] <= '9') {
        value = value * 10 + (cur.text[cur.pos] - '0');
        ++cur.pos;
        if (++digits > 8) return std::nullopt;  // unreasonably large index
    }
    return static_cast<int>(value);
}

std::optional<PremiseRef> parse_ref(Cursor& cur) {
    if (cur.consume("CTX")) return PremiseRef{RefKind::Context, std::nullopt};
    RefKind kind;
    if (cur.consume("V"))
        kind = RefKind::Visual;
    else if (cur.consume("T"))
        kind = RefKind::Textual;
    else if (cur.consume("C"))
        kind = RefKind::Conclusion;
    else
        return std::nullopt;
    if (!cur.done() && cur.text[cur.pos] >= '0' && cur.text[cur.pos] <= '9') {
        auto index = parse_index_digits(cur);
        if (!index) return std::nullopt;  // leading zero or overlong
        return PremiseRef{kind, index};
    }
    return PremiseRef{kind, std::nullopt};
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<ReasoningStep> parse_step_line(std::string_view line) {
    Cursor cur{trim(line)};
    if (cur.done()) return std::nullopt;

    ReasoningStep step;
    // Premise list separated by "+".
    while (true) {
        cur.skip_spaces();
        if (!cur.consume("[PREMISE:")) return std::nullopt;
        cur.skip_spaces();
        auto ref = parse_ref(cur);
        if (!ref) return std::nullopt;
        cur.skip_spaces();
        if (!cur.consume("]")) return std::nullopt;
        step.premises.push_back(*ref);
        cur.skip_spaces();
        if (cur.consume("+")) continue;
        break;
    }
    if (!cur.consume(kArrowAscii) && !cur.consume(kArrowGlyph)) return std::nullopt;
    cur.skip_spaces();
    if (!cur.consume("[CONCLUSION")) return std::nullopt;
    cur.skip_spaces();
    auto ordinal = parse_index_digits(cur);
    if (!ordinal) return std::nullopt;
    if (!cur.consume(":")) return std::nullopt;
    if (!cur.done() && cur.text[cur.pos] == ' ') ++cur.pos;  // canonical single space

    // The conclusion text runs to the final "]" of the line; anything after
    // that bracket was already removed by trim, so it must be line-final.
    size_t close = cur.text.rfind(']');
    if (close == std::string_view::npos || close < cur.pos) return std::nullopt;
    if (close + 1 != cur.text.size()) return std::nullopt;
    std::string_view text = cur.text.substr(cur.pos, close - cur.pos);
    if (text.empty()) return std::nullopt;
    step.conclusion_text = std::string(text);
    step.ordinal = *ordinal;
    return step;
}

namespace {

std::string make_snippet(std::string_view line) {
    std::string snippet(trim(line));
    if (snippet.size() > 120) snippet = snippet.substr(0, 117) + "...";
    return snippet;
}

}  // namespace

ParseOutcome parse_trace(const RawTrace& raw) {
    ParseOutcome out;
    std::map<int, int> printed_to_dense;
    int last_printed = 0;

    int line_number = 0;
    size_t start = 0;
    const std::string& text = raw.text;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        std::string_view line(text.data() + start,
                              (end == std::string::npos ? text.size() : end) - start);
        ++line_number;
        start = (end == std::string::npos) ? text.size() + 1 : end + 1;

        if (trim(line).empty()) continue;

        auto step = parse_step_line(line);
        if (!step) {
            bool has_conclusion = line.find("[CONCLUSION") != std::string_view::npos;
            bool has_premise = line.find("[PREMISE") != std::string_view::npos;
            out.diagnostics.push_back({line_number,
                                       has_conclusion && !has_premise
                                           ? DiagnosticReason::EmptyPremises
                                           : DiagnosticReason::MalformedLine,
                                       make_snippet(line)});
            continue;
        }

        int printed = step->ordinal;
        if (printed <= last_printed) {
            out.diagnostics.push_back(
                {line_number, DiagnosticReason::BadOrdinal, make_snippet(line)});
            continue;
        }

        std::optional<DiagnosticReason> ref_problem;
        for (const PremiseRef& ref : step->premises) {
            if (ref.kind != RefKind::Conclusion || !ref.index) continue;
            if (*ref.index >= printed) {
                ref_problem = DiagnosticReason::ForwardConclusionRef;
                break;
            }
            if (!printed_to_dense.count(*ref.index)) {
                ref_problem = DiagnosticReason::UnknownClueRef;
                break;
            }
        }
        if (ref_problem) {
            out.diagnostics.push_back({line_number, *ref_problem, make_snippet(line)});
            continue;
        }

        for (PremiseRef& ref : step->premises)
            if (ref.kind == RefKind::Conclusion && ref.index)
                ref.index = printed_to_dense.at(*ref.index);
        int dense = static_cast<int>(out.steps.size()) + 1;
        printed_to_dense[printed] = dense;
        last_printed = printed;
        step->ordinal = dense;
        out.steps.push_back(std::move(*step));
    }

    if (out.steps.empty())
        throw EmptyTrace("no line of the trace parsed (" +
                         std::to_string(out.diagnostics.size()) + " diagnostics)");
    return out;
}

namespace {

void dedupe_premises(std::vector<PremiseRef>& premises) {
    std::vector<PremiseRef> kept;
    for (const PremiseRef& ref : premises)
        if (std::find(kept.begin(), kept.end(), ref) == kept.end())
            kept.push_back(ref);
    premises = std::move(kept);
}

std::vector<int> sorted_indices(const std::vector<Clue>& clues) {
    std::vector<int> indices;
    indices.reserve(clues.size());
    for (const Clue& c : clues) indices.push_back(c.index);
    std::sort(indices.begin(), indices.end());
    return indices;
}

// What a premise denotes once unnumbered references are expanded, reduced to
// the facts R2 needs: the visual clues it covers, whether it covers anything
// non-visual, and whether it expands to nothing at all.
struct VisualProfile {
    std::set<int> visual;
    bool non_visual = false;
    bool vanishes = false;
};

VisualProfile resolve_profile(const PremiseRef& ref, size_t list_pos,
                              const std::vector<int>& visual_indices,
                              const std::vector<int>& textual_indices) {
    VisualProfile p;
    switch (ref.kind) {
        case RefKind::Visual:
            if (ref.index)
                p.visual.insert(*ref.index);
            else if (visual_indices.empty())
                p.vanishes = true;
            else
                p.visual.insert(visual_indices.begin(), visual_indices.end());
            break;
        case RefKind::Textual:
            if (!ref.index && textual_indices.empty())
                p.vanishes = true;
            else
                p.non_visual = true;
            break;
        case RefKind::Context:
            p.non_visual = true;
            break;
        case RefKind::Conclusion:
            if (!ref.index && list_pos == 0)
                p.vanishes = true;  // no earlier conclusions to expand to
            else
                p.non_visual = true;
            break;
    }
    return p;
}

// R2 eligibility: the step's expanded premises name exactly one visual clue
// and nothing else. Returns that clue's index.
std::optional<int> single_visual_clue(const ReasoningStep& step, size_t list_pos,
                                      const std::vector<int>& visual_indices,
                                      const std::vector<int>& textual_indices) {
    std::set<int> visual;
    for (const PremiseRef& ref : step.premises) {
        VisualProfile p = resolve_profile(ref, list_pos, visual_indices, textual_indices);
        if (p.non_visual) return std::nullopt;
        visual.insert(p.visual.begin(), p.visual.end());
    }
    if (visual.size() != 1) return std::nullopt;
    return *visual.begin();
}

}  // namespace

std::vector<ReasoningStep> preprocess(std::vector<ReasoningStep> steps,
                                      const InstanceRecord& instance) {
    const std::vector<int> visual_indices = sorted_indices(instance.visual_clues);
    const std::vector<int> textual_indices = sorted_indices(instance.textual_clues);

    // R1: within-step dedupe, first occurrence wins.
    for (ReasoningStep& step : steps) dedupe_premises(step.premises);

    // R2: merge consecutive runs over one visual clue. remap records, for
    // every incoming ordinal, the ordinal that now carries its conclusion.
    std::map<int, int> remap;
    std::vector<ReasoningStep> merged;
    for (size_t i = 0; i < steps.size();) {
        auto clue = single_visual_clue(steps[i], merged.size(), visual_indices,
                                       textual_indices);
        size_t run_end = i + 1;
        if (clue) {
            while (run_end < steps.size() &&
                   single_visual_clue(steps[run_end], merged.size(), visual_indices,
                                      textual_indices) == clue)
                ++run_end;
        }
        ReasoningStep combined = steps[i];
        remap[steps[i].ordinal] = combined.ordinal;
        for (size_t j = i + 1; j < run_end; ++j) {
            combined.conclusion_text += "; " + steps[j].conclusion_text;
            remap[steps[j].ordinal] = combined.ordinal;
        }
        merged.push_back(std::move(combined));
        i = run_end;
    }

    // R3: expand unnumbered references.
    for (size_t pos = 0; pos < merged.size(); ++pos) {
        std::vector<PremiseRef> expanded;
        for (const PremiseRef& ref : merged[pos].premises) {
            if (ref.index || ref.kind == RefKind::Context) {
                expanded.push_back(ref);
                continue;
            }
            switch (ref.kind) {
                case RefKind::Visual:
                    for (int idx : visual_indices)
                        expanded.push_back({RefKind::Visual, idx});
                    break;
                case RefKind::Textual:
                    for (int idx : textual_indices)
                        expanded.push_back({RefKind::Textual, idx});
                    break;
                case RefKind::Conclusion:
                    for (size_t earlier = 0; earlier < pos; ++earlier)
                        expanded.push_back(
                            {RefKind::Conclusion, merged[earlier].ordinal});
                    break;
                default:
                    expanded.push_back(ref);
                    break;
            }
        }
        merged[pos].premises = std::move(expanded);
    }

    // R4: drop steps whose premises expanded away entirely.
    std::set<int> removed;
    std::vector<ReasoningStep> kept;
    for (ReasoningStep& step : merged) {
        if (step.premises.empty())
            removed.insert(step.ordinal);
        else
            kept.push_back(std::move(step));
    }

    // Renumber densely and remap conclusion references.
    std::map<int, int> dense;
    for (size_t pos = 0; pos < kept.size(); ++pos)
        dense[kept[pos].ordinal] = static_cast<int>(pos) + 1;
    for (ReasoningStep& step : kept) {
        for (PremiseRef& ref : step.premises) {
            if (ref.kind != RefKind::Conclusion || !ref.index) continue;
            int target = *ref.index;
            if (auto it = remap.find(target); it != remap.end()) target = it->second;
            if (removed.count(target))
                throw RemapError("step " + std::to_string(step.ordinal) +
                                 " references conclusion " + std::to_string(*ref.index) +
                                 " of a step removed during preprocessing");
            auto it = dense.find(target);
            if (it == dense.end())
                throw RemapError("step " + std::to_string(step.ordinal) +
                                 " references unknown conclusion " +
                                 std::to_string(*ref.index));
            ref.index = it->second;
        }
        step.ordinal = dense.at(step.ordinal);
        dedupe_premises(step.premises);  // merging can fold references together
    }
    return kept;
}

}  // namespace rpts
