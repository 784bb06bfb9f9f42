#include "rpts/model.hpp"

#include <algorithm>
#include <map>

#include "rpts/errors.hpp"

namespace rpts {

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(violations.empty() ? std::string("validation failed")
                               : "validation failed:\n  " + [&] {
                                     std::string joined = violations.front();
                                     for (size_t i = 1; i < violations.size(); ++i)
                                         joined += "\n  " + violations[i];
                                     return joined;
                                 }()),
      violations_(std::move(violations)) {}

ScoreError::ScoreError(int ordinal, const std::string& message)
    : Error("step " + std::to_string(ordinal) + ": " + message), ordinal_(ordinal) {}

EvalError::EvalError(std::string instance_id, const std::string& message)
    : Error("instance " + instance_id + ": " + message), instance_id_(std::move(instance_id)) {}

std::string to_string(ClueKind kind) {
    switch (kind) {
        case ClueKind::Visual: return "visual";
        case ClueKind::Textual: return "textual";
        case ClueKind::Context: return "context";
    }
    return "?";
}

std::string to_string(RefKind kind) {
    switch (kind) {
        case RefKind::Visual: return "visual";
        case RefKind::Textual: return "textual";
        case RefKind::Context: return "context";
        case RefKind::Conclusion: return "conclusion";
    }
    return "?";
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Agree: return "agree";
        case Verdict::Disagree: return "disagree";
        case Verdict::Unknown: return "unknown";
    }
    return "?";
}

std::string to_string(Language language) {
    return language == Language::En ? "en" : "zh";
}

std::string to_string(Capability capability) {
    switch (capability) {
        case Capability::Rec: return "Rec";
        case Capability::OCR: return "OCR";
        case Capability::Com: return "Com";
        case Capability::Math: return "Math";
        case Capability::IC: return "IC";
        case Capability::SA: return "SA";
    }
    return "?";
}

std::string to_string(Relationship relationship) {
    switch (relationship) {
        case Relationship::Guided: return "guided";
        case Relationship::Adversarial: return "adversarial";
        case Relationship::Independent: return "independent";
    }
    return "?";
}

std::string to_string(GuidedSubtype subtype) {
    return subtype == GuidedSubtype::Explicit ? "explicit" : "implicit";
}

std::optional<Verdict> parse_verdict_name(const std::string& name) {
    if (name == "agree") return Verdict::Agree;
    if (name == "disagree") return Verdict::Disagree;
    if (name == "unknown") return Verdict::Unknown;
    return std::nullopt;
}

std::optional<Language> parse_language_name(const std::string& name) {
    if (name == "en") return Language::En;
    if (name == "zh") return Language::Zh;
    return std::nullopt;
}

std::optional<Capability> parse_capability_name(const std::string& name) {
    for (Capability c : all_capabilities())
        if (to_string(c) == name) return c;
    return std::nullopt;
}

std::optional<Relationship> parse_relationship_name(const std::string& name) {
    if (name == "guided") return Relationship::Guided;
    if (name == "adversarial") return Relationship::Adversarial;
    if (name == "independent") return Relationship::Independent;
    return std::nullopt;
}

std::optional<GuidedSubtype> parse_guided_subtype_name(const std::string& name) {
    if (name == "explicit") return GuidedSubtype::Explicit;
    if (name == "implicit") return GuidedSubtype::Implicit;
    return std::nullopt;
}

const std::vector<Capability>& all_capabilities() {
    static const std::vector<Capability> caps = {Capability::Rec, Capability::OCR,
                                                 Capability::Com, Capability::Math,
                                                 Capability::IC,  Capability::SA};
    return caps;
}

std::string Clue::id() const {
    switch (kind) {
        case ClueKind::Visual: return "V" + std::to_string(index);
        case ClueKind::Textual: return "T" + std::to_string(index);
        case ClueKind::Context: return "CTX";
    }
    return "?";
}

std::string PremiseRef::token() const {
    std::string base;
    switch (kind) {
        case RefKind::Visual: base = "V"; break;
        case RefKind::Textual: base = "T"; break;
        case RefKind::Conclusion: base = "C"; break;
        case RefKind::Context: return "CTX";
    }
    if (index) base += std::to_string(*index);
    return base;
}

std::string canonical_serialize(const ReasoningStep& step) {
    std::string line;
    for (size_t i = 0; i < step.premises.size(); ++i) {
        if (i > 0) line += " + ";
        line += "[PREMISE: " + step.premises[i].token() + "]";
    }
    line += " -> [CONCLUSION " + std::to_string(step.ordinal) + ": " +
            step.conclusion_text + "]";
    return line;
}

namespace {

void validate_clue_list(const std::vector<Clue>& clues, ClueKind expected_kind,
                        const std::string& field, std::vector<Violation>& out) {
    // Iterate in index order so the result does not depend on input ordering.
    std::vector<const Clue*> sorted;
    sorted.reserve(clues.size());
    for (const Clue& c : clues) sorted.push_back(&c);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Clue* a, const Clue* b) { return a->index < b->index; });

    std::map<int, int> index_count;
    for (const Clue* c : sorted) {
        if (c->kind != expected_kind)
            out.push_back({field + "[" + c->id() + "]",
                           "clue kind does not match the list it appears in"});
        if (c->index < 1)
            out.push_back({field + "[" + c->id() + "]", "clue index must be >= 1"});
        ++index_count[c->index];
        if (expected_kind == ClueKind::Visual && c->ground_truth_conclusions.empty())
            out.push_back({field + "[" + c->id() + "]",
                           "visual clue must carry at least one ground-truth conclusion"});
        if (expected_kind != ClueKind::Visual && !c->ground_truth_conclusions.empty())
            out.push_back({field + "[" + c->id() + "]",
                           "only visual clues carry ground-truth conclusions"});
    }
    for (const auto& [index, count] : index_count)
        if (count > 1)
            out.push_back({field, "duplicate clue index " + std::to_string(index)});
}

void validate_reference_steps(const InstanceRecord& record,
                              std::vector<Violation>& out) {
    const auto& steps = *record.reference_steps;
    if (steps.empty()) {
        out.push_back({"reference_steps", "present but empty"});
        return;
    }
    std::set<int> visual_indices, textual_indices;
    for (const Clue& c : record.visual_clues) visual_indices.insert(c.index);
    for (const Clue& c : record.textual_clues) textual_indices.insert(c.index);

    for (size_t i = 0; i < steps.size(); ++i) {
        const ReasoningStep& step = steps[i];
        const std::string field = "reference_steps[" + std::to_string(i + 1) + "]";
        if (step.ordinal != static_cast<int>(i + 1))
            out.push_back({field, "ordinal must equal position in the list"});
        if (step.premises.empty())
            out.push_back({field, "premises must not be empty"});
        if (step.conclusion_text.empty())
            out.push_back({field, "conclusion text must not be empty"});
        for (const PremiseRef& ref : step.premises) {
            switch (ref.kind) {
                case RefKind::Visual:
                    if (ref.index && !visual_indices.count(*ref.index))
                        out.push_back({field, "unknown visual clue " + ref.token()});
                    break;
                case RefKind::Textual:
                    if (ref.index && !textual_indices.count(*ref.index))
                        out.push_back({field, "unknown textual clue " + ref.token()});
                    break;
                case RefKind::Context:
                    if (ref.index)
                        out.push_back({field, "context references never carry an index"});
                    if (record.context.empty())
                        out.push_back({field, "CTX referenced but instance has no context"});
                    break;
                case RefKind::Conclusion:
                    if (ref.index && *ref.index >= step.ordinal)
                        out.push_back({field, "conclusion reference " + ref.token() +
                                                  " is not strictly earlier"});
                    break;
            }
        }
    }
}

}  // namespace

std::vector<Violation> validate_instance(const InstanceRecord& record) {
    std::vector<Violation> out;

    if (record.capabilities.empty())
        out.push_back({"capabilities", "must name at least one capability"});
    if (record.answer == Verdict::Unknown)
        out.push_back({"answer", "must be agree or disagree"});
    if (record.relationship == Relationship::Guided && !record.guided_subtype)
        out.push_back({"guided_subtype", "required when relationship is guided"});
    if (record.relationship != Relationship::Guided && record.guided_subtype)
        out.push_back({"guided_subtype", "present without relationship=guided"});

    // Multimodality: solving must need both modalities, so both must exist.
    if (record.visual_clues.empty())
        out.push_back({"visual_clues", "multimodality requires at least one visual clue"});
    if (record.textual_clues.empty())
        out.push_back({"textual_clues", "multimodality requires at least one textual clue"});

    validate_clue_list(record.visual_clues, ClueKind::Visual, "visual_clues", out);
    validate_clue_list(record.textual_clues, ClueKind::Textual, "textual_clues", out);

    if (record.reference_steps) validate_reference_steps(record, out);

    return out;
}

}  // namespace rpts
