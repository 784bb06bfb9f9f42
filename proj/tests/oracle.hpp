#pragma once

// Independent oracles for property tests. Deliberately naive: recursive
// longest-path enumeration and term-by-term weight sums that share no code
// with the library, so agreement is evidence rather than tautology.

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rpts/model.hpp"

namespace oracle {

// Longest path from a step down to any leaf, by plain recursion over the
// premise lists (leaves contribute 0). Exponential, fine for small traces.
inline int step_height(const std::vector<rpts::ReasoningStep>& steps, int ordinal) {
    const rpts::ReasoningStep* step = nullptr;
    for (const auto& s : steps)
        if (s.ordinal == ordinal) step = &s;
    if (!step) return 0;
    int deepest_child = 0;
    for (const auto& ref : step->premises)
        if (ref.kind == rpts::RefKind::Conclusion && ref.index)
            deepest_child = std::max(deepest_child, step_height(steps, *ref.index));
    return 1 + deepest_child;
}

// Eq. 1 by repeated multiplication (no std::pow).
inline double eq1_weight(double lambda, int h_f, int h) {
    int exponent = h_f > h ? h_f - h : h - h_f;
    double w = 1.0;
    for (int i = 0; i < exponent; ++i) w *= lambda;
    return w;
}

// Eq. 2 term by term. Returns nullopt when the weight mass vanishes.
inline std::optional<double> eq2_rpts(
    const std::vector<std::pair<int, double>>& height_scores, double lambda, int h_f) {
    double numerator = 0.0;
    double denominator = 0.0;
    for (const auto& [h, s] : height_scores) {
        double w = eq1_weight(lambda, h_f, h);
        numerator += w * s;
        denominator += w;
    }
    if (denominator == 0.0) return std::nullopt;
    return numerator / denominator;
}

// --- random inputs ---------------------------------------------------------

inline rpts::InstanceRecord random_instance(std::mt19937& rng, int visual_count,
                                            int textual_count, bool with_context) {
    rpts::InstanceRecord instance;
    instance.id = "gen";
    instance.statement = "generated statement";
    if (with_context) instance.context = "generated context";
    instance.answer = rpts::Verdict::Agree;
    instance.capabilities = {rpts::Capability::Rec};
    instance.relationship = rpts::Relationship::Independent;
    for (int i = 1; i <= visual_count; ++i)
        instance.visual_clues.push_back({rpts::ClueKind::Visual, i,
                                         "",
                                         {"visual fact " + std::to_string(i)}});
    for (int i = 1; i <= textual_count; ++i)
        instance.textual_clues.push_back(
            {rpts::ClueKind::Textual, i, "textual fact " + std::to_string(i), {}});
    (void)rng;
    return instance;
}

// Steps with numbered, duplicate-free premises that preprocessing leaves
// untouched: no bare references, no empty premise lists, and no two
// consecutive steps concluding from the same single visual clue.
inline std::vector<rpts::ReasoningStep> random_clean_steps(
    std::mt19937& rng, const rpts::InstanceRecord& instance, int step_count) {
    std::uniform_int_distribution<int> premise_count(1, 3);
    std::vector<rpts::ReasoningStep> steps;
    for (int ordinal = 1; ordinal <= step_count; ++ordinal) {
        // Candidate pool: every clue, context when present, every prior step.
        std::vector<rpts::PremiseRef> pool;
        for (const auto& clue : instance.visual_clues)
            pool.push_back({rpts::RefKind::Visual, clue.index});
        for (const auto& clue : instance.textual_clues)
            pool.push_back({rpts::RefKind::Textual, clue.index});
        if (!instance.context.empty())
            pool.push_back({rpts::RefKind::Context, std::nullopt});
        for (int prior = 1; prior < ordinal; ++prior)
            pool.push_back({rpts::RefKind::Conclusion, prior});

        std::shuffle(pool.begin(), pool.end(), rng);
        int want = std::min<int>(premise_count(rng), static_cast<int>(pool.size()));
        rpts::ReasoningStep step;
        step.ordinal = ordinal;
        step.premises.assign(pool.begin(), pool.begin() + want);

        // Avoid an R2 merge: if this and the previous step both reduce to the
        // same single visual clue, widen this one.
        if (!steps.empty() && step.premises.size() == 1 &&
            steps.back().premises.size() == 1) {
            const auto& a = steps.back().premises[0];
            const auto& b = step.premises[0];
            if (a.kind == rpts::RefKind::Visual && a == b)
                step.premises.push_back(
                    {rpts::RefKind::Textual, instance.textual_clues[0].index});
        }
        step.conclusion_text = "finding " + std::to_string(ordinal);
        steps.push_back(std::move(step));
    }
    return steps;
}

inline std::vector<std::pair<int, double>> random_height_scores(std::mt19937& rng,
                                                                int count,
                                                                int max_height) {
    std::uniform_int_distribution<int> height(1, max_height);
    std::uniform_real_distribution<double> score(0.0, 1.0);
    std::vector<std::pair<int, double>> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.emplace_back(height(rng), score(rng));
    return out;
}

}  // namespace oracle
