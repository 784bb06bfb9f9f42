#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rpts/graph.hpp"
#include "rpts/judge.hpp"
#include "rpts/model.hpp"
#include "rpts/similarity.hpp"

namespace rpts {

/// Similarity scores conclusions derived purely from images against their
/// annotated ground truths; every other step goes to the coherence judge.
enum class ScoringMode { Similarity, Coherence };

std::string to_string(ScoringMode mode);

/// Faithfulness score of one step.
struct StepScore {
    int ordinal = 0;
    ScoringMode mode = ScoringMode::Coherence;
    double initial = 0.0;
    std::optional<double> reevaluated;  // pre-penalty; present iff initial < 0.5
    double final_score = 0.0;           // max(initial, 0.8 * reevaluated) when present
    bool penalized = false;             // true iff a re-evaluation ran

    friend bool operator==(const StepScore&, const StepScore&) = default;
};

/// Similarity iff every premise references a Visual clue.
ScoringMode classify_mode(const ReasoningStep& step);

/// Max over ground truths of the backend's similarity to the conclusion.
/// Throws EmptyGroundTruth.
double score_similarity(const std::string& conclusion,
                        const std::vector<std::string>& ground_truths,
                        const SimilarityFn& similarity);

/// Scores one step. `steps` supplies the conclusions of earlier ordinals for
/// the re-evaluation context (all textual clues + all prior conclusions).
/// Coherence steps with initial < 0.5 are re-judged against that context and
/// take max(initial, 0.8 * reevaluated).
StepScore score_step(const ReasoningStep& step, const std::vector<ReasoningStep>& steps,
                     const InstanceRecord& instance, const Judge& judge,
                     const SimilarityFn& similarity);

/// Scores every step, optionally fanning out to `max_inflight` concurrent
/// judge calls. Results come back in ordinal order regardless of scheduling;
/// on failure the error of the lowest-ordinal failing step is rethrown as a
/// ScoreError so concurrent runs fail deterministically.
std::vector<StepScore> score_trace(const std::vector<ReasoningStep>& steps,
                                   const ReasoningGraph& graph,
                                   const InstanceRecord& instance, const Judge& judge,
                                   const SimilarityFn& similarity,
                                   int max_inflight = 1);

/// Mean absolute error between two score vectors; the selection statistic
/// for judge backends. Throws LengthMismatch on unequal or zero lengths.
double scorer_mae(const std::vector<double>& candidate_scores,
                  const std::vector<double>& human_scores);

/// Resolves a numbered premise to the text the judge sees: the clue content
/// for T<i>/CTX, the joined ground truths for V<i> (images are represented by
/// their annotated conclusions), the referenced conclusion for C<k>.
std::string premise_text(const PremiseRef& ref, const InstanceRecord& instance,
                         const std::vector<ReasoningStep>& steps);

}  // namespace rpts
