#include "rpts/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "rpts/errors.hpp"

namespace rpts {

std::string to_string(ScoringMode mode) {
    return mode == ScoringMode::Similarity ? "similarity" : "coherence";
}

ScoringMode classify_mode(const ReasoningStep& step) {
    bool all_visual = !step.premises.empty() &&
                      std::all_of(step.premises.begin(), step.premises.end(),
                                  [](const PremiseRef& ref) {
                                      return ref.kind == RefKind::Visual;
                                  });
    return all_visual ? ScoringMode::Similarity : ScoringMode::Coherence;
}

double score_similarity(const std::string& conclusion,
                        const std::vector<std::string>& ground_truths,
                        const SimilarityFn& similarity) {
    if (ground_truths.empty())
        throw EmptyGroundTruth("similarity scoring needs at least one ground truth");
    double best = 0.0;
    for (const auto& truth : ground_truths)
        best = std::max(best, similarity(conclusion, truth));
    return best;
}

namespace {

const Clue* find_clue(const std::vector<Clue>& clues, int index) {
    for (const auto& clue : clues)
        if (clue.index == index) return &clue;
    return nullptr;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

const ReasoningStep* find_step(const std::vector<ReasoningStep>& steps, int ordinal) {
    for (const auto& step : steps)
        if (step.ordinal == ordinal) return &step;
    return nullptr;
}

}  // namespace

std::string premise_text(const PremiseRef& ref, const InstanceRecord& instance,
                         const std::vector<ReasoningStep>& steps) {
    switch (ref.kind) {
        case RefKind::Visual: {
            if (!ref.index) throw UnknownClueRef("unnumbered V premise reached scoring");
            const Clue* clue = find_clue(instance.visual_clues, *ref.index);
            if (!clue) throw UnknownClueRef("no visual clue " + ref.token());
            return join(clue->ground_truth_conclusions, "; ");
        }
        case RefKind::Textual: {
            if (!ref.index) throw UnknownClueRef("unnumbered T premise reached scoring");
            const Clue* clue = find_clue(instance.textual_clues, *ref.index);
            if (!clue) throw UnknownClueRef("no textual clue " + ref.token());
            return clue->text;
        }
        case RefKind::Context:
            if (instance.context.empty())
                throw UnknownClueRef("CTX referenced but instance has no context");
            return instance.context;
        case RefKind::Conclusion: {
            if (!ref.index) throw UnknownClueRef("unnumbered C premise reached scoring");
            const ReasoningStep* prior = find_step(steps, *ref.index);
            if (!prior) throw UnknownClueRef("no step with ordinal " + ref.token());
            return prior->conclusion_text;
        }
    }
    throw UnknownClueRef("unhandled premise kind");
}

StepScore score_step(const ReasoningStep& step, const std::vector<ReasoningStep>& steps,
                     const InstanceRecord& instance, const Judge& judge,
                     const SimilarityFn& similarity) {
    StepScore result;
    result.ordinal = step.ordinal;
    result.mode = classify_mode(step);

    if (result.mode == ScoringMode::Similarity) {
        // The ground truths already are the maximal context for an
        // image-derived conclusion; no second pass can add information.
        double best = 0.0;
        for (const auto& ref : step.premises) {
            if (!ref.index) throw UnknownClueRef("unnumbered V premise reached scoring");
            const Clue* clue = find_clue(instance.visual_clues, *ref.index);
            if (!clue) throw UnknownClueRef("no visual clue " + ref.token());
            best = std::max(best, score_similarity(step.conclusion_text,
                                                   clue->ground_truth_conclusions,
                                                   similarity));
        }
        result.initial = best;
        result.final_score = best;
        return result;
    }

    JudgeRequest request;
    request.language = instance.language;
    request.conclusion = step.conclusion_text;
    for (const auto& ref : step.premises) {
        request.premises.push_back(premise_text(ref, instance, steps));
        request.premise_ids.push_back(ref.token());
    }
    result.initial = judge.score(request);

    if (result.initial >= 0.5) {
        result.final_score = result.initial;
        return result;
    }

    // Second pass: maybe the step picked poor premises. Re-judge against all
    // textual clues plus everything concluded so far, at a 0.8 discount.
    JudgeRequest retry;
    retry.language = instance.language;
    retry.conclusion = step.conclusion_text;
    for (const auto& clue : instance.textual_clues) {
        retry.premises.push_back(clue.text);
        retry.premise_ids.push_back(clue.id());
    }
    for (const auto& prior : steps) {
        if (prior.ordinal >= step.ordinal) continue;
        retry.premises.push_back(prior.conclusion_text);
        retry.premise_ids.push_back("C" + std::to_string(prior.ordinal));
    }
    result.reevaluated = judge.score(retry);
    result.penalized = true;
    result.final_score = std::max(result.initial, 0.8 * *result.reevaluated);
    return result;
}

std::vector<StepScore> score_trace(const std::vector<ReasoningStep>& steps,
                                   const ReasoningGraph& graph,
                                   const InstanceRecord& instance, const Judge& judge,
                                   const SimilarityFn& similarity, int max_inflight) {
    if (max_inflight < 1) throw DomainError("max_inflight must be >= 1");
    {
        // Cheap consistency check: the graph must describe exactly these steps.
        auto ordinals = graph.step_ordinals();
        if (ordinals.size() != steps.size())
            throw DomainError("graph and step list disagree on step count");
    }
    std::vector<StepScore> results(steps.size());
    if (steps.empty()) return results;

    struct Failure {
        int ordinal;
        std::string message;
    };
    std::vector<std::optional<Failure>> failures(steps.size());

    auto work = [&](std::size_t i) {
        try {
            results[i] = score_step(steps[i], steps, instance, judge, similarity);
        } catch (const Error& e) {
            failures[i] = Failure{steps[i].ordinal, e.what()};
        }
    };

    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(max_inflight),
                                                steps.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < steps.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < steps.size();
                     i = next.fetch_add(1))
                    work(i);
            });
        for (auto& t : pool) t.join();
    }

    // Fail on the lowest ordinal so concurrent schedules raise the same error.
    for (const auto& failure : failures)
        if (failure) throw ScoreError(failure->ordinal, failure->message);
    return results;
}

double scorer_mae(const std::vector<double>& candidate_scores,
                  const std::vector<double>& human_scores) {
    if (candidate_scores.empty() || candidate_scores.size() != human_scores.size())
        throw LengthMismatch("score vectors must have equal non-zero length (" +
                             std::to_string(candidate_scores.size()) + " vs " +
                             std::to_string(human_scores.size()) + ")");
    for (std::size_t i = 0; i < candidate_scores.size(); ++i)
        if (candidate_scores[i] < 0.0 || candidate_scores[i] > 1.0 ||
            human_scores[i] < 0.0 || human_scores[i] > 1.0)
            throw DomainError("scores must lie in [0,1]");
    double total = 0.0;
    for (std::size_t i = 0; i < candidate_scores.size(); ++i)
        total += std::abs(candidate_scores[i] - human_scores[i]);
    return total / static_cast<double>(candidate_scores.size());
}

}  // namespace rpts
