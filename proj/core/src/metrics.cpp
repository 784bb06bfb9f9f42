#include "rpts/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "rpts/errors.hpp"
#include "rpts/graph.hpp"
#include "rpts/trace_parser.hpp"

namespace rpts {

double step_weight(double lambda, int h_f, int h) {
    if (lambda < 0.0 || lambda > 1.0)
        throw DomainError("lambda must lie in [0,1], got " + std::to_string(lambda));
    if (h < 1 || h_f < 1) throw DomainError("step heights are positive integers");
    int exponent = std::abs(h_f - h);
    if (exponent == 0) return 1.0;  // 0^0 = 1 convention folded in
    return std::pow(lambda, exponent);
}

double compute_rpts(const std::vector<HeightScore>& scores, const EvalConfig& config) {
    if (scores.empty()) throw DomainError("compute_rpts needs at least one step");
    double weight_mass = 0.0;
    double weighted_sum = 0.0;
    for (const auto& entry : scores) {
        if (entry.score < 0.0 || entry.score > 1.0)
            throw DomainError("step score " + std::to_string(entry.score) +
                              " outside [0,1]");
        double w = step_weight(config.lambda, config.h_f, entry.height);
        weight_mass += w;
        weighted_sum += w * entry.score;
    }
    if (weight_mass == 0.0)
        throw ZeroWeightMass("no step at focus height " + std::to_string(config.h_f) +
                             " with lambda = 0");
    return weighted_sum / weight_mass;
}

double min_lambda(int h_max, int h_f, double w_min) {
    if (h_f < 1) throw DomainError("h_f must be >= 1");
    if (h_max <= h_f) throw DomainError("h_max must exceed h_f");
    if (w_min <= 0.0 || w_min > 1.0) throw DomainError("w_min must lie in (0,1]");
    return std::pow(w_min, 1.0 / static_cast<double>(h_max - h_f));
}

// ---------------------------------------------------------------------------
// Verdict extraction

namespace {

struct Lexicon {
    // Negative patterns first: they consume their span so "disagree" never
    // also counts its embedded "agree".
    std::vector<std::string> negative;
    std::vector<std::string> positive;
    bool word_boundaries;  // require a non-letter on the left (en only)
};

const Lexicon& lexicon_for(Language language) {
    static const Lexicon en{
        {"disagree", "incorrect", "untrue", "false", "not agree", "not true",
         "not correct", "n't agree", "n't true", "n't correct"},
        {"agree", "true", "correct"},
        true,
    };
    static const Lexicon zh{
        {"不同意", "不正确", "不属实",
         "不成立", "错误"},  // 不同意 不正确 不属实 不成立 错误
        {"同意", "正确", "属实", "成立"},  // 同意 正确 属实 成立
        false,
    };
    return language == Language::En ? en : zh;
}

bool is_letter(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Contraction patterns ("n't agree") anchor inside the preceding verb, so the
// left word-boundary test must not apply to them.
bool starts_mid_word(const std::string& pattern) {
    return pattern.rfind("n't", 0) == 0;
}

// Counts pattern hits over yet-unconsumed text, consuming each hit's span.
int count_and_consume(const std::string& text, const std::string& pattern,
                      std::vector<char>& consumed, bool word_boundaries) {
    int hits = 0;
    std::size_t pos = 0;
    while ((pos = text.find(pattern, pos)) != std::string::npos) {
        bool free = true;
        for (std::size_t k = pos; k < pos + pattern.size(); ++k)
            if (consumed[k]) free = false;
        bool boundary_ok =
            !word_boundaries || pos == 0 || !is_letter(text[pos - 1]);
        if (free && boundary_ok) {
            ++hits;
            for (std::size_t k = pos; k < pos + pattern.size(); ++k) consumed[k] = 1;
        }
        pos += 1;
    }
    return hits;
}

}  // namespace

Verdict extract_verdict(const std::string& final_conclusion, Language language) {
    std::string text = final_conclusion;
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    const Lexicon& lex = lexicon_for(language);
    std::vector<char> consumed(text.size(), 0);
    int negatives = 0;
    for (const auto& pattern : lex.negative)
        negatives += count_and_consume(text, pattern, consumed,
                                       lex.word_boundaries && !starts_mid_word(pattern));
    int positives = 0;
    for (const auto& pattern : lex.positive)
        positives += count_and_consume(text, pattern, consumed,
                                       lex.word_boundaries && !starts_mid_word(pattern));
    if (positives > 0 && negatives > 0) return Verdict::Unknown;  // conflicting rules
    if (positives > 0) return Verdict::Agree;
    if (negatives > 0) return Verdict::Disagree;
    return Verdict::Unknown;
}

// ---------------------------------------------------------------------------
// Instance pipeline

InstanceResult evaluate_instance(const std::string& trace_text,
                                 const InstanceRecord& instance, const Judge& judge,
                                 const EvalConfig& config,
                                 const SimilarityFn& similarity, int max_inflight) {
    try {
        ParseOutcome outcome = parse_trace(RawTrace{trace_text, instance.language});
        std::vector<ReasoningStep> steps = preprocess(outcome.steps, instance);
        ReasoningGraph graph = build_graph(steps, instance);
        std::vector<StepScore> scores =
            score_trace(steps, graph, instance, judge, similarity, max_inflight);

        InstanceResult result;
        result.id = instance.id;
        std::vector<HeightScore> height_scores;
        height_scores.reserve(scores.size());
        for (std::size_t i = 0; i < steps.size(); ++i) {
            StepDetail detail;
            detail.ordinal = steps[i].ordinal;
            detail.height = graph.step_height(steps[i].ordinal);
            detail.weight = step_weight(config.lambda, config.h_f, detail.height);
            detail.score = scores[i].final_score;
            result.per_step.push_back(detail);
            height_scores.push_back({detail.height, detail.score});
        }
        result.rpts = compute_rpts(height_scores, config);
        result.verdict =
            extract_verdict(steps.back().conclusion_text, instance.language);
        result.correct = result.verdict == instance.answer;
        result.filtered_correct =
            result.correct && result.rpts >= config.filter_threshold;
        return result;
    } catch (const EvalError&) {
        throw;
    } catch (const Error& e) {
        throw EvalError(instance.id, e.what());
    }
}

InstanceResult evaluate_instance(const std::string& trace_text,
                                 const InstanceRecord& instance, const Judge& judge,
                                 const EvalConfig& config, int max_inflight) {
    return evaluate_instance(trace_text, instance, judge, config,
                             default_similarity(instance.language), max_inflight);
}

// ---------------------------------------------------------------------------
// Corpus aggregation

CorpusSummary corpus_metrics(const std::vector<InstanceResult>& results) {
    if (results.empty()) throw EmptyCorpus("no instance results to aggregate");
    CorpusSummary summary;
    double rpts_sum = 0.0;
    int correct = 0;
    int filtered = 0;
    for (const auto& r : results) {
        rpts_sum += r.rpts;
        correct += r.correct ? 1 : 0;
        filtered += r.filtered_correct ? 1 : 0;
    }
    double n = static_cast<double>(results.size());
    summary.acc = correct / n;
    summary.mean_rpts = rpts_sum / n;
    summary.acc_filtered = filtered / n;
    summary.delta = summary.acc_filtered - summary.acc;
    return summary;
}

namespace {

std::vector<HeightScore> height_scores_of(const InstanceResult& result) {
    std::vector<HeightScore> scores;
    scores.reserve(result.per_step.size());
    for (const auto& detail : result.per_step)
        scores.push_back({detail.height, detail.score});
    return scores;
}

}  // namespace

std::vector<StepAnalysisCell> step_analysis(const std::vector<InstanceResult>& results,
                                            const std::vector<int>& h_f_values) {
    std::vector<StepAnalysisCell> cells;
    cells.reserve(h_f_values.size());
    for (int h_f : h_f_values) {
        StepAnalysisCell cell;
        cell.h_f = h_f;
        double sum = 0.0;
        for (const auto& result : results) {
            bool has_height = std::any_of(
                result.per_step.begin(), result.per_step.end(),
                [h_f](const StepDetail& d) { return d.height == h_f; });
            if (!has_height) {
                ++cell.instances_excluded;
                continue;
            }
            sum += compute_rpts(height_scores_of(result), {0.0, h_f, 0.5});
            ++cell.instances_used;
        }
        if (cell.instances_used > 0) cell.mean_rpts = sum / cell.instances_used;
        cells.push_back(cell);
    }
    return cells;
}

std::vector<SweepCell> sensitivity_sweep(const std::vector<InstanceResult>& results,
                                         const std::vector<double>& lambdas,
                                         const std::vector<int>& h_fs,
                                         double threshold) {
    if (lambdas.empty() || h_fs.empty())
        throw DomainError("sweep needs non-empty lambda and h_f axes");
    std::vector<SweepCell> grid;
    grid.reserve(lambdas.size() * h_fs.size());
    for (int h_f : h_fs) {
        for (double lambda : lambdas) {
            SweepCell cell;
            cell.lambda = lambda;
            cell.h_f = h_f;
            double sum = 0.0;
            int defined = 0;
            int below = 0;
            for (const auto& result : results) {
                double rpts;
                try {
                    rpts = compute_rpts(height_scores_of(result),
                                        {lambda, h_f, threshold});
                } catch (const ZeroWeightMass&) {
                    continue;  // lambda=0 and no step at h_f: no defined value
                }
                sum += rpts;
                ++defined;
                if (result.correct && rpts < threshold) ++below;
            }
            cell.mean_rpts = defined > 0 ? sum / defined : 0.0;
            cell.pct_correct_below =
                results.empty() ? 0.0
                                : 100.0 * below / static_cast<double>(results.size());
            grid.push_back(cell);
        }
    }
    return grid;
}

}  // namespace rpts
