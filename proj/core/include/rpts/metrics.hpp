#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rpts/judge.hpp"
#include "rpts/model.hpp"
#include "rpts/scoring.hpp"
#include "rpts/similarity.hpp"

namespace rpts {

/// Weighting/filtering knobs. Defaults mirror the reference setup:
/// lambda 0.9, focus height 1, filter threshold 0.5.
struct EvalConfig {
    double lambda = 0.9;
    int h_f = 1;
    double filter_threshold = 0.5;
};

/// A scored step reduced to what aggregation needs.
struct HeightScore {
    int height = 1;
    double score = 0.0;
};

/// w = lambda^|h_f - h|, with 0^0 = 1 so lambda=0 keeps exactly the steps at
/// the focus height. Throws DomainError for lambda outside [0,1] or heights < 1.
double step_weight(double lambda, int h_f, int h);

/// Weighted mean sum(w_i * s_i) / sum(w_i). Throws ZeroWeightMass when every
/// weight is zero (lambda=0 and no step at the focus height) instead of
/// reporting a misleading 0.
double compute_rpts(const std::vector<HeightScore>& scores, const EvalConfig& config);

/// Smallest lambda keeping step_weight >= w_min everywhere in [h_f, h_max]:
/// w_min^(1 / (h_max - h_f)). Throws DomainError unless h_max > h_f >= 1 and
/// 0 < w_min <= 1.
double min_lambda(int h_max, int h_f, double w_min);

/// Keyword-rule verdict extraction from a final conclusion, with negation
/// handling ("do not agree" counts as disagreement). Unknown when nothing
/// fires or both sides fire.
Verdict extract_verdict(const std::string& final_conclusion, Language language);

/// Per-step record in an instance result.
struct StepDetail {
    int ordinal = 0;
    int height = 1;
    double weight = 0.0;
    double score = 0.0;

    friend bool operator==(const StepDetail&, const StepDetail&) = default;
};

struct InstanceResult {
    std::string id;
    double rpts = 0.0;
    Verdict verdict = Verdict::Unknown;
    bool correct = false;
    bool filtered_correct = false;  // correct AND rpts >= filter_threshold
    std::vector<StepDetail> per_step;

    friend bool operator==(const InstanceResult&, const InstanceResult&) = default;
};

/// Full single-instance pipeline: parse, preprocess, graph, score, aggregate,
/// extract verdict. Any failure is rethrown as EvalError tagged with the
/// instance id.
InstanceResult evaluate_instance(const std::string& trace_text,
                                 const InstanceRecord& instance, const Judge& judge,
                                 const EvalConfig& config,
                                 const SimilarityFn& similarity, int max_inflight = 1);

/// Same, with the default token-F1 backend for the instance's language.
InstanceResult evaluate_instance(const std::string& trace_text,
                                 const InstanceRecord& instance, const Judge& judge,
                                 const EvalConfig& config, int max_inflight = 1);

/// Corpus aggregate: accuracy, mean RPTS, filtered accuracy, and the drop.
struct CorpusSummary {
    double acc = 0.0;
    double mean_rpts = 0.0;
    double acc_filtered = 0.0;
    double delta = 0.0;  // acc_filtered - acc, <= 0 by construction
};

/// Throws EmptyCorpus on an empty result list.
CorpusSummary corpus_metrics(const std::vector<InstanceResult>& results);

/// One cell of the lambda=0 step analysis: mean RPTS over the instances that
/// have at least one step at the focus height; the rest are excluded, not
/// zero-filled, and counted.
struct StepAnalysisCell {
    int h_f = 1;
    std::optional<double> mean_rpts;  // absent when no instance qualifies
    int instances_used = 0;
    int instances_excluded = 0;
};

std::vector<StepAnalysisCell> step_analysis(const std::vector<InstanceResult>& results,
                                            const std::vector<int>& h_f_values);

/// One cell of the sensitivity grid.
struct SweepCell {
    double lambda = 0.0;
    int h_f = 1;
    double mean_rpts = 0.0;
    /// Percentage (0-100) of all instances whose verdict is correct but whose
    /// RPTS lands below the threshold.
    double pct_correct_below = 0.0;
};

/// Grid emitted row-major by h_f (all lambdas for h_f[0], then h_f[1], ...).
/// Instances with no defined RPTS at a lambda=0 cell are excluded from that
/// cell's mean and cannot count as below-threshold.
std::vector<SweepCell> sensitivity_sweep(const std::vector<InstanceResult>& results,
                                         const std::vector<double>& lambdas,
                                         const std::vector<int>& h_fs,
                                         double threshold);

}  // namespace rpts
