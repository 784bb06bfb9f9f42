#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "rpts/dataset.hpp"
#include "rpts/judge.hpp"
#include "rpts/metrics.hpp"

namespace rpts {

struct RunOptions {
    EvalConfig config;
    int max_inflight = 1;
    /// Heights reported in the lambda=0 step analysis.
    std::vector<int> analysis_heights = {1, 2, 3, 4};
    /// When set, the report carries a sensitivity grid over these axes.
    std::vector<double> sweep_lambdas;
    std::vector<int> sweep_h_fs;
};

struct SkippedInstance {
    std::string id;
    std::string reason;

    friend bool operator==(const SkippedInstance&, const SkippedInstance&) = default;
};

/// Everything one evaluation run produces. Contains no timestamps or
/// machine-specific fields: serializing the same run twice is byte-identical.
struct CorpusReport {
    EvalConfig config;
    CorpusSummary summary;
    std::vector<InstanceResult> results;  // sorted by instance id
    std::vector<SkippedInstance> skipped;  // missing trace files
    std::vector<SkippedInstance> errored;  // pipeline failures, with reasons
    std::vector<StepAnalysisCell> step_cells;
    std::vector<SweepCell> sweep_cells;  // filled only when a sweep was requested
    DatasetStats stats;
};

/// Evaluates every instance with a trace file named <id>.trace under
/// traces_dir. Missing traces are skipped, pipeline failures recorded; both
/// are excluded from aggregates. Throws EmptyCorpus when nothing evaluates.
CorpusReport run_evaluation(const Dataset& dataset, const std::string& traces_dir,
                            const Judge& judge, const RunOptions& options);

/// The k lowest-scoring steps, ascending by score; ties go to the lower
/// height, then the lower ordinal. k beyond the step count returns all steps.
std::vector<std::tuple<int, int, double>> localize_errors(const InstanceResult& result,
                                                          int k);

Json report_to_json(const CorpusReport& report);
std::string report_to_markdown(const CorpusReport& report);
std::string report_to_csv(const CorpusReport& report);

Json result_to_json(const InstanceResult& result);
InstanceResult result_from_json(const Json& doc);

/// Pulls one instance's result back out of a serialized report.
std::optional<InstanceResult> find_result(const Json& report_doc,
                                          const std::string& instance_id);

}  // namespace rpts
