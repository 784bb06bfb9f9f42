#include "rpts/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpts/errors.hpp"

namespace rpts {

CorpusReport run_evaluation(const Dataset& dataset, const std::string& traces_dir,
                            const Judge& judge, const RunOptions& options) {
    CorpusReport report;
    report.config = options.config;
    report.stats = dataset_stats(dataset);

    for (const auto& instance : dataset.instances) {
        std::filesystem::path trace_path =
            std::filesystem::path(traces_dir) / (instance.id + ".trace");
        std::ifstream in(trace_path);
        if (!in) {
            report.skipped.push_back({instance.id, "missing trace file"});
            continue;
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        try {
            report.results.push_back(evaluate_instance(buffer.str(), instance, judge,
                                                       options.config,
                                                       options.max_inflight));
        } catch (const EvalError& e) {
            report.errored.push_back({instance.id, e.what()});
        }
    }

    if (report.results.empty())
        throw EmptyCorpus("no instance evaluated: " +
                          std::to_string(report.skipped.size()) + " skipped, " +
                          std::to_string(report.errored.size()) + " errored");

    // Fixed reduction order: aggregates run over id-sorted results so the
    // report is identical no matter how the dataset file orders instances.
    auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
    std::sort(report.results.begin(), report.results.end(), by_id);
    std::sort(report.skipped.begin(), report.skipped.end(), by_id);
    std::sort(report.errored.begin(), report.errored.end(), by_id);

    report.summary = corpus_metrics(report.results);
    report.step_cells = step_analysis(report.results, options.analysis_heights);
    if (!options.sweep_lambdas.empty() && !options.sweep_h_fs.empty())
        report.sweep_cells =
            sensitivity_sweep(report.results, options.sweep_lambdas,
                              options.sweep_h_fs, options.config.filter_threshold);
    return report;
}

std::vector<std::tuple<int, int, double>> localize_errors(const InstanceResult& result,
                                                          int k) {
    std::vector<StepDetail> steps = result.per_step;
    std::sort(steps.begin(), steps.end(), [](const StepDetail& a, const StepDetail& b) {
        if (a.score != b.score) return a.score < b.score;
        if (a.height != b.height) return a.height < b.height;
        return a.ordinal < b.ordinal;
    });
    if (k < static_cast<int>(steps.size()) && k >= 0)
        steps.resize(static_cast<std::size_t>(k));
    std::vector<std::tuple<int, int, double>> ranked;
    ranked.reserve(steps.size());
    for (const auto& step : steps)
        ranked.emplace_back(step.ordinal, step.height, step.score);
    return ranked;
}

// ---------------------------------------------------------------------------
// Serialization

Json result_to_json(const InstanceResult& result) {
    Json doc;
    doc["id"] = result.id;
    doc["rpts"] = result.rpts;
    doc["verdict"] = to_string(result.verdict);
    doc["correct"] = result.correct;
    doc["filtered_correct"] = result.filtered_correct;
    Json steps = Json::array();
    for (const auto& step : result.per_step)
        steps.push_back(Json{{"ordinal", step.ordinal},
                             {"height", step.height},
                             {"weight", step.weight},
                             {"score", step.score}});
    doc["per_step"] = std::move(steps);
    return doc;
}

InstanceResult result_from_json(const Json& doc) {
    InstanceResult result;
    if (!doc.is_object() || !doc.contains("id") || !doc.contains("rpts") ||
        !doc.contains("verdict") || !doc.contains("per_step"))
        throw SchemaError("result object needs id/rpts/verdict/per_step");
    result.id = doc.at("id").get<std::string>();
    result.rpts = doc.at("rpts").get<double>();
    auto verdict = parse_verdict_name(doc.at("verdict").get<std::string>());
    if (!verdict) throw SchemaError("unknown verdict in result");
    result.verdict = *verdict;
    result.correct = doc.value("correct", false);
    result.filtered_correct = doc.value("filtered_correct", false);
    for (const auto& step : doc.at("per_step")) {
        StepDetail detail;
        detail.ordinal = step.at("ordinal").get<int>();
        detail.height = step.at("height").get<int>();
        detail.weight = step.value("weight", 0.0);
        detail.score = step.at("score").get<double>();
        result.per_step.push_back(detail);
    }
    return result;
}

Json report_to_json(const CorpusReport& report) {
    Json doc;
    doc["config"] = Json{{"lambda", report.config.lambda},
                         {"h_f", report.config.h_f},
                         {"filter_threshold", report.config.filter_threshold}};
    doc["summary"] = Json{
        {"instances_evaluated", static_cast<int>(report.results.size())},
        {"skipped", static_cast<int>(report.skipped.size())},
        {"errored", static_cast<int>(report.errored.size())},
        {"acc", report.summary.acc},
        {"mean_rpts", report.summary.mean_rpts},
        {"acc_filtered", report.summary.acc_filtered},
        {"delta", report.summary.delta},
    };
    Json results = Json::array();
    for (const auto& result : report.results) results.push_back(result_to_json(result));
    doc["results"] = std::move(results);
    Json skipped = Json::array();
    for (const auto& entry : report.skipped)
        skipped.push_back(Json{{"id", entry.id}, {"reason", entry.reason}});
    doc["skipped"] = std::move(skipped);
    Json errored = Json::array();
    for (const auto& entry : report.errored)
        errored.push_back(Json{{"id", entry.id}, {"reason", entry.reason}});
    doc["errored"] = std::move(errored);
    Json analysis = Json::array();
    for (const auto& cell : report.step_cells) {
        Json entry;
        entry["h_f"] = cell.h_f;
        if (cell.mean_rpts)
            entry["mean_rpts"] = *cell.mean_rpts;
        else
            entry["mean_rpts"] = nullptr;
        entry["instances_used"] = cell.instances_used;
        entry["instances_excluded"] = cell.instances_excluded;
        analysis.push_back(std::move(entry));
    }
    doc["step_analysis"] = std::move(analysis);
    if (!report.sweep_cells.empty()) {
        Json sweep = Json::array();
        for (const auto& cell : report.sweep_cells)
            sweep.push_back(Json{{"lambda", cell.lambda},
                                 {"h_f", cell.h_f},
                                 {"mean_rpts", cell.mean_rpts},
                                 {"pct_correct_below", cell.pct_correct_below}});
        doc["sweep"] = std::move(sweep);
    }
    doc["dataset_stats"] = stats_to_json(report.stats);
    return doc;
}

std::optional<InstanceResult> find_result(const Json& report_doc,
                                          const std::string& instance_id) {
    if (!report_doc.is_object() || !report_doc.contains("results") ||
        !report_doc.at("results").is_array())
        throw SchemaError("report document has no results array");
    for (const auto& entry : report_doc.at("results"))
        if (entry.is_object() && entry.value("id", "") == instance_id)
            return result_from_json(entry);
    return std::nullopt;
}

namespace {

std::string fixed(double value, int digits = 4) {
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
    return buffer;
}

}  // namespace

std::string report_to_markdown(const CorpusReport& report) {
    std::string out;
    out += "# Evaluation report\n\n";
    out += "config: lambda " + fixed(report.config.lambda, 2) + ", h_f " +
           std::to_string(report.config.h_f) + ", threshold " +
           fixed(report.config.filter_threshold, 2) + "\n\n";
    out += "| instances | acc | mean RPTS | acc_filtered | delta |\n";
    out += "|---|---|---|---|---|\n";
    out += "| " + std::to_string(report.results.size()) + " | " +
           fixed(report.summary.acc) + " | " + fixed(report.summary.mean_rpts) +
           " | " + fixed(report.summary.acc_filtered) + " | " +
           fixed(report.summary.delta) + " |\n\n";
    if (!report.skipped.empty() || !report.errored.empty()) {
        out += "skipped " + std::to_string(report.skipped.size()) + ", errored " +
               std::to_string(report.errored.size()) + "\n\n";
    }
    out += "## Instances\n\n";
    out += "| id | rpts | verdict | correct | filtered |\n";
    out += "|---|---|---|---|---|\n";
    for (const auto& result : report.results) {
        out += "| " + result.id + " | " + fixed(result.rpts) + " | " +
               to_string(result.verdict) + " | " + (result.correct ? "yes" : "no") +
               " | " + (result.filtered_correct ? "yes" : "no") + " |\n";
    }
    out += "\n## Step analysis (lambda = 0)\n\n";
    out += "| h_f | mean RPTS | used | excluded |\n";
    out += "|---|---|---|---|\n";
    for (const auto& cell : report.step_cells) {
        out += "| " + std::to_string(cell.h_f) + " | " +
               (cell.mean_rpts ? fixed(*cell.mean_rpts) : std::string("-")) + " | " +
               std::to_string(cell.instances_used) + " | " +
               std::to_string(cell.instances_excluded) + " |\n";
    }
    if (!report.sweep_cells.empty()) {
        out += "\n## Sensitivity\n\n";
        out += "| lambda | h_f | mean RPTS | % correct below threshold |\n";
        out += "|---|---|---|---|\n";
        for (const auto& cell : report.sweep_cells) {
            out += "| " + fixed(cell.lambda, 2) + " | " + std::to_string(cell.h_f) +
                   " | " + fixed(cell.mean_rpts) + " | " +
                   fixed(cell.pct_correct_below, 2) + " |\n";
        }
    }
    return out;
}

std::string report_to_csv(const CorpusReport& report) {
    std::string out = "id,rpts,verdict,correct,filtered_correct,steps\n";
    for (const auto& result : report.results) {
        out += result.id + "," + fixed(result.rpts, 6) + "," +
               to_string(result.verdict) + "," + (result.correct ? "1" : "0") + "," +
               (result.filtered_correct ? "1" : "0") + "," +
               std::to_string(result.per_step.size()) + "\n";
    }
    return out;
}

}  // namespace rpts
