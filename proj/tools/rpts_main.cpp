// rpts — reasoning-trace evaluation from the command line.
//
// Exit codes: 0 success, 1 fatal error, 2 validation failures.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rpts/rpts.hpp"

namespace {

struct JudgeFlags {
    std::string kind = "mock";
    std::string url;
    std::string profile = "direct";
    std::string prompt_template_file;
    std::string token_env = "RPTS_JUDGE_TOKEN";
    std::string mock_table;
    double mock_default = 1.0;
};

void add_judge_flags(CLI::App* cmd, JudgeFlags& flags) {
    cmd->add_option("--judge", flags.kind, "Judge backend")
        ->check(CLI::IsMember({"mock", "http"}))
        ->capture_default_str();
    cmd->add_option("--judge-url", flags.url, "Endpoint for --judge http");
    cmd->add_option("--judge-profile", flags.profile,
                    "Wire shape for --judge http")
        ->check(CLI::IsMember({"direct", "chat"}))
        ->capture_default_str();
    cmd->add_option("--prompt-template", flags.prompt_template_file,
                    "Template file for the chat profile ({premises}/{conclusion})");
    cmd->add_option("--token-env", flags.token_env,
                    "Environment variable holding the judge auth token")
        ->capture_default_str();
    cmd->add_option("--mock-table", flags.mock_table,
                    "JSON answer table for the mock judge");
    cmd->add_option("--mock-default", flags.mock_default,
                    "Mock judge score for untabulated requests")
        ->capture_default_str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw rpts::IoError("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::unique_ptr<rpts::Judge> make_judge(const JudgeFlags& flags) {
    if (flags.kind == "mock") {
        if (!flags.mock_table.empty())
            return std::make_unique<rpts::MockJudge>(
                rpts::MockJudge::from_file(flags.mock_table));
        return std::make_unique<rpts::MockJudge>(flags.mock_default);
    }
    if (flags.url.empty())
        throw rpts::DomainError("--judge http requires --judge-url");
    rpts::HttpJudgeOptions options;
    options.url = flags.url;
    options.profile = flags.profile == "chat" ? rpts::JudgeProfile::Chat
                                              : rpts::JudgeProfile::Direct;
    options.token_env = flags.token_env;
    if (!flags.prompt_template_file.empty())
        options.prompt_template = read_file(flags.prompt_template_file);
    return std::make_unique<rpts::HttpJudge>(options);
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw rpts::IoError("cannot write " + out_path);
    out << content;
}

std::string render_report(const rpts::CorpusReport& report, const std::string& format) {
    if (format == "md") return rpts::report_to_markdown(report);
    if (format == "csv") return rpts::report_to_csv(report);
    return rpts::report_to_json(report).dump(2) + "\n";
}

// An instance that accepts whatever clues the steps mention; lets `parse`
// graph a trace without a dataset at hand.
rpts::InstanceRecord permissive_instance(const std::vector<rpts::ReasoningStep>& steps) {
    rpts::InstanceRecord instance;
    instance.id = "<none>";
    instance.context = "(context)";
    int max_visual = 1;
    int max_textual = 1;
    for (const auto& step : steps)
        for (const auto& ref : step.premises) {
            if (!ref.index) continue;
            if (ref.kind == rpts::RefKind::Visual)
                max_visual = std::max(max_visual, *ref.index);
            if (ref.kind == rpts::RefKind::Textual)
                max_textual = std::max(max_textual, *ref.index);
        }
    for (int i = 1; i <= max_visual; ++i)
        instance.visual_clues.push_back(
            {rpts::ClueKind::Visual, i, "", {"(visual clue)"}});
    for (int i = 1; i <= max_textual; ++i)
        instance.textual_clues.push_back({rpts::ClueKind::Textual, i, "(text clue)", {}});
    return instance;
}

std::vector<double> scores_from_file(const std::string& path) {
    rpts::Json doc;
    std::ifstream in(path);
    if (!in) throw rpts::IoError("cannot open " + path);
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw rpts::SchemaError(path + ": " + e.what());
    }
    const rpts::Json* array = &doc;
    if (doc.is_object() && doc.contains("scores")) array = &doc.at("scores");
    if (!array->is_array()) throw rpts::SchemaError(path + ": expected an array of scores");
    std::vector<double> scores;
    for (const auto& value : *array) {
        if (!value.is_number()) throw rpts::SchemaError(path + ": scores must be numbers");
        scores.push_back(value.get<double>());
    }
    return scores;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reasoning-trace evaluation: parse traces, build reasoning trees, "
                 "score steps, and report RPTS/accuracy"};
    app.require_subcommand(1);

    // --- validate ---------------------------------------------------------
    std::string validate_dataset;
    auto* validate = app.add_subcommand("validate", "Schema and quality checks");
    validate->add_option("dataset", validate_dataset, "dataset.json")->required();

    // --- stats ------------------------------------------------------------
    std::string stats_dataset;
    std::string stats_format = "text";
    auto* stats = app.add_subcommand("stats", "Aggregate corpus statistics");
    stats->add_option("dataset", stats_dataset, "dataset.json")->required();
    stats->add_option("--format", stats_format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    // --- evaluate ---------------------------------------------------------
    std::string eval_dataset;
    std::string eval_traces;
    rpts::EvalConfig eval_config;
    int eval_inflight = 1;
    std::string eval_out;
    std::string eval_format = "json";
    JudgeFlags eval_judge;
    auto* evaluate = app.add_subcommand("evaluate", "Score every trace and report");
    evaluate->add_option("dataset", eval_dataset, "dataset.json")->required();
    evaluate->add_option("traces", eval_traces, "Directory of <id>.trace files")
        ->required();
    evaluate->add_option("--lambda", eval_config.lambda, "Weight decay factor")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    evaluate->add_option("--hf", eval_config.h_f, "Focus height")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evaluate
        ->add_option("--threshold", eval_config.filter_threshold,
                     "Filtered-accuracy threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    evaluate->add_option("--max-inflight", eval_inflight, "Concurrent judge calls")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evaluate->add_option("--out", eval_out, "Write the report here instead of stdout");
    evaluate->add_option("--format", eval_format, "Report format")
        ->check(CLI::IsMember({"json", "md", "csv"}))
        ->capture_default_str();
    add_judge_flags(evaluate, eval_judge);

    // --- sweep ------------------------------------------------------------
    std::string sweep_dataset;
    std::string sweep_traces;
    std::vector<double> sweep_lambdas;
    std::vector<int> sweep_hfs;
    double sweep_threshold = 0.5;
    int sweep_inflight = 1;
    std::string sweep_out;
    std::string sweep_format = "json";
    JudgeFlags sweep_judge;
    auto* sweep = app.add_subcommand("sweep", "Sensitivity grid over lambda and h_f");
    sweep->add_option("dataset", sweep_dataset, "dataset.json")->required();
    sweep->add_option("traces", sweep_traces, "Directory of <id>.trace files")
        ->required();
    sweep->add_option("--lambdas", sweep_lambdas, "Comma-separated lambda axis")
        ->required()
        ->delimiter(',');
    sweep->add_option("--hfs", sweep_hfs, "Comma-separated h_f axis")
        ->required()
        ->delimiter(',');
    sweep->add_option("--threshold", sweep_threshold, "Below-threshold statistic cutoff")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sweep->add_option("--max-inflight", sweep_inflight, "Concurrent judge calls")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--out", sweep_out, "Write the grid here instead of stdout");
    sweep->add_option("--format", sweep_format, "Grid format")
        ->check(CLI::IsMember({"json", "md"}))
        ->capture_default_str();
    add_judge_flags(sweep, sweep_judge);

    // --- localize ---------------------------------------------------------
    std::string localize_report;
    std::string localize_instance;
    int localize_top = 3;
    auto* localize = app.add_subcommand("localize", "Lowest-scoring steps of one instance");
    localize->add_option("report", localize_report, "report.json from evaluate")
        ->required();
    localize->add_option("--instance", localize_instance, "Instance id")->required();
    localize->add_option("--top", localize_top, "How many steps to list")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // --- parse ------------------------------------------------------------
    std::string parse_file;
    auto* parse = app.add_subcommand("parse",
                                     "Parse and preprocess a trace; print the "
                                     "canonical form and graph heights");
    parse->add_option("trace", parse_file, "Trace file")->required();

    // --- mae --------------------------------------------------------------
    std::string mae_candidate;
    std::string mae_human;
    auto* mae = app.add_subcommand("mae", "Mean absolute error between score files");
    mae->add_option("candidate", mae_candidate, "candidate-scores.json")->required();
    mae->add_option("human", mae_human, "human-scores.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(validate)) {
            rpts::Dataset dataset = rpts::load_dataset(validate_dataset);
            std::cout << "ok: " << dataset.instances.size() << " instances\n";
            return 0;
        }

        if (app.got_subcommand(stats)) {
            rpts::Dataset dataset = rpts::load_dataset(stats_dataset);
            rpts::DatasetStats aggregate = rpts::dataset_stats(dataset);
            if (stats_format == "json")
                std::cout << rpts::stats_to_json(aggregate).dump(2) << "\n";
            else
                std::cout << rpts::stats_to_text(aggregate);
            return 0;
        }

        if (app.got_subcommand(evaluate)) {
            rpts::Dataset dataset = rpts::load_dataset(eval_dataset);
            auto judge = make_judge(eval_judge);
            rpts::RunOptions options;
            options.config = eval_config;
            options.max_inflight = eval_inflight;
            rpts::CorpusReport report =
                rpts::run_evaluation(dataset, eval_traces, *judge, options);
            emit(render_report(report, eval_format), eval_out);
            return 0;
        }

        if (app.got_subcommand(sweep)) {
            rpts::Dataset dataset = rpts::load_dataset(sweep_dataset);
            auto judge = make_judge(sweep_judge);
            rpts::RunOptions options;
            options.config.filter_threshold = sweep_threshold;
            options.max_inflight = sweep_inflight;
            options.sweep_lambdas = sweep_lambdas;
            options.sweep_h_fs = sweep_hfs;
            rpts::CorpusReport report =
                rpts::run_evaluation(dataset, sweep_traces, *judge, options);
            if (sweep_format == "md") {
                std::string out = "| h_f \\ lambda |";
                for (double l : sweep_lambdas) out += " " + std::to_string(l) + " |";
                out += "\n|---|";
                for (std::size_t i = 0; i < sweep_lambdas.size(); ++i) out += "---|";
                out += "\n";
                std::size_t k = 0;
                for (int h : sweep_hfs) {
                    out += "| " + std::to_string(h) + " |";
                    for (std::size_t i = 0; i < sweep_lambdas.size(); ++i, ++k) {
                        char cell[64];
                        std::snprintf(cell, sizeof(cell), " %.4f (%.2f%%) |",
                                      report.sweep_cells[k].mean_rpts,
                                      report.sweep_cells[k].pct_correct_below);
                        out += cell;
                    }
                    out += "\n";
                }
                emit(out, sweep_out);
            } else {
                rpts::Json doc;
                doc["threshold"] = sweep_threshold;
                doc["lambdas"] = sweep_lambdas;
                doc["h_fs"] = sweep_hfs;
                rpts::Json grid = rpts::Json::array();
                for (const auto& cell : report.sweep_cells)
                    grid.push_back(
                        rpts::Json{{"lambda", cell.lambda},
                                   {"h_f", cell.h_f},
                                   {"mean_rpts", cell.mean_rpts},
                                   {"pct_correct_below", cell.pct_correct_below}});
                doc["grid"] = std::move(grid);
                emit(doc.dump(2) + "\n", sweep_out);
            }
            return 0;
        }

        if (app.got_subcommand(localize)) {
            rpts::Json doc = rpts::Json::parse(read_file(localize_report));
            auto result = rpts::find_result(doc, localize_instance);
            if (!result)
                throw rpts::DomainError("no result for instance '" + localize_instance +
                                        "' in " + localize_report);
            auto ranked = rpts::localize_errors(*result, localize_top);
            std::cout << "ordinal height score\n";
            for (const auto& [ordinal, height, score] : ranked) {
                char line[64];
                std::snprintf(line, sizeof(line), "%7d %6d %.4f\n", ordinal, height,
                              score);
                std::cout << line;
            }
            return 0;
        }

        if (app.got_subcommand(parse)) {
            rpts::ParseOutcome outcome =
                rpts::parse_trace(rpts::RawTrace{read_file(parse_file)});
            for (const auto& diagnostic : outcome.diagnostics)
                std::cerr << "line " << diagnostic.line_number << ": "
                          << rpts::to_string(diagnostic.reason) << ": "
                          << diagnostic.snippet << "\n";
            rpts::InstanceRecord instance = permissive_instance(outcome.steps);
            auto steps = rpts::preprocess(outcome.steps, instance);
            for (const auto& step : steps)
                std::cout << rpts::canonical_serialize(step) << "\n";
            rpts::ReasoningGraph graph = rpts::build_graph(steps, instance);
            std::cout << "\n" << rpts::debug_export(graph);
            return 0;
        }

        if (app.got_subcommand(mae)) {
            double value = rpts::scorer_mae(scores_from_file(mae_candidate),
                                            scores_from_file(mae_human));
            char line[32];
            std::snprintf(line, sizeof(line), "mae: %.6f\n", value);
            std::cout << line;
            return 0;
        }
    } catch (const rpts::ValidationError& e) {
        std::cerr << "validation failed:\n";
        for (const auto& violation : e.violations())
            std::cerr << "  - " << violation << "\n";
        return 2;
    } catch (const rpts::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
