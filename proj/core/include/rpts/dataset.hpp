#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rpts/model.hpp"

namespace rpts {

/// Insertion-ordered JSON used for every document this library emits, so
/// repeated runs serialize byte-identically with human-chosen key order.
using Json = nlohmann::ordered_json;

struct DatasetMeta {
    std::string name;
    std::string version;
    std::map<std::string, int> language_counts;  // computed on load, not stored

    friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

struct Dataset {
    DatasetMeta meta;
    std::vector<InstanceRecord> instances;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Reads and validates a dataset document:
///   {"meta": {"name", "version"}, "instances": [...]}
/// Structural problems (missing fields, bad enums, malformed clue ids,
/// duplicate instance ids) raise SchemaError; instance-invariant breaks are
/// collected across the whole file into one ValidationError.
Dataset load_dataset(const std::string& path);

/// Same, from an already-parsed document.
Dataset dataset_from_json(const Json& doc);

/// Inverse of dataset_from_json; loading the output yields an equal Dataset.
Json dataset_to_json(const Dataset& dataset);

/// Count histogram over the buckets <=2, 3, 4, 5, >=6.
struct Histogram {
    int le2 = 0;
    int eq3 = 0;
    int eq4 = 0;
    int eq5 = 0;
    int ge6 = 0;

    void add(int value);
    int total() const { return le2 + eq3 + eq4 + eq5 + ge6; }

    friend bool operator==(const Histogram&, const Histogram&) = default;
};

/// Aggregate corpus statistics: answer balance, capability and relationship
/// percentages, and reference-trace histograms (steps and tree heights).
/// Capability percentages may sum above 100; instances carry several tags.
struct DatasetStats {
    int total = 0;
    std::map<std::string, int> language_counts;
    std::map<std::string, double> answer_pct;        // agree/disagree, sums to 100
    std::vector<std::pair<std::string, double>> capability_pct;  // fixed order
    std::map<std::string, double> relationship_pct;  // sums to 100
    int with_reference_steps = 0;
    Histogram reference_step_counts;  // over instances with reference steps
    Histogram reference_tree_heights;
};

/// Tree heights come from preprocessing + graphing the reference steps.
DatasetStats dataset_stats(const Dataset& dataset);

Json stats_to_json(const DatasetStats& stats);
std::string stats_to_text(const DatasetStats& stats);

}  // namespace rpts
