#include "rpts/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "rpts/errors.hpp"
#include "rpts/graph.hpp"
#include "rpts/trace_parser.hpp"

namespace rpts {

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
    throw SchemaError(path + ": " + what);
}

const Json& require_field(const Json& obj, const std::string& key,
                          const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) schema_fail(path, "missing '" + key + "'");
    return obj.at(key);
}

std::string require_string(const Json& obj, const std::string& key,
                           const std::string& path) {
    const Json& value = require_field(obj, key, path);
    if (!value.is_string()) schema_fail(path + "." + key, "expected a string");
    return value.get<std::string>();
}

std::string optional_string(const Json& obj, const std::string& key) {
    if (obj.is_object() && obj.contains(key) && obj.at(key).is_string())
        return obj.at(key).get<std::string>();
    return "";
}

// "V3" -> (Visual, 3); also accepts T/C prefixes. Rejects anything else.
std::pair<ClueKind, int> parse_clue_id(const std::string& id, const std::string& path) {
    if (id.size() < 2) schema_fail(path, "malformed clue id '" + id + "'");
    ClueKind kind;
    switch (id[0]) {
        case 'V': kind = ClueKind::Visual; break;
        case 'T': kind = ClueKind::Textual; break;
        default: schema_fail(path, "clue id '" + id + "' must start with V or T");
    }
    if (id[1] == '0') schema_fail(path, "clue index in '" + id + "' must be >= 1");
    int index = 0;
    for (std::size_t i = 1; i < id.size(); ++i) {
        if (id[i] < '0' || id[i] > '9')
            schema_fail(path, "malformed clue id '" + id + "'");
        index = index * 10 + (id[i] - '0');
    }
    return {kind, index};
}

Clue clue_from_json(const Json& doc, ClueKind expected, const std::string& path) {
    Clue clue;
    auto [kind, index] = parse_clue_id(require_string(doc, "id", path), path);
    if (kind != expected)
        schema_fail(path, "clue id '" + doc.at("id").get<std::string>() +
                              "' does not match its list");
    clue.kind = kind;
    clue.index = index;
    clue.text = optional_string(doc, "text");
    if (doc.contains("ground_truth_conclusions")) {
        const Json& truths = doc.at("ground_truth_conclusions");
        if (!truths.is_array())
            schema_fail(path + ".ground_truth_conclusions", "expected an array");
        for (const auto& t : truths) {
            if (!t.is_string())
                schema_fail(path + ".ground_truth_conclusions", "expected strings");
            clue.ground_truth_conclusions.push_back(t.get<std::string>());
        }
    }
    return clue;
}

InstanceRecord instance_from_json(const Json& doc, const std::string& path) {
    InstanceRecord record;
    record.id = require_string(doc, "id", path);
    record.statement = require_string(doc, "statement", path);
    record.context = optional_string(doc, "context");

    std::string language = require_string(doc, "language", path);
    auto parsed_language = parse_language_name(language);
    if (!parsed_language) schema_fail(path + ".language", "unknown '" + language + "'");
    record.language = *parsed_language;

    std::string answer = require_string(doc, "answer", path);
    auto parsed_answer = parse_verdict_name(answer);
    if (!parsed_answer || *parsed_answer == Verdict::Unknown)
        schema_fail(path + ".answer", "must be 'agree' or 'disagree'");
    record.answer = *parsed_answer;

    const Json& capabilities = require_field(doc, "capabilities", path);
    if (!capabilities.is_array()) schema_fail(path + ".capabilities", "expected an array");
    for (const auto& cap : capabilities) {
        if (!cap.is_string()) schema_fail(path + ".capabilities", "expected strings");
        auto parsed = parse_capability_name(cap.get<std::string>());
        if (!parsed)
            schema_fail(path + ".capabilities",
                        "unknown '" + cap.get<std::string>() + "'");
        record.capabilities.insert(*parsed);
    }

    std::string relationship = require_string(doc, "relationship", path);
    auto parsed_relationship = parse_relationship_name(relationship);
    if (!parsed_relationship)
        schema_fail(path + ".relationship", "unknown '" + relationship + "'");
    record.relationship = *parsed_relationship;

    if (doc.contains("guided_subtype")) {
        std::string subtype = require_string(doc, "guided_subtype", path);
        auto parsed = parse_guided_subtype_name(subtype);
        if (!parsed) schema_fail(path + ".guided_subtype", "unknown '" + subtype + "'");
        record.guided_subtype = *parsed;
    }

    const Json& visual = require_field(doc, "visual_clues", path);
    if (!visual.is_array()) schema_fail(path + ".visual_clues", "expected an array");
    for (std::size_t i = 0; i < visual.size(); ++i)
        record.visual_clues.push_back(clue_from_json(
            visual[i], ClueKind::Visual,
            path + ".visual_clues[" + std::to_string(i) + "]"));

    const Json& textual = require_field(doc, "textual_clues", path);
    if (!textual.is_array()) schema_fail(path + ".textual_clues", "expected an array");
    for (std::size_t i = 0; i < textual.size(); ++i)
        record.textual_clues.push_back(clue_from_json(
            textual[i], ClueKind::Textual,
            path + ".textual_clues[" + std::to_string(i) + "]"));

    if (doc.contains("reference_steps")) {
        const Json& steps = doc.at("reference_steps");
        if (!steps.is_array()) schema_fail(path + ".reference_steps", "expected an array");
        std::vector<ReasoningStep> parsed_steps;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const std::string step_path =
                path + ".reference_steps[" + std::to_string(i) + "]";
            if (!steps[i].is_string()) schema_fail(step_path, "expected a string");
            auto step = parse_step_line(steps[i].get<std::string>());
            if (!step)
                schema_fail(step_path, "not a valid step line: " +
                                           steps[i].get<std::string>());
            parsed_steps.push_back(*step);
        }
        record.reference_steps = std::move(parsed_steps);
    }
    return record;
}

Json clue_to_json(const Clue& clue) {
    Json doc;
    doc["id"] = clue.id();
    if (!clue.text.empty()) doc["text"] = clue.text;
    if (!clue.ground_truth_conclusions.empty())
        doc["ground_truth_conclusions"] = clue.ground_truth_conclusions;
    return doc;
}

Json instance_to_json(const InstanceRecord& record) {
    Json doc;
    doc["id"] = record.id;
    doc["statement"] = record.statement;
    if (!record.context.empty()) doc["context"] = record.context;
    doc["language"] = to_string(record.language);
    doc["answer"] = to_string(record.answer);
    Json capabilities = Json::array();
    for (Capability cap : record.capabilities) capabilities.push_back(to_string(cap));
    doc["capabilities"] = std::move(capabilities);
    doc["relationship"] = to_string(record.relationship);
    if (record.guided_subtype)
        doc["guided_subtype"] = to_string(*record.guided_subtype);
    Json visual = Json::array();
    for (const Clue& clue : record.visual_clues) visual.push_back(clue_to_json(clue));
    doc["visual_clues"] = std::move(visual);
    Json textual = Json::array();
    for (const Clue& clue : record.textual_clues) textual.push_back(clue_to_json(clue));
    doc["textual_clues"] = std::move(textual);
    if (record.reference_steps) {
        Json steps = Json::array();
        for (const ReasoningStep& step : *record.reference_steps)
            steps.push_back(canonical_serialize(step));
        doc["reference_steps"] = std::move(steps);
    }
    return doc;
}

}  // namespace

Dataset dataset_from_json(const Json& doc) {
    if (!doc.is_object()) throw SchemaError("dataset root must be a JSON object");
    Dataset dataset;
    if (doc.contains("meta")) {
        const Json& meta = doc.at("meta");
        if (!meta.is_object()) throw SchemaError("meta: expected an object");
        dataset.meta.name = optional_string(meta, "name");
        dataset.meta.version = optional_string(meta, "version");
    }
    const Json& instances = require_field(doc, "instances", "dataset");
    if (!instances.is_array()) throw SchemaError("instances: expected an array");

    std::set<std::string> seen_ids;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        InstanceRecord record =
            instance_from_json(instances[i], "instances[" + std::to_string(i) + "]");
        if (!seen_ids.insert(record.id).second)
            throw SchemaError("duplicate instance id '" + record.id + "'");
        dataset.meta.language_counts[to_string(record.language)] += 1;
        dataset.instances.push_back(std::move(record));
    }

    // Quality gate: collect every invariant break across the file, then fail
    // once with the full list.
    std::vector<std::string> violations;
    for (const auto& record : dataset.instances)
        for (const auto& violation : validate_instance(record))
            violations.push_back("instance " + record.id + ": " +
                                 violation.to_string());
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return dataset;
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset: " + path);
    Json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return dataset_from_json(doc);
}

Json dataset_to_json(const Dataset& dataset) {
    Json doc;
    doc["meta"] = Json{{"name", dataset.meta.name},
                       {"version", dataset.meta.version}};
    Json instances = Json::array();
    for (const auto& record : dataset.instances)
        instances.push_back(instance_to_json(record));
    doc["instances"] = std::move(instances);
    return doc;
}

// ---------------------------------------------------------------------------
// Stats

void Histogram::add(int value) {
    if (value <= 2)
        ++le2;
    else if (value == 3)
        ++eq3;
    else if (value == 4)
        ++eq4;
    else if (value == 5)
        ++eq5;
    else
        ++ge6;
}

DatasetStats dataset_stats(const Dataset& dataset) {
    DatasetStats stats;
    stats.total = static_cast<int>(dataset.instances.size());
    if (stats.total == 0) return stats;
    double n = static_cast<double>(stats.total);

    int agree = 0;
    std::map<Capability, int> capability_counts;
    std::map<std::string, int> relationship_counts;
    for (const auto& record : dataset.instances) {
        stats.language_counts[to_string(record.language)] += 1;
        if (record.answer == Verdict::Agree) ++agree;
        for (Capability cap : record.capabilities) capability_counts[cap] += 1;
        relationship_counts[to_string(record.relationship)] += 1;

        if (!record.reference_steps) continue;
        ++stats.with_reference_steps;
        stats.reference_step_counts.add(
            static_cast<int>(record.reference_steps->size()));
        try {
            auto steps = preprocess(*record.reference_steps, record);
            ReasoningGraph graph = build_graph(steps, record);
            stats.reference_tree_heights.add(graph_height(graph));
        } catch (const Error&) {
            // Reference steps that cannot be graphed contribute no height.
        }
    }

    stats.answer_pct["agree"] = 100.0 * agree / n;
    stats.answer_pct["disagree"] = 100.0 * (stats.total - agree) / n;
    for (Capability cap : all_capabilities())
        stats.capability_pct.emplace_back(to_string(cap),
                                          100.0 * capability_counts[cap] / n);
    for (const char* name : {"guided", "adversarial", "independent"})
        stats.relationship_pct[name] = 100.0 * relationship_counts[name] / n;
    return stats;
}

namespace {

Json histogram_to_json(const Histogram& hist) {
    Json doc;
    doc["<=2"] = hist.le2;
    doc["3"] = hist.eq3;
    doc["4"] = hist.eq4;
    doc["5"] = hist.eq5;
    doc[">=6"] = hist.ge6;
    return doc;
}

std::string pct(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f%%", value);
    return buffer;
}

}  // namespace

Json stats_to_json(const DatasetStats& stats) {
    Json doc;
    doc["total"] = stats.total;
    doc["languages"] = stats.language_counts;
    doc["answers_pct"] = Json{{"agree", stats.answer_pct.count("agree")
                                            ? stats.answer_pct.at("agree")
                                            : 0.0},
                              {"disagree", stats.answer_pct.count("disagree")
                                               ? stats.answer_pct.at("disagree")
                                               : 0.0}};
    Json capabilities;
    for (const auto& [name, value] : stats.capability_pct) capabilities[name] = value;
    doc["capabilities_pct"] = std::move(capabilities);
    Json relationships;
    for (const char* name : {"guided", "adversarial", "independent"})
        relationships[name] = stats.relationship_pct.count(name)
                                  ? stats.relationship_pct.at(name)
                                  : 0.0;
    doc["relationships_pct"] = std::move(relationships);
    doc["reference"] = Json{
        {"instances_with_steps", stats.with_reference_steps},
        {"step_count_hist", histogram_to_json(stats.reference_step_counts)},
        {"tree_height_hist", histogram_to_json(stats.reference_tree_heights)},
    };
    return doc;
}

std::string stats_to_text(const DatasetStats& stats) {
    std::string out;
    out += "instances: " + std::to_string(stats.total);
    if (!stats.language_counts.empty()) {
        out += " (";
        bool first = true;
        for (const auto& [language, count] : stats.language_counts) {
            if (!first) out += ", ";
            out += language + " " + std::to_string(count);
            first = false;
        }
        out += ")";
    }
    out += "\n";
    if (stats.total == 0) return out;

    out += "answers: agree " + pct(stats.answer_pct.at("agree")) + ", disagree " +
           pct(stats.answer_pct.at("disagree")) + "\n";
    out += "capabilities:";
    for (const auto& [name, value] : stats.capability_pct)
        out += " " + name + " " + pct(value);
    out += "\n";
    out += "relationships:";
    for (const char* name : {"guided", "adversarial", "independent"})
        out += std::string(" ") + name + " " + pct(stats.relationship_pct.at(name));
    out += "\n";
    out += "reference traces: " + std::to_string(stats.with_reference_steps) + " of " +
           std::to_string(stats.total) + " instances\n";
    const auto render = [](const Histogram& hist) {
        return "<=2: " + std::to_string(hist.le2) + "  3: " + std::to_string(hist.eq3) +
               "  4: " + std::to_string(hist.eq4) + "  5: " + std::to_string(hist.eq5) +
               "  >=6: " + std::to_string(hist.ge6);
    };
    out += "  steps:   " + render(stats.reference_step_counts) + "\n";
    out += "  heights: " + render(stats.reference_tree_heights) + "\n";
    return out;
}

}  // namespace rpts
