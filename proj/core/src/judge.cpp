#include "rpts/judge.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <thread>

#include <httplib.h>

#include "rpts/errors.hpp"

namespace rpts {

// ---------------------------------------------------------------------------
// MockJudge

MockJudge::MockJudge(double default_score) : default_score_(default_score) {}

std::string MockJudge::key(std::vector<std::string> ids, const std::string& conclusion) {
    std::sort(ids.begin(), ids.end());
    std::string k;
    for (const auto& id : ids) {
        k += id;
        k += '\x1f';
    }
    k += '\x1e';
    k += conclusion;
    return k;
}

void MockJudge::set(std::vector<std::string> premise_ids, const std::string& conclusion,
                    double score) {
    table_[key(std::move(premise_ids), conclusion)] = score;
}

double MockJudge::score(const JudgeRequest& request) const {
    auto it = table_.find(key(request.premise_ids, request.conclusion));
    return it == table_.end() ? default_score_ : it->second;
}

MockJudge MockJudge::from_json(const nlohmann::json& spec) {
    if (!spec.is_object()) throw SchemaError("mock table must be a JSON object");
    MockJudge judge(spec.value("default", 1.0));
    if (spec.contains("entries")) {
        if (!spec["entries"].is_array())
            throw SchemaError("mock table 'entries' must be an array");
        for (const auto& entry : spec["entries"]) {
            if (!entry.contains("premises") || !entry.contains("conclusion") ||
                !entry.contains("score"))
                throw SchemaError("mock table entry needs premises/conclusion/score");
            judge.set(entry["premises"].get<std::vector<std::string>>(),
                      entry["conclusion"].get<std::string>(),
                      entry["score"].get<double>());
        }
    }
    return judge;
}

MockJudge MockJudge::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mock table: " + path);
    nlohmann::json spec;
    try {
        in >> spec;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("mock table " + path + ": " + e.what());
    }
    return from_json(spec);
}

// ---------------------------------------------------------------------------
// Prompt rendering and reply parsing

std::string render_prompt(const std::string& prompt_template,
                          const std::vector<std::string>& premises,
                          const std::string& conclusion) {
    std::string joined;
    for (std::size_t i = 0; i < premises.size(); ++i) {
        if (i > 0) joined += '\n';
        joined += "- " + premises[i];
    }
    std::string out = prompt_template;
    const auto replace_all = [&out](const std::string& needle, const std::string& value) {
        std::size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), value);
            pos += value.size();
        }
    };
    replace_all("{premises}", joined);
    replace_all("{conclusion}", conclusion);
    return out;
}

double extract_decimal(const std::string& text) {
    static const std::regex number(R"(\d+(?:\.\d+)?)");
    auto begin = std::sregex_iterator(text.begin(), text.end(), number);
    auto end = std::sregex_iterator();
    std::vector<std::string> hits;
    for (auto it = begin; it != end; ++it) hits.push_back(it->str());
    if (hits.size() != 1)
        throw ProtocolViolation("judge reply must contain exactly one number, got " +
                                std::to_string(hits.size()) + ": \"" + text + "\"");
    double value = std::stod(hits.front());
    if (value < 0.0 || value > 1.0)
        throw ProtocolViolation("judge score " + hits.front() + " outside [0,1]");
    return value;
}

std::string default_judge_prompt_template() {
    return
        "You are grading one step of a reasoning chain.\n"
        "Premises:\n"
        "{premises}\n"
        "Conclusion: {conclusion}\n"
        "On a scale from 0 to 1, how well do the premises support the conclusion?\n"
        "Reply with the number only.\n";
}

// ---------------------------------------------------------------------------
// HttpJudge

namespace {

// Splits "scheme://host[:port]/path" into client base and request path.
void split_url(const std::string& url, std::string& base, std::string& path) {
    auto scheme_end = url.find("://");
    std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    if (path_start == std::string::npos) {
        base = url;
        path = "/";
    } else {
        base = url.substr(0, path_start);
        path = url.substr(path_start);
    }
}

}  // namespace

HttpJudge::HttpJudge(HttpJudgeOptions options) : options_(std::move(options)) {
    if (options_.url.empty()) throw DomainError("judge url must not be empty");
    split_url(options_.url, base_, path_);
    if (options_.profile == JudgeProfile::Chat && options_.prompt_template.empty())
        options_.prompt_template = default_judge_prompt_template();
}

nlohmann::json HttpJudge::build_payload(const JudgeRequest& request) const {
    if (options_.profile == JudgeProfile::Direct) {
        return nlohmann::json{{"premises", request.premises},
                              {"conclusion", request.conclusion},
                              {"language", to_string(request.language)}};
    }
    std::string prompt =
        render_prompt(options_.prompt_template, request.premises, request.conclusion);
    return nlohmann::json{
        {"model", options_.chat_model},
        {"temperature", 0},
        {"messages", nlohmann::json::array({nlohmann::json{{"role", "user"},
                                                           {"content", prompt}}})}};
}

double HttpJudge::parse_response(const std::string& body) const {
    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception&) {
        throw ProtocolViolation("judge reply is not JSON: \"" + body + "\"");
    }
    if (options_.profile == JudgeProfile::Direct) {
        if (!reply.is_object() || !reply.contains("score") ||
            !reply["score"].is_number())
            throw ProtocolViolation("judge reply missing numeric 'score'");
        double value = reply["score"].get<double>();
        if (value < 0.0 || value > 1.0)
            throw ProtocolViolation("judge score " + std::to_string(value) +
                                    " outside [0,1]");
        return value;
    }
    // Chat profile: choices[0].message.content carries the bare number.
    if (!reply.contains("choices") || !reply["choices"].is_array() ||
        reply["choices"].empty())
        throw ProtocolViolation("chat reply missing choices");
    const auto& first = reply["choices"][0];
    if (!first.contains("message") || !first["message"].contains("content") ||
        !first["message"]["content"].is_string())
        throw ProtocolViolation("chat reply missing message content");
    return extract_decimal(first["message"]["content"].get<std::string>());
}

double HttpJudge::score(const JudgeRequest& request) const {
    const std::string body = build_payload(request).dump();
    std::string token;
    if (!options_.token_env.empty()) {
        if (const char* value = std::getenv(options_.token_env.c_str()))
            token = value;
    }

    std::string last_failure = "no attempt made";
    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
        if (attempt > 1) {
            auto delay = options_.retry_base_delay * (1 << (attempt - 2));
            std::this_thread::sleep_for(delay);
        }
        httplib::Client client(base_);
        client.set_connection_timeout(options_.request_timeout);
        client.set_read_timeout(options_.request_timeout);
        httplib::Headers headers;
        if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
        auto result = client.Post(path_, headers, body, "application/json");
        if (!result) {
            last_failure = "transport error: " + httplib::to_string(result.error());
            continue;
        }
        if (result->status != 200) {
            last_failure = "HTTP " + std::to_string(result->status);
            continue;
        }
        return parse_response(result->body);
    }
    throw JudgeUnavailable("judge at " + options_.url + " failed after " +
                           std::to_string(options_.max_attempts) +
                           " attempts (" + last_failure + ")");
}

}  // namespace rpts
