#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rpts/model.hpp"

namespace rpts {

/// One coherence query: does this premise set support this conclusion?
/// Only premises/conclusion/language go on the wire; premise_ids exist so the
/// mock judge can key its answer table on stable clue/step ids.
struct JudgeRequest {
    std::vector<std::string> premises;
    std::string conclusion;
    Language language = Language::En;
    std::vector<std::string> premise_ids;
};

/// Scorer interface. Implementations must tolerate concurrent score() calls.
class Judge {
public:
    virtual ~Judge() = default;

    /// Returns a faithfulness score in [0,1].
    /// Throws JudgeUnavailable when the backend cannot be reached and
    /// ProtocolViolation when it answers outside the contract.
    virtual double score(const JudgeRequest& request) const = 0;
};

/// Deterministic judge for tests and offline runs: a fixed table keyed by
/// (sorted premise ids, conclusion) with a default for everything else.
/// Immutable after construction, so freely shareable across threads.
class MockJudge : public Judge {
public:
    explicit MockJudge(double default_score = 1.0);

    /// Registers a table entry; call during setup, before sharing.
    void set(std::vector<std::string> premise_ids, const std::string& conclusion,
             double score);

    double score(const JudgeRequest& request) const override;

    /// Loads {"default": f, "entries": [{"premises": [id...],
    /// "conclusion": s, "score": f}...]}.
    static MockJudge from_json(const nlohmann::json& spec);
    static MockJudge from_file(const std::string& path);

private:
    static std::string key(std::vector<std::string> ids, const std::string& conclusion);

    std::map<std::string, double> table_;
    double default_score_;
};

enum class JudgeProfile {
    Direct,  // native wire protocol: {"premises", "conclusion", "language"} -> {"score"}
    Chat,    // chat-completion endpoint driven by a prompt template
};

struct HttpJudgeOptions {
    std::string url;
    JudgeProfile profile = JudgeProfile::Direct;
    /// Environment variable holding the bearer token; empty value = no auth header.
    std::string token_env = "RPTS_JUDGE_TOKEN";
    /// Chat profile only: template with {premises} and {conclusion} placeholders.
    std::string prompt_template;
    std::string chat_model = "judge";
    int max_attempts = 3;
    std::chrono::milliseconds retry_base_delay{100};
    std::chrono::milliseconds request_timeout{30000};
};

/// HTTP judge client. Each score() call opens its own connection, so a single
/// instance is safe to share across scoring threads.
class HttpJudge : public Judge {
public:
    explicit HttpJudge(HttpJudgeOptions options);

    double score(const JudgeRequest& request) const override;

private:
    nlohmann::json build_payload(const JudgeRequest& request) const;
    double parse_response(const std::string& body) const;

    HttpJudgeOptions options_;
    std::string base_;  // scheme://host[:port]
    std::string path_;
};

/// Renders a chat prompt: premises joined one per line into {premises},
/// conclusion into {conclusion}.
std::string render_prompt(const std::string& prompt_template,
                          const std::vector<std::string>& premises,
                          const std::string& conclusion);

/// Finds the single numeric literal in a chat reply. Zero or several numbers,
/// or a value outside [0,1], is a ProtocolViolation.
double extract_decimal(const std::string& text);

/// The bundled template used when no --prompt-template file is given.
std::string default_judge_prompt_template();

}  // namespace rpts
