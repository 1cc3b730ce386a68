#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmoforge/llm/ledger.hpp"

namespace cmoforge::llm {

/// Retryable backend failure (network error, bad HTTP status, refusal).
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A replay backend had no recorded response for a prompt. Hard error: the
/// run being replayed diverged from the recording.
class ReplayMiss : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Backend answer: the raw text plus token counts when the transport
/// reports them (-1 otherwise).
struct Completion {
    std::string text;
    long prompt_tokens = -1;
    long completion_tokens = -1;

    Completion() = default;
    Completion(std::string t) : text(std::move(t)) {}  // NOLINT(google-explicit-constructor)
    Completion(const char* t) : text(t) {}             // NOLINT(google-explicit-constructor)
};

class LLMBackend {
public:
    virtual ~LLMBackend() = default;
    virtual Completion complete(const std::string& prompt) = 0;
    virtual std::string identity() const = 0;
};

/// Deterministic offline stand-in: parses the solution lines out of its own
/// prompt, ranks them by (CV, objective sum), and emits a blend of the top
/// two between <start>/<end> tags. Pure function of (prompt, seed); refuses
/// prompts that do not follow the canonical listing format.
std::string surrogate_complete(const std::string& prompt, std::uint64_t seed,
                               std::optional<double> alpha_override = std::nullopt);

class SurrogateBackend final : public LLMBackend {
public:
    explicit SurrogateBackend(std::uint64_t seed,
                              std::optional<double> fixed_alpha = std::nullopt)
        : seed_(seed), fixed_alpha_(fixed_alpha) {}
    Completion complete(const std::string& prompt) override {
        return surrogate_complete(prompt, seed_, fixed_alpha_);
    }
    std::string identity() const override;

private:
    std::uint64_t seed_;
    std::optional<double> fixed_alpha_;
};

/// Always answers with one configured decision vector. Used to drive the
/// integration pathway with a known-good solution.
class OracleBackend final : public LLMBackend {
public:
    explicit OracleBackend(std::vector<double> decs, int precision = 17);
    Completion complete(const std::string& prompt) override;
    std::string identity() const override;

private:
    std::string response_;
};

/// Answers from a recorded ledger: responses are replayed per prompt hash in
/// recording order, and an unmatched prompt raises ReplayMiss.
class ReplayBackend final : public LLMBackend {
public:
    explicit ReplayBackend(const std::string& ledger_path);
    ReplayBackend(std::vector<LLMExchange> exchanges, std::string label);
    Completion complete(const std::string& prompt) override;
    std::string identity() const override;

private:
    std::unordered_map<std::uint64_t, std::deque<std::string>> responses_;
    std::string label_;
};

struct HttpBackendOptions {
    std::string endpoint = "https://api.openai.com/v1";
    std::string model = "gpt-3.5-turbo";
    std::string api_key;
    double temperature = 1.0;
    int max_tokens = 256;
    double timeout_seconds = 30.0;
    int transport_retries = 2;
    double backoff_initial_seconds = 1.0;  // doubles per retry
};

/// JSON body for a chat-completions request. Exposed for tests.
std::string chat_request_body(const HttpBackendOptions& options,
                              const std::string& prompt);

/// Message content from a chat-completions response body, or TransportError.
std::string extract_chat_content(const std::string& response_body);

/// Full completion (content plus usage token counts when present).
Completion extract_chat_completion(const std::string& response_body);

/// Live OpenAI-compatible backend: POST {endpoint}/chat/completions with
/// bearer-token auth, retrying transport failures with exponential backoff.
class HttpBackend final : public LLMBackend {
public:
    explicit HttpBackend(HttpBackendOptions options);
    Completion complete(const std::string& prompt) override;
    std::string identity() const override;

private:
    HttpBackendOptions options_;
    std::string host_;  // scheme://host[:port]
    std::string path_;  // base path + /chat/completions
};

}  // namespace cmoforge::llm
