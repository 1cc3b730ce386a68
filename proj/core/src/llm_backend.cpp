#include "cmoforge/llm/backend.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "cmoforge/rng.hpp"

namespace cmoforge::llm {

namespace {

struct PromptedSolution {
    std::vector<double> decs;
    std::vector<double> objs;
    double cv = 0.0;
};

std::vector<double> parse_bracket_list(const std::string& line, const std::string& key,
                                       std::size_t from, std::size_t* after) {
    const std::size_t k = line.find(key + ": [", from);
    if (k == std::string::npos) throw TransportError("surrogate: missing '" + key + ":' field");
    const std::size_t open = k + key.size() + 3;
    const std::size_t close = line.find(']', open);
    if (close == std::string::npos) throw TransportError("surrogate: unterminated list");
    std::vector<double> values;
    std::string token;
    for (std::size_t i = open; i <= close; ++i) {
        const char c = i < close ? line[i] : ',';
        if (c == ',' || c == ' ') {
            if (!token.empty()) {
                char* end = nullptr;
                const double v = std::strtod(token.c_str(), &end);
                if (end != token.c_str() + token.size())
                    throw TransportError("surrogate: bad number in prompt");
                values.push_back(v);
                token.clear();
            }
        } else {
            token += c;
        }
    }
    if (after) *after = close;
    return values;
}

std::vector<PromptedSolution> parse_prompt_solutions(const std::string& prompt) {
    std::vector<PromptedSolution> solutions;
    std::size_t pos = 0;
    while (true) {
        const std::size_t line_start = prompt.find("decs: [", pos);
        if (line_start == std::string::npos) break;
        const std::size_t line_end = prompt.find('\n', line_start);
        const std::string line = prompt.substr(
            line_start, line_end == std::string::npos ? std::string::npos
                                                      : line_end - line_start);
        PromptedSolution s;
        std::size_t after = 0;
        s.decs = parse_bracket_list(line, "decs", 0, &after);
        s.objs = parse_bracket_list(line, "objs", after, &after);
        const std::size_t cv_at = line.find("CV: ", after);
        if (cv_at == std::string::npos)
            throw TransportError("surrogate: missing 'CV:' field");
        char* end = nullptr;
        s.cv = std::strtod(line.c_str() + cv_at + 4, &end);
        if (end == line.c_str() + cv_at + 4)
            throw TransportError("surrogate: bad CV value");
        solutions.push_back(std::move(s));
        pos = line_start + 7;
    }
    if (solutions.size() < 2)
        throw TransportError("surrogate: prompt lists fewer than two solutions");
    return solutions;
}

}  // namespace

std::string surrogate_complete(const std::string& prompt, std::uint64_t seed,
                               std::optional<double> alpha_override) {
    auto solutions = parse_prompt_solutions(prompt);
    std::vector<std::size_t> order(solutions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (solutions[a].cv != solutions[b].cv) return solutions[a].cv < solutions[b].cv;
        const double sa = std::accumulate(solutions[a].objs.begin(),
                                          solutions[a].objs.end(), 0.0);
        const double sb = std::accumulate(solutions[b].objs.begin(),
                                          solutions[b].objs.end(), 0.0);
        return sa < sb;
    });

    double alpha;
    if (alpha_override) {
        alpha = *alpha_override;
    } else {
        std::uint64_t state = seed ^ prompt_hash(prompt);
        alpha = 0.4 + 0.2 * (static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53);
    }
    const auto& best = solutions[order[0]].decs;
    const auto& second = solutions[order[1]].decs;
    if (best.size() != second.size())
        throw TransportError("surrogate: inconsistent decision lengths in prompt");

    std::string out = "<start>";
    for (std::size_t i = 0; i < best.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_number(alpha * best[i] + (1.0 - alpha) * second[i], 6);
    }
    out += "<end>";
    return out;
}

std::string SurrogateBackend::identity() const {
    return "surrogate:" + std::to_string(seed_) +
           (fixed_alpha_ ? ":alpha=" + format_number(*fixed_alpha_, 6) : "");
}

OracleBackend::OracleBackend(std::vector<double> decs, int precision) {
    response_ = "<start>";
    for (std::size_t i = 0; i < decs.size(); ++i) {
        if (i > 0) response_ += ", ";
        response_ += format_number(decs[i], precision);
    }
    response_ += "<end>";
}

Completion OracleBackend::complete(const std::string&) { return response_; }

std::string OracleBackend::identity() const { return "oracle:" + response_; }

ReplayBackend::ReplayBackend(const std::string& ledger_path) : label_(ledger_path) {
    for (auto& e : ledger_load(ledger_path))
        responses_[e.prompt_hash].push_back(std::move(e.response));
}

ReplayBackend::ReplayBackend(std::vector<LLMExchange> exchanges, std::string label)
    : label_(std::move(label)) {
    for (auto& e : exchanges) responses_[e.prompt_hash].push_back(std::move(e.response));
}

Completion ReplayBackend::complete(const std::string& prompt) {
    const std::uint64_t h = prompt_hash(prompt);
    auto it = responses_.find(h);
    if (it == responses_.end() || it->second.empty())
        throw ReplayMiss("no recorded response for prompt (hash " + std::to_string(h) +
                         ") in " + label_);
    std::string response = std::move(it->second.front());
    it->second.pop_front();
    return response;
}

std::string ReplayBackend::identity() const { return "replay:" + label_; }

std::string chat_request_body(const HttpBackendOptions& options,
                              const std::string& prompt) {
    nlohmann::json body{
        {"model", options.model},
        {"messages", nlohmann::json::array({nlohmann::json{
                         {"role", "user"}, {"content", prompt}}})},
        {"temperature", options.temperature},
        {"max_tokens", options.max_tokens},
    };
    return body.dump();
}

std::string extract_chat_content(const std::string& response_body) {
    return extract_chat_completion(response_body).text;
}

Completion extract_chat_completion(const std::string& response_body) {
    nlohmann::json j = nlohmann::json::parse(response_body, nullptr, false);
    if (!j.is_object()) throw TransportError("chat response is not a JSON object");
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
        throw TransportError("chat response has no choices");
    const auto& choice = j["choices"][0];
    if (!choice.contains("message") || !choice["message"].contains("content") ||
        !choice["message"]["content"].is_string())
        throw TransportError("chat response has no message content");
    Completion completion(choice["message"]["content"].get<std::string>());
    if (j.contains("usage") && j["usage"].is_object()) {
        const auto& usage = j["usage"];
        if (usage.contains("prompt_tokens") && usage["prompt_tokens"].is_number())
            completion.prompt_tokens = usage["prompt_tokens"].get<long>();
        if (usage.contains("completion_tokens") && usage["completion_tokens"].is_number())
            completion.completion_tokens = usage["completion_tokens"].get<long>();
    }
    return completion;
}

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
    const std::string& url = options_.endpoint;
    const std::size_t scheme = url.find("://");
    const std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
    const std::size_t slash = url.find('/', host_start);
    if (slash == std::string::npos) {
        host_ = url;
        path_ = "/chat/completions";
    } else {
        host_ = url.substr(0, slash);
        std::string base = url.substr(slash);
        while (!base.empty() && base.back() == '/') base.pop_back();
        path_ = base + "/chat/completions";
    }
}

Completion HttpBackend::complete(const std::string& prompt) {
    const std::string body = chat_request_body(options_, prompt);
    std::string last_error;
    for (int attempt = 0; attempt <= options_.transport_retries; ++attempt) {
        if (attempt > 0) {
            const double seconds =
                options_.backoff_initial_seconds * std::pow(2.0, attempt - 1);
            std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
        }
        httplib::Client client(host_);
        client.set_connection_timeout(std::chrono::duration<double>(options_.timeout_seconds));
        client.set_read_timeout(std::chrono::duration<double>(options_.timeout_seconds));
        httplib::Headers headers{{"Authorization", "Bearer " + options_.api_key}};
        auto res = client.Post(path_, headers, body, "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) return extract_chat_completion(res->body);
        last_error = "HTTP " + std::to_string(res->status);
        // Retry throttling and server errors; anything else is fatal.
        if (res->status != 429 && res->status < 500) break;
    }
    throw TransportError("chat completion failed: " + last_error);
}

std::string HttpBackend::identity() const {
    return "live:" + options_.endpoint + ":" + options_.model;
}

}  // namespace cmoforge::llm
