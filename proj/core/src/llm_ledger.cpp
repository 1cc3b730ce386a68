#include "cmoforge/llm/ledger.hpp"

#include <fstream>
#include <iostream>

#include <json.hpp>

#include "cmoforge/rng.hpp"

namespace cmoforge::llm {

namespace {

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

const char* to_string(ExchangeOutcome o) {
    switch (o) {
        case ExchangeOutcome::parsed: return "parsed";
        case ExchangeOutcome::repaired: return "repaired";
        case ExchangeOutcome::parse_failed: return "parse_failed";
        case ExchangeOutcome::transport_failed: return "transport_failed";
        case ExchangeOutcome::fallback_used: return "fallback_used";
    }
    return "parsed";
}

ExchangeOutcome outcome_from_string(const std::string& s) {
    if (s == "parsed") return ExchangeOutcome::parsed;
    if (s == "repaired") return ExchangeOutcome::repaired;
    if (s == "parse_failed") return ExchangeOutcome::parse_failed;
    if (s == "transport_failed") return ExchangeOutcome::transport_failed;
    if (s == "fallback_used") return ExchangeOutcome::fallback_used;
    throw ContractViolation("unknown exchange outcome: " + s);
}

std::uint64_t prompt_hash(std::string_view prompt) { return fnv1a64(prompt); }

std::string to_json_line(const LLMExchange& e) {
    nlohmann::json j{
        {"prompt_hash", hash_hex(e.prompt_hash)},
        {"prompt", e.prompt},
        {"response", e.response},
        {"outcome", to_string(e.outcome)},
        {"generation", e.generation},
        {"population", e.population},
        {"retry", e.retry_index},
        {"latency_ms", e.latency_ms},
        {"timestamp_ms", e.timestamp_ms},
        {"backend", e.backend_id},
    };
    if (e.parse_error) j["parse_error"] = to_string(*e.parse_error);
    if (e.prompt_tokens >= 0) j["prompt_tokens"] = e.prompt_tokens;
    if (e.completion_tokens >= 0) j["completion_tokens"] = e.completion_tokens;
    return j.dump();
}

std::optional<LLMExchange> exchange_from_json_line(const std::string& line) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!j.is_object()) return std::nullopt;
    try {
        LLMExchange e;
        e.prompt_hash =
            std::stoull(j.at("prompt_hash").get<std::string>(), nullptr, 16);
        e.prompt = j.at("prompt").get<std::string>();
        e.response = j.at("response").get<std::string>();
        e.outcome = outcome_from_string(j.at("outcome").get<std::string>());
        e.generation = j.at("generation").get<std::size_t>();
        e.population = j.at("population").get<std::string>();
        e.retry_index = j.value("retry", 0);
        e.latency_ms = j.value("latency_ms", 0.0);
        e.timestamp_ms = j.value("timestamp_ms", std::int64_t{0});
        e.backend_id = j.value("backend", std::string{});
        e.prompt_tokens = j.value("prompt_tokens", -1L);
        e.completion_tokens = j.value("completion_tokens", -1L);
        if (j.contains("parse_error")) {
            const std::string pe = j["parse_error"].get<std::string>();
            if (pe == "missing_tags") e.parse_error = ParseError::missing_tags;
            else if (pe == "wrong_count") e.parse_error = ParseError::wrong_count;
            else if (pe == "bad_token") e.parse_error = ParseError::bad_token;
            else if (pe == "non_finite") e.parse_error = ParseError::non_finite;
        }
        return e;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void ledger_append(std::ostream& out, const LLMExchange& exchange) {
    out << to_json_line(exchange) << '\n';
}

void write_ledger(const std::string& path, const std::vector<LLMExchange>& exchanges) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open ledger for writing: " + path);
    for (const auto& e : exchanges) ledger_append(out, e);
}

std::vector<LLMExchange> ledger_load(const std::string& path,
                                     std::size_t* corrupt_lines) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open ledger: " + path);
    std::vector<LLMExchange> exchanges;
    std::size_t corrupt = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto e = exchange_from_json_line(line);
        if (!e) {
            ++corrupt;
            std::cerr << "warning: skipping corrupt ledger line " << line_no << " in "
                      << path << '\n';
            continue;
        }
        exchanges.push_back(std::move(*e));
    }
    if (corrupt_lines) *corrupt_lines = corrupt;
    return exchanges;
}

}  // namespace cmoforge::llm
