#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cmoforge/llm/prompt.hpp"

namespace cmoforge::llm {

enum class ExchangeOutcome { parsed, repaired, parse_failed, transport_failed, fallback_used };

const char* to_string(ExchangeOutcome o);
ExchangeOutcome outcome_from_string(const std::string& s);

/// One prompt/response round trip, whatever its fate. Every backend call an
/// engine run issues appends exactly one of these to the run's ledger.
struct LLMExchange {
    std::string backend_id;
    std::uint64_t prompt_hash = 0;
    std::string prompt;
    std::string response;
    ExchangeOutcome outcome = ExchangeOutcome::parsed;
    std::optional<ParseError> parse_error;
    std::size_t generation = 0;
    std::string population;
    int retry_index = 0;
    double latency_ms = 0.0;
    std::int64_t timestamp_ms = 0;
    long prompt_tokens = -1;      // -1 when the backend reported none
    long completion_tokens = -1;
};

/// Content hash used to key replay lookups.
std::uint64_t prompt_hash(std::string_view prompt);

std::string to_json_line(const LLMExchange& exchange);

/// nullopt for lines that do not parse as a complete record.
std::optional<LLMExchange> exchange_from_json_line(const std::string& line);

void ledger_append(std::ostream& out, const LLMExchange& exchange);
void write_ledger(const std::string& path, const std::vector<LLMExchange>& exchanges);

/// Loads a JSONL ledger; corrupt lines are skipped, counted, and reported on
/// stderr.
std::vector<LLMExchange> ledger_load(const std::string& path,
                                     std::size_t* corrupt_lines = nullptr);

}  // namespace cmoforge::llm
