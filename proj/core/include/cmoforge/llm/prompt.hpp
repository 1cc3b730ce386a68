#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cmoforge/core.hpp"

namespace cmoforge::llm {

/// Bumped whenever the rendered template wording changes, so stale replay
/// ledgers fail loudly instead of silently mismatching.
inline constexpr int kPromptVersion = 1;

struct PromptMeta {
    std::string problem;
    std::size_t generation = 0;
    std::string population;
};

struct PromptSections {
    std::string task_description;
    std::string input_information;
    std::string operational_steps;
    std::string output_format;
};

struct PromptBundle {
    PromptSections sections;
    std::string rendered;
    PromptMeta meta;
    std::uint64_t pool_digest = 0;
};

/// "%.{precision}g" rendering used for every number in a prompt.
std::string format_number(double v, int precision);

/// Renders the canonical four-part instruction: task description, the
/// feasible/infeasible solution listing (the literal line "none" for an empty
/// list), the generation step, and the <start>/<end> output contract.
/// `batch` > 1 asks for that many new solutions, each in its own tag pair.
/// Pure function of its inputs; equal inputs give byte-identical text.
PromptBundle build_prompt(const std::vector<Solution>& feasible,
                          const std::vector<Solution>& infeasible, int n,
                          const std::vector<double>& lower,
                          const std::vector<double>& upper, int precision,
                          PromptMeta meta, int batch = 1);

enum class ParseError { missing_tags, wrong_count, bad_token, non_finite };

const char* to_string(ParseError e);

struct ParseResult {
    bool ok = false;
    bool repaired = false;  // out-of-bounds values were clamped
    std::vector<double> decs;
    ParseError error = ParseError::missing_tags;
};

/// Extracts the text between the first "<start>" and the following "<end>",
/// splits it on commas/whitespace and parses exactly n finite reals.
/// Out-of-bounds values clamp to the nearest bound and flag the result
/// repaired.
ParseResult parse_response(std::string_view text, int n,
                           const std::vector<double>& lower,
                           const std::vector<double>& upper);

/// Successive <start>/<end> blocks parsed independently (batch responses).
/// Stops after max_blocks blocks or when no further tag pair exists.
std::vector<ParseResult> parse_response_blocks(std::string_view text, int n,
                                               const std::vector<double>& lower,
                                               const std::vector<double>& upper,
                                               int max_blocks);

}  // namespace cmoforge::llm
