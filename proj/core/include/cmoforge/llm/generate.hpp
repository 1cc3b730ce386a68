#pragma once

#include <random>
#include <vector>

#include "cmoforge/core.hpp"
#include "cmoforge/llm/backend.hpp"
#include "cmoforge/llm/ledger.hpp"
#include "cmoforge/llm/prompt.hpp"
#include "cmoforge/operators.hpp"

namespace cmoforge::llm {

struct GenerateOptions {
    int retry_limit = 2;  // extra attempts after the first failure
    int precision = 6;    // significant digits in the prompt
    int batch_size = 1;   // offspring requested per backend call
    ga::OperatorParams fallback_operators;
};

struct LlmOffspring {
    std::vector<double> decs;
    Provenance provenance = Provenance::llm;
};

/// Produces exactly `count` in-bounds decision vectors from the pool through
/// the backend, whatever the backend does: parse failures retry with the same
/// prompt up to the retry limit, and exhausted retries fall back to an SBX
/// blend of two uniformly drawn pool members. Every backend call appends one
/// exchange to the ledger. Replay misses propagate; they mean the recording
/// no longer matches the run.
std::vector<LlmOffspring> llm_generate(const std::vector<Solution>& pool,
                                       std::size_t count, LLMBackend& backend,
                                       const GenerateOptions& options,
                                       const PromptMeta& meta, int n,
                                       const std::vector<double>& lower,
                                       const std::vector<double>& upper,
                                       std::mt19937_64& rng,
                                       std::vector<LLMExchange>& ledger);

}  // namespace cmoforge::llm
