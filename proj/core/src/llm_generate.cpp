#include "cmoforge/llm/generate.hpp"

#include <chrono>

#include "cmoforge/rng.hpp"

namespace cmoforge::llm {

namespace {

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

LlmOffspring fallback_offspring(const std::vector<Solution>& pool,
                                const GenerateOptions& options,
                                const std::vector<double>& lower,
                                const std::vector<double>& upper,
                                std::mt19937_64& rng) {
    const std::size_t a = uniform_index(rng, pool.size());
    std::size_t b = uniform_index(rng, pool.size() - 1);
    if (b >= a) ++b;
    auto [c1, c2] = ga::sbx_crossover(pool[a].decs, pool[b].decs,
                                      options.fallback_operators, lower, upper, rng);
    (void)c2;
    return {std::move(c1), Provenance::fallback};
}

}  // namespace

std::vector<LlmOffspring> llm_generate(const std::vector<Solution>& pool,
                                       std::size_t count, LLMBackend& backend,
                                       const GenerateOptions& options,
                                       const PromptMeta& meta, int n,
                                       const std::vector<double>& lower,
                                       const std::vector<double>& upper,
                                       std::mt19937_64& rng,
                                       std::vector<LLMExchange>& ledger) {
    if (pool.size() < 2) throw ContractViolation("llm_generate: pool needs >= 2 members");
    if (count < 1) throw ContractViolation("llm_generate: count must be >= 1");

    std::vector<Solution> feasible;
    std::vector<Solution> infeasible;
    for (const auto& s : pool) (s.feasible() ? feasible : infeasible).push_back(s);

    std::vector<LlmOffspring> offspring;
    offspring.reserve(count);

    // The pool is fixed for this call, so the prompt is rebuilt only when the
    // requested batch size changes (the final batch can be smaller).
    int bundle_batch = -1;
    PromptBundle bundle;
    const auto ensure_bundle = [&](int batch) {
        if (bundle_batch == batch) return;
        bundle = build_prompt(feasible, infeasible, n, lower, upper, options.precision,
                              meta, batch);
        bundle_batch = batch;
    };

    while (offspring.size() < count) {
        const int want = std::min<std::size_t>(
            static_cast<std::size_t>(std::max(options.batch_size, 1)),
            count - offspring.size());
        ensure_bundle(want);

        std::size_t produced_this_call = 0;
        for (int attempt = 0; attempt <= options.retry_limit; ++attempt) {
            LLMExchange exchange;
            exchange.backend_id = backend.identity();
            exchange.prompt = bundle.rendered;
            exchange.prompt_hash = prompt_hash(bundle.rendered);
            exchange.generation = bundle.meta.generation;
            exchange.population = bundle.meta.population;
            exchange.retry_index = attempt;
            exchange.timestamp_ms = now_ms();
            const bool last_attempt = attempt == options.retry_limit;

            const auto t0 = std::chrono::steady_clock::now();
            Completion completion;
            bool transport_ok = true;
            try {
                completion = backend.complete(bundle.rendered);
            } catch (const ReplayMiss& miss) {
                throw ReplayMiss(std::string(miss.what()) + " (generation " +
                                 std::to_string(exchange.generation) + ", " +
                                 exchange.population + ")");
            } catch (const std::exception&) {
                transport_ok = false;
            }
            exchange.latency_ms =
                std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();

            if (!transport_ok) {
                exchange.outcome = last_attempt ? ExchangeOutcome::fallback_used
                                                : ExchangeOutcome::transport_failed;
                ledger.push_back(std::move(exchange));
                continue;
            }
            exchange.response = completion.text;
            exchange.prompt_tokens = completion.prompt_tokens;
            exchange.completion_tokens = completion.completion_tokens;

            if (want == 1) {
                const ParseResult parsed =
                    parse_response(completion.text, n, lower, upper);
                if (parsed.ok) {
                    exchange.outcome = parsed.repaired ? ExchangeOutcome::repaired
                                                       : ExchangeOutcome::parsed;
                    ledger.push_back(std::move(exchange));
                    offspring.push_back({parsed.decs, Provenance::llm});
                    produced_this_call = 1;
                    break;
                }
                exchange.outcome = last_attempt ? ExchangeOutcome::fallback_used
                                                : ExchangeOutcome::parse_failed;
                exchange.parse_error = parsed.error;
                ledger.push_back(std::move(exchange));
            } else {
                const auto blocks =
                    parse_response_blocks(completion.text, n, lower, upper, want);
                std::size_t ok = 0;
                bool any_repaired = false;
                for (const auto& block : blocks) {
                    if (!block.ok) continue;
                    ++ok;
                    if (produced_this_call < static_cast<std::size_t>(want)) {
                        offspring.push_back({block.decs, Provenance::llm});
                        ++produced_this_call;
                        any_repaired |= block.repaired;
                    }
                }
                if (produced_this_call == static_cast<std::size_t>(want)) {
                    exchange.outcome = any_repaired ? ExchangeOutcome::repaired
                                                    : ExchangeOutcome::parsed;
                    ledger.push_back(std::move(exchange));
                    break;
                }
                exchange.outcome = last_attempt ? ExchangeOutcome::fallback_used
                                                : ExchangeOutcome::parse_failed;
                if (ok == 0)
                    exchange.parse_error = blocks.empty() ? ParseError::missing_tags
                                                          : blocks.front().error;
                ledger.push_back(std::move(exchange));
            }
        }

        // Anything the retries did not deliver comes from the GA fallback.
        for (std::size_t i = produced_this_call; i < static_cast<std::size_t>(want); ++i)
            offspring.push_back(fallback_offspring(pool, options, lower, upper, rng));
    }
    return offspring;
}

}  // namespace cmoforge::llm
