#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cmoforge/engine.hpp"
#include "cmoforge/llm/backend.hpp"
#include "cmoforge/problems.hpp"

namespace cmoforge::exp {

struct ProblemSpec {
    tric::TricId id = tric::TricId::tric1;
    int n = 10;
};

struct AlgorithmSpec {
    std::string name;
    engine::EngineConfig engine;
};

enum class BackendKind { live, replay, surrogate, oracle };

struct BackendSpec {
    BackendKind kind = BackendKind::surrogate;
    std::string replay_path;            // ledger file or a previous runs root
    std::vector<double> oracle_vector;  // fixed response for the oracle backend
    llm::HttpBackendOptions http;       // live backend options
};

enum class MetricsCadence { every_generation, final_only };

struct ExperimentConfig {
    std::vector<ProblemSpec> problems;
    std::vector<AlgorithmSpec> algorithms;
    int runs = 10;
    std::uint64_t seed_base = 1;
    BackendSpec backend;
    std::string out_dir = "runs";
    MetricsCadence cadence = MetricsCadence::every_generation;
    int jobs = 0;  // 0 -> hardware concurrency
    int reference_points = 1000;
};

/// Reads the JSON experiment file (schema documented in the README).
ExperimentConfig load_config(const std::string& path);

/// Applies a CLI-style backend override: "live", "surrogate",
/// "replay:<path>", "oracle:<v1,v2,...>".
void apply_backend_string(ExperimentConfig& config, const std::string& text);

/// Per-run seed: derive(seed_base, problem, algorithm, run index).
std::uint64_t run_seed(const ExperimentConfig& config, const std::string& problem,
                       const std::string& algorithm, int run_index);

/// Executes problems x algorithms x runs and writes one directory per run
/// (manifest.json, population.csv, history.csv, ledger.jsonl). Configuration
/// errors throw before anything is written.
int cmd_run(const ExperimentConfig& config);

/// Aggregates a runs tree into IGD/HV results tables (marks against the
/// baseline algorithm) plus Friedman mean ranks, written to out_dir.
int cmd_compare(const std::string& runs_root, const std::string& baseline,
                const std::string& out_dir);

/// Writes front.csv (final feasible objectives) for one run directory, plus
/// front.svg with the analytic front overlay for bi-objective problems.
int cmd_front(const std::string& run_dir);

/// Catalog of the built-in problems: dimensions, constraint makeup,
/// parameters and a feasible witness point per problem.
std::string list_problems_text();

/// Re-runs a recorded run against its own ledger and byte-compares the
/// regenerated population and history CSVs with the stored ones.
int cmd_replay_verify(const std::string& run_dir);

// Artifact writers, exposed for tests and replay verification.
std::string population_csv(const Population& pop, int n, int m);
std::string history_csv(const std::vector<engine::GenerationRecord>& history);

}  // namespace cmoforge::exp
