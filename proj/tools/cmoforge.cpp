// Command-line front end: experiment execution, result aggregation and
// run-artifact inspection for the cmoforge solver.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cmoforge/experiment.hpp"

namespace cf = cmoforge::exp;

int main(int argc, char** argv) {
    CLI::App app{"cmoforge - constrained multiobjective optimization with an "
                 "LLM-assisted offspring operator"};
    app.require_subcommand(1);

    // run
    std::string config_path;
    std::string out_dir_override;
    std::string backend_override;
    int seeds_override = 0;
    int jobs_override = -1;
    std::string fe_accounting_override;
    auto* run = app.add_subcommand("run", "Execute an experiment from a config file");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_dir_override, "Output directory (overrides config)");
    run->add_option("--backend", backend_override,
                    "Backend: live | surrogate | replay:<path> | oracle:<v1,v2,...>");
    run->add_option("--seeds", seeds_override, "Runs per problem/algorithm pair");
    run->add_option("--jobs", jobs_override, "Parallel runs (0 = all cores)");
    run->add_option("--fe-accounting", fe_accounting_override,
                    "per_eval | per_generation_n (overrides config)");

    // compare
    std::string runs_root;
    std::string baseline;
    std::string compare_out;
    auto* compare = app.add_subcommand("compare", "Aggregate runs into result tables");
    compare->add_option("--runs", runs_root, "Runs directory produced by 'run'")
        ->required();
    compare->add_option("--baseline", baseline, "Baseline algorithm for marks")
        ->required();
    compare->add_option("--out", compare_out, "Output directory for tables")->required();

    // front
    std::string front_dir;
    auto* front = app.add_subcommand("front", "Export final front CSV/SVG for one run");
    front->add_option("--run", front_dir, "Run directory")->required();

    // list-problems
    app.add_subcommand("list-problems", "Describe the built-in benchmark problems");

    // replay-verify
    std::string verify_dir;
    auto* verify = app.add_subcommand(
        "replay-verify", "Re-run a recorded run from its ledger and compare artifacts");
    verify->add_option("--run", verify_dir, "Run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            cf::ExperimentConfig config = cf::load_config(config_path);
            if (!out_dir_override.empty()) config.out_dir = out_dir_override;
            if (!backend_override.empty())
                cf::apply_backend_string(config, backend_override);
            if (seeds_override > 0) config.runs = seeds_override;
            if (jobs_override >= 0) config.jobs = jobs_override;
            if (!fe_accounting_override.empty()) {
                using cmoforge::engine::FeAccounting;
                FeAccounting mode;
                if (fe_accounting_override == "per_eval")
                    mode = FeAccounting::per_eval;
                else if (fe_accounting_override == "per_generation_n")
                    mode = FeAccounting::per_generation_n;
                else
                    throw std::runtime_error("unknown --fe-accounting mode: " +
                                             fe_accounting_override);
                for (auto& algo : config.algorithms) algo.engine.fe_accounting = mode;
            }
            return cf::cmd_run(config);
        }
        if (compare->parsed()) return cf::cmd_compare(runs_root, baseline, compare_out);
        if (front->parsed()) return cf::cmd_front(front_dir);
        if (app.get_subcommand("list-problems")->parsed()) {
            std::cout << cf::list_problems_text();
            return 0;
        }
        if (verify->parsed()) return cf::cmd_replay_verify(verify_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
