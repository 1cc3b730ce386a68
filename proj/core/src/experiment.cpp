#include "cmoforge/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cmoforge/metrics.hpp"
#include "cmoforge/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace cmoforge::exp {

namespace {

std::string fmt17(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string checksum_hex(const std::string& content) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(content)));
    return buf;
}

json engine_to_json(const engine::EngineConfig& c) {
    json ops{{"pc", c.operators.pc}, {"eta_c", c.operators.eta_c},
             {"eta_m", c.operators.eta_m}};
    if (c.operators.pm) ops["pm"] = *c.operators.pm;
    else ops["pm"] = nullptr;
    return json{
        {"population_size", c.population_size},
        {"fe_max", c.fe_max},
        {"llm_offspring_fraction", c.llm_offspring_fraction},
        {"llm_input_fraction", c.llm_input_fraction},
        {"operators", ops},
        {"seed", c.seed},
        {"fe_accounting",
         c.fe_accounting == engine::FeAccounting::per_eval ? "per_eval"
                                                           : "per_generation_n"},
        {"llm_retry_limit", c.llm_retry_limit},
        {"prompt_precision", c.prompt_precision},
        {"llm_batch_size", c.llm_batch_size},
    };
}

void engine_from_json(const json& j, engine::EngineConfig& c) {
    if (j.contains("population_size")) c.population_size = j["population_size"];
    if (j.contains("fe_max")) c.fe_max = j["fe_max"];
    if (j.contains("llm_offspring_fraction"))
        c.llm_offspring_fraction = j["llm_offspring_fraction"];
    if (j.contains("llm_input_fraction")) c.llm_input_fraction = j["llm_input_fraction"];
    if (j.contains("operators")) {
        const auto& ops = j["operators"];
        if (ops.contains("pc")) c.operators.pc = ops["pc"];
        if (ops.contains("eta_c")) c.operators.eta_c = ops["eta_c"];
        if (ops.contains("eta_m")) c.operators.eta_m = ops["eta_m"];
        if (ops.contains("pm") && !ops["pm"].is_null())
            c.operators.pm = ops["pm"].get<double>();
    }
    if (j.contains("seed")) c.seed = j["seed"];
    if (j.contains("fe_accounting")) {
        const std::string mode = j["fe_accounting"];
        if (mode == "per_eval") c.fe_accounting = engine::FeAccounting::per_eval;
        else if (mode == "per_generation_n")
            c.fe_accounting = engine::FeAccounting::per_generation_n;
        else throw std::runtime_error("unknown fe_accounting mode: " + mode);
    }
    if (j.contains("llm_retry_limit")) c.llm_retry_limit = j["llm_retry_limit"];
    if (j.contains("prompt_precision")) c.prompt_precision = j["prompt_precision"];
    if (j.contains("llm_batch_size")) c.llm_batch_size = j["llm_batch_size"];
}

std::string run_dir_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "run_%03d", index);
    return buf;
}

std::unique_ptr<llm::LLMBackend> make_backend(const ExperimentConfig& config,
                                              const ProblemSpec& problem,
                                              const std::string& algorithm,
                                              int run_index, std::uint64_t seed) {
    switch (config.backend.kind) {
        case BackendKind::surrogate:
            return std::make_unique<llm::SurrogateBackend>(
                RandomSource::derive(seed, "surrogate-backend", algorithm, 0));
        case BackendKind::oracle:
            return std::make_unique<llm::OracleBackend>(config.backend.oracle_vector);
        case BackendKind::replay: {
            fs::path path = config.backend.replay_path;
            if (fs::is_directory(path))
                path = path / tric::to_string(problem.id) / algorithm /
                       run_dir_name(run_index) / "ledger.jsonl";
            return std::make_unique<llm::ReplayBackend>(path.string());
        }
        case BackendKind::live: {
            llm::HttpBackendOptions options = config.backend.http;
            if (const char* key = std::getenv("CMOFORGE_API_KEY")) options.api_key = key;
            if (const char* endpoint = std::getenv("CMOFORGE_ENDPOINT"))
                options.endpoint = endpoint;
            if (options.api_key.empty())
                throw std::runtime_error(
                    "live backend requires CMOFORGE_API_KEY in the environment");
            return std::make_unique<llm::HttpBackend>(std::move(options));
        }
    }
    throw std::runtime_error("unknown backend kind");
}

struct RunTask {
    std::size_t problem_index;
    std::size_t algorithm_index;
    int run_index;
};

}  // namespace

std::string population_csv(const Population& pop, int n, int m) {
    std::ostringstream out;
    for (int i = 1; i <= n; ++i) out << "dec_" << i << ',';
    for (int i = 1; i <= m; ++i) out << "obj_" << i << ',';
    out << "cv,provenance\n";
    for (const auto& s : pop.members) {
        for (double v : s.decs) out << fmt17(v) << ',';
        for (double v : s.objs) out << fmt17(v) << ',';
        out << fmt17(s.cv) << ',' << to_string(s.provenance) << '\n';
    }
    return out.str();
}

std::string history_csv(const std::vector<engine::GenerationRecord>& history) {
    std::ostringstream out;
    out << "generation,fe,feasible_count,best_cv,igd,hv\n";
    for (const auto& rec : history) {
        out << rec.generation << ',' << rec.fe << ',' << rec.feasible_count << ','
            << fmt17(rec.best_cv) << ','
            << (rec.igd_value ? fmt17(*rec.igd_value) : "NaN") << ','
            << (rec.hv_value ? fmt17(*rec.hv_value) : "NaN") << '\n';
    }
    return out.str();
}

ExperimentConfig load_config(const std::string& path) {
    json j = json::parse(read_file(path));
    ExperimentConfig config;
    if (j.contains("out_dir")) config.out_dir = j["out_dir"];
    if (j.contains("runs")) config.runs = j["runs"];
    if (j.contains("seed_base")) config.seed_base = j["seed_base"];
    if (j.contains("jobs")) config.jobs = j["jobs"];
    if (j.contains("reference_points")) config.reference_points = j["reference_points"];
    if (j.contains("metrics_cadence")) {
        const std::string c = j["metrics_cadence"];
        if (c == "every_generation") config.cadence = MetricsCadence::every_generation;
        else if (c == "final_only") config.cadence = MetricsCadence::final_only;
        else throw std::runtime_error("unknown metrics_cadence: " + c);
    }

    engine::EngineConfig defaults;
    if (j.contains("engine_defaults")) engine_from_json(j["engine_defaults"], defaults);

    if (!j.contains("problems") || !j["problems"].is_array() || j["problems"].empty())
        throw std::runtime_error("config needs a non-empty 'problems' array");
    for (const auto& p : j["problems"]) {
        ProblemSpec spec;
        spec.id = tric::parse_tric_id(p.at("id").get<std::string>());
        spec.n = p.value("n", tric::default_dimension(spec.id));
        config.problems.push_back(spec);
    }

    if (!j.contains("algorithms") || !j["algorithms"].is_array() ||
        j["algorithms"].empty())
        throw std::runtime_error("config needs a non-empty 'algorithms' array");
    for (const auto& a : j["algorithms"]) {
        AlgorithmSpec spec;
        spec.name = a.at("name").get<std::string>();
        spec.engine = defaults;
        engine_from_json(a, spec.engine);
        config.algorithms.push_back(std::move(spec));
    }

    if (j.contains("live")) {
        const auto& live = j["live"];
        auto& http = config.backend.http;
        if (live.contains("model")) http.model = live["model"];
        if (live.contains("endpoint")) http.endpoint = live["endpoint"];
        if (live.contains("temperature")) http.temperature = live["temperature"];
        if (live.contains("max_tokens")) http.max_tokens = live["max_tokens"];
        if (live.contains("timeout_seconds")) http.timeout_seconds = live["timeout_seconds"];
        if (live.contains("transport_retries"))
            http.transport_retries = live["transport_retries"];
    }
    if (j.contains("oracle_vector"))
        config.backend.oracle_vector = j["oracle_vector"].get<std::vector<double>>();
    if (j.contains("backend")) apply_backend_string(config, j["backend"]);
    return config;
}

void apply_backend_string(ExperimentConfig& config, const std::string& text) {
    if (text == "live") {
        config.backend.kind = BackendKind::live;
    } else if (text == "surrogate") {
        config.backend.kind = BackendKind::surrogate;
    } else if (text.rfind("replay:", 0) == 0) {
        config.backend.kind = BackendKind::replay;
        config.backend.replay_path = text.substr(7);
    } else if (text == "oracle") {
        config.backend.kind = BackendKind::oracle;
    } else if (text.rfind("oracle:", 0) == 0) {
        config.backend.kind = BackendKind::oracle;
        config.backend.oracle_vector.clear();
        std::string token;
        for (char c : text.substr(7)) {
            if (c == ',') {
                if (!token.empty()) config.backend.oracle_vector.push_back(std::stod(token));
                token.clear();
            } else {
                token += c;
            }
        }
        if (!token.empty()) config.backend.oracle_vector.push_back(std::stod(token));
    } else {
        throw std::runtime_error("unknown backend: " + text);
    }
}

std::uint64_t run_seed(const ExperimentConfig& config, const std::string& problem,
                       const std::string& algorithm, int run_index) {
    return RandomSource::derive(config.seed_base, problem, algorithm,
                                static_cast<std::uint64_t>(run_index));
}

namespace {

void execute_run(const ExperimentConfig& config, const ProblemSpec& pspec,
                 const AlgorithmSpec& aspec, int run_index,
                 const std::vector<std::vector<double>>& reference_front) {
    const ProblemDefinition problem = tric::make_problem(pspec.id, pspec.n);
    engine::EngineConfig econf = aspec.engine;
    econf.seed = run_seed(config, problem.name, aspec.name, run_index);

    auto backend = make_backend(config, pspec, aspec.name, run_index, econf.seed);

    engine::MetricContext metric_ctx{reference_front, 1.1};
    const engine::MetricContext* ctx =
        config.cadence == MetricsCadence::every_generation ? &metric_ctx : nullptr;

    const std::int64_t started = now_ms();
    const engine::RunResult result = engine::run(problem, econf, *backend, ctx);
    const std::int64_t finished = now_ms();

    const fs::path dir = fs::path(config.out_dir) / problem.name / aspec.name /
                         run_dir_name(run_index);
    fs::create_directories(dir);

    const std::string pop_csv = population_csv(result.pop1, problem.n, problem.m);
    const std::string hist_csv = history_csv(result.history);
    std::string ledger;
    for (const auto& e : result.exchanges) ledger += llm::to_json_line(e) + "\n";

    write_file(dir / "population.csv", pop_csv);
    write_file(dir / "history.csv", hist_csv);
    write_file(dir / "ledger.jsonl", ledger);

    const auto report =
        metrics::compute_report(result.pop1.members, reference_front, 1.1);

    json manifest{
        {"schema", "cmoforge-run-manifest"},
        {"version", 1},
        {"prompt_version", llm::kPromptVersion},
        {"problem",
         {{"id", problem.name},
          {"n", problem.n},
          {"m", problem.m},
          {"q", problem.q},
          {"l", problem.l},
          {"delta", problem.delta}}},
        {"algorithm", aspec.name},
        {"run_index", run_index},
        {"seed", econf.seed},
        {"backend", backend->identity()},
        {"engine", engine_to_json(econf)},
        {"metrics_cadence", config.cadence == MetricsCadence::every_generation
                                ? "every_generation"
                                : "final_only"},
        {"reference_points", config.reference_points},
        {"evaluations", result.evaluations},
        {"accounted_fe", result.accounted_fe},
        {"generations", result.generations},
        {"final",
         {{"igd", std::isnan(report.igd) ? json(nullptr) : json(report.igd)},
          {"hv", std::isnan(report.hv) ? json(nullptr) : json(report.hv)},
          {"feasible_count", report.feasible_count}}},
        {"timestamps", {{"started_ms", started}, {"finished_ms", finished}}},
        {"checksums",
         {{"population.csv", checksum_hex(pop_csv)},
          {"history.csv", checksum_hex(hist_csv)},
          {"ledger.jsonl", checksum_hex(ledger)}}},
    };
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

int cmd_run(const ExperimentConfig& config) {
    if (config.problems.empty()) throw std::runtime_error("no problems configured");
    if (config.algorithms.empty()) throw std::runtime_error("no algorithms configured");
    if (config.runs < 1) throw std::runtime_error("runs must be >= 1");

    // Validate everything up front: configuration errors must fire before any
    // directory is created.
    for (const auto& a : config.algorithms) {
        engine::EngineConfig probe = a.engine;
        probe.validate();
    }
    std::map<std::string, std::vector<std::vector<double>>> fronts;
    for (const auto& p : config.problems) {
        const ProblemDefinition problem = tric::make_problem(p.id, p.n);
        fronts[problem.name] = tric::sample_cpf(problem, config.reference_points);
        if (config.backend.kind == BackendKind::oracle &&
            config.backend.oracle_vector.size() != static_cast<std::size_t>(problem.n))
            throw std::runtime_error("oracle vector length does not match " +
                                     problem.name);
    }
    if (config.backend.kind == BackendKind::live) {
        const char* key = std::getenv("CMOFORGE_API_KEY");
        if (key == nullptr || std::string(key).empty())
            throw std::runtime_error(
                "live backend requires CMOFORGE_API_KEY in the environment");
    }
    if (config.backend.kind == BackendKind::replay &&
        !fs::exists(config.backend.replay_path))
        throw std::runtime_error("replay source does not exist: " +
                                 config.backend.replay_path);

    std::vector<RunTask> tasks;
    for (std::size_t p = 0; p < config.problems.size(); ++p)
        for (std::size_t a = 0; a < config.algorithms.size(); ++a)
            for (int r = 0; r < config.runs; ++r) tasks.push_back({p, a, r});

    const auto run_task = [&](const RunTask& task) {
        const auto& pspec = config.problems[task.problem_index];
        const auto& aspec = config.algorithms[task.algorithm_index];
        execute_run(config, pspec, aspec, task.run_index,
                    fronts.at(tric::to_string(pspec.id)));
    };

    unsigned jobs = config.jobs > 0 ? static_cast<unsigned>(config.jobs)
                                    : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size()));

    if (jobs <= 1) {
        for (const auto& task : tasks) run_task(task);
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> abort{false};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                while (!abort.load()) {
                    const std::size_t t = next.fetch_add(1);
                    if (t >= tasks.size()) return;
                    try {
                        run_task(tasks[t]);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        abort.store(true);
                        return;
                    }
                }
            });
        }
        for (auto& w : workers) w.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    return 0;
}

namespace {

struct RunsTree {
    std::vector<std::string> problems;
    std::vector<std::string> algorithms;
    int runs = 0;
    // finals[problem][algorithm] -> per-run metric values
    std::map<std::string, std::map<std::string, std::vector<double>>> igd;
    std::map<std::string, std::map<std::string, std::vector<double>>> hv;
};

RunsTree discover_runs(const std::string& runs_root) {
    RunsTree tree;
    if (!fs::is_directory(runs_root))
        throw std::runtime_error("runs root is not a directory: " + runs_root);

    std::set<std::string> problem_names;
    std::map<std::string, std::set<std::string>> algos_per_problem;
    for (const auto& pdir : fs::directory_iterator(runs_root)) {
        if (!pdir.is_directory()) continue;
        const std::string pname = pdir.path().filename().string();
        problem_names.insert(pname);
        for (const auto& adir : fs::directory_iterator(pdir.path())) {
            if (!adir.is_directory()) continue;
            algos_per_problem[pname].insert(adir.path().filename().string());
        }
    }
    if (problem_names.empty()) throw std::runtime_error("no runs found in " + runs_root);

    std::set<std::string> algorithms = algos_per_problem.begin()->second;
    for (const auto& [pname, algos] : algos_per_problem) {
        for (const auto& a : algorithms)
            if (!algos.count(a))
                throw std::runtime_error("algorithm '" + a + "' has no runs for " + pname);
        for (const auto& a : algos)
            if (!algorithms.count(a))
                throw std::runtime_error("algorithm '" + a + "' has no runs for " +
                                         *problem_names.begin());
    }

    tree.problems.assign(problem_names.begin(), problem_names.end());
    tree.algorithms.assign(algorithms.begin(), algorithms.end());

    int expected_runs = -1;
    for (const auto& pname : tree.problems) {
        for (const auto& aname : tree.algorithms) {
            std::vector<fs::path> run_dirs;
            for (const auto& rdir :
                 fs::directory_iterator(fs::path(runs_root) / pname / aname))
                if (rdir.is_directory()) run_dirs.push_back(rdir.path());
            std::sort(run_dirs.begin(), run_dirs.end());
            if (run_dirs.empty())
                throw std::runtime_error("no runs for " + pname + "/" + aname);
            if (expected_runs < 0) expected_runs = static_cast<int>(run_dirs.size());
            if (static_cast<int>(run_dirs.size()) != expected_runs)
                throw std::runtime_error("run count mismatch for " + pname + "/" + aname);

            for (const auto& rdir : run_dirs) {
                const json manifest = json::parse(read_file(rdir / "manifest.json"));
                const auto& final_block = manifest.at("final");
                const double igd_v = final_block.at("igd").is_null()
                                         ? std::nan("")
                                         : final_block.at("igd").get<double>();
                const double hv_v = final_block.at("hv").is_null()
                                        ? std::nan("")
                                        : final_block.at("hv").get<double>();
                tree.igd[pname][aname].push_back(igd_v);
                tree.hv[pname][aname].push_back(hv_v);
            }
        }
    }
    tree.runs = expected_runs;
    return tree;
}

stats::ComparisonCell make_cell(const std::vector<double>& samples,
                                const std::vector<double>& baseline, bool is_baseline,
                                stats::Direction direction) {
    stats::ComparisonCell cell;
    std::vector<double> valid;
    for (double v : samples)
        if (!std::isnan(v)) valid.push_back(v);
    if (valid.empty()) {
        cell.is_nan = true;
        return cell;
    }
    double mean = 0.0;
    for (double v : valid) mean += v;
    mean /= static_cast<double>(valid.size());
    double var = 0.0;
    for (double v : valid) var += (v - mean) * (v - mean);
    cell.mean = mean;
    cell.stddev = valid.size() > 1
                      ? std::sqrt(var / static_cast<double>(valid.size() - 1))
                      : 0.0;
    if (!is_baseline)
        cell.mark = stats::wilcoxon_rank_sum(samples, baseline, 0.05, direction).mark;
    return cell;
}

void emit_metric_tables(const RunsTree& tree,
                        const std::map<std::string,
                                       std::map<std::string, std::vector<double>>>& finals,
                        stats::Direction direction, const std::string& baseline,
                        const std::vector<std::string>& columns, const fs::path& out_dir,
                        const std::string& stem, json& friedman_out) {
    std::vector<std::vector<stats::ComparisonCell>> cells;
    for (const auto& pname : tree.problems) {
        std::vector<stats::ComparisonCell> row;
        const auto& per_algo = finals.at(pname);
        for (const auto& aname : columns)
            row.push_back(make_cell(per_algo.at(aname), per_algo.at(baseline),
                                    aname == baseline, direction));
        cells.push_back(std::move(row));
    }

    stats::TableLayout layout;
    layout.row_labels = tree.problems;
    layout.col_labels = columns;
    layout.direction = direction;
    layout.footnote =
        "Marks compare each algorithm with " + baseline +
        " (two-sided Wilcoxon rank-sum, alpha = 0.05). Runs without a feasible "
        "solution rank worst and are excluded from mean/std; a cell is NaN only "
        "when every run failed.";
    const stats::RenderedTable table = stats::format_results_table(cells, layout);
    write_file(out_dir / (stem + "_table.csv"), table.csv);
    write_file(out_dir / (stem + "_table.md"), table.markdown);

    // Friedman over per-problem means (NaN cells rank worst). Undefined for a
    // single problem; the tables stand alone in that case.
    if (tree.problems.size() < 2) {
        friedman_out[stem] = json{{"note", "needs at least 2 problems"}};
        return;
    }
    std::vector<std::vector<double>> matrix;
    for (std::size_t a = 0; a < columns.size(); ++a) {
        std::vector<double> row;
        for (std::size_t p = 0; p < tree.problems.size(); ++p)
            row.push_back(cells[p][a].is_nan ? std::nan("") : cells[p][a].mean);
        matrix.push_back(std::move(row));
    }
    const stats::FriedmanResult fr = stats::friedman_ranks(matrix, direction);
    json ranks;
    for (std::size_t a = 0; a < columns.size(); ++a) ranks[columns[a]] = fr.mean_ranks[a];
    friedman_out[stem] = json{{"chi_square", fr.chi_square}, {"mean_ranks", ranks}};
}

}  // namespace

int cmd_compare(const std::string& runs_root, const std::string& baseline,
                const std::string& out_dir) {
    const RunsTree tree = discover_runs(runs_root);
    if (std::find(tree.algorithms.begin(), tree.algorithms.end(), baseline) ==
        tree.algorithms.end())
        throw std::runtime_error("baseline algorithm '" + baseline +
                                 "' has no runs under " + runs_root);
    if (tree.algorithms.size() < 2)
        throw std::runtime_error("compare needs at least 2 algorithms");

    // Baseline goes last, competitors first in name order.
    std::vector<std::string> columns;
    for (const auto& a : tree.algorithms)
        if (a != baseline) columns.push_back(a);
    columns.push_back(baseline);

    fs::create_directories(out_dir);
    json friedman;
    emit_metric_tables(tree, tree.igd, stats::Direction::smaller_is_better, baseline,
                       columns, out_dir, "igd", friedman);
    emit_metric_tables(tree, tree.hv, stats::Direction::larger_is_better, baseline,
                       columns, out_dir, "hv", friedman);
    write_file(fs::path(out_dir) / "friedman_ranks.json", friedman.dump(2) + "\n");

    std::ostringstream csv;
    csv << "metric,algorithm,mean_rank,chi_square\n";
    for (const auto& stem : {"igd", "hv"}) {
        const auto& block = friedman.at(stem);
        if (!block.contains("mean_ranks")) continue;
        for (const auto& [algo, rank] : block.at("mean_ranks").items())
            csv << stem << ',' << algo << ',' << fmt17(rank.get<double>()) << ','
                << fmt17(block.at("chi_square").get<double>()) << '\n';
    }
    write_file(fs::path(out_dir) / "friedman_ranks.csv", csv.str());
    return 0;
}

namespace {

struct LoadedRun {
    json manifest;
    std::vector<std::vector<double>> decs;
    std::vector<std::vector<double>> objs;
    std::vector<double> cv;
    std::vector<std::string> provenance;
};

LoadedRun load_run_dir(const fs::path& dir) {
    LoadedRun run;
    run.manifest = json::parse(read_file(dir / "manifest.json"));
    const int n = run.manifest.at("problem").at("n").get<int>();
    const int m = run.manifest.at("problem").at("m").get<int>();

    std::istringstream in(read_file(dir / "population.csv"));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string token;
        for (char c : line) {
            if (c == ',') {
                fields.push_back(token);
                token.clear();
            } else {
                token += c;
            }
        }
        fields.push_back(token);
        if (fields.size() != static_cast<std::size_t>(n + m + 2))
            throw std::runtime_error("malformed population row in " + dir.string());
        std::vector<double> decs(static_cast<std::size_t>(n));
        std::vector<double> objs(static_cast<std::size_t>(m));
        for (int i = 0; i < n; ++i) decs[static_cast<std::size_t>(i)] =
            std::strtod(fields[static_cast<std::size_t>(i)].c_str(), nullptr);
        for (int i = 0; i < m; ++i) objs[static_cast<std::size_t>(i)] =
            std::strtod(fields[static_cast<std::size_t>(n + i)].c_str(), nullptr);
        run.decs.push_back(std::move(decs));
        run.objs.push_back(std::move(objs));
        run.cv.push_back(std::strtod(fields[static_cast<std::size_t>(n + m)].c_str(),
                                     nullptr));
        run.provenance.push_back(fields.back());
    }
    return run;
}

std::string svg_front(const std::vector<std::vector<std::array<double, 2>>>& cpf,
                      const std::vector<std::vector<double>>& points,
                      const std::string& title, bool warn_infeasible) {
    const double width = 640, height = 480, margin = 56;
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    const auto absorb = [&](double x, double y) {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    };
    for (const auto& line : cpf)
        for (const auto& p : line) absorb(p[0], p[1]);
    for (const auto& p : points) absorb(p[0], p[1]);
    const double x_pad = std::max(1e-9, (x_max - x_min) * 0.05);
    const double y_pad = std::max(1e-9, (y_max - y_min) * 0.05);
    x_min -= x_pad; x_max += x_pad; y_min -= y_pad; y_max += y_pad;

    const auto sx = [&](double x) {
        return margin + (x - x_min) / (x_max - x_min) * (width - 2 * margin);
    };
    const auto sy = [&](double y) {
        return height - margin - (y - y_min) / (y_max - y_min) * (height - 2 * margin);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
        << "\">\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    svg << "  <rect x=\"" << margin << "\" y=\"" << margin << "\" width=\""
        << width - 2 * margin << "\" height=\"" << height - 2 * margin
        << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (const auto& line : cpf) {
        svg << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i > 0) svg << ' ';
            svg << sx(line[i][0]) << ',' << sy(line[i][1]);
        }
        svg << "\"/>\n";
    }
    for (const auto& p : points)
        svg << "  <circle cx=\"" << sx(p[0]) << "\" cy=\"" << sy(p[1])
            << "\" r=\"3\" fill=\"#d62728\" fill-opacity=\"0.8\"/>\n";
    if (warn_infeasible)
        svg << "  <text x=\"" << width / 2 << "\" y=\"" << height / 2
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
               "fill=\"#d62728\">no feasible solutions in final population</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

int cmd_front(const std::string& run_dir) {
    const fs::path dir(run_dir);
    const LoadedRun run = load_run_dir(dir);
    const int m = run.manifest.at("problem").at("m").get<int>();
    const std::string problem_id = run.manifest.at("problem").at("id").get<std::string>();

    std::vector<std::vector<double>> feasible;
    for (std::size_t i = 0; i < run.objs.size(); ++i)
        if (run.cv[i] == 0.0) feasible.push_back(run.objs[i]);

    std::ostringstream csv;
    for (int i = 1; i <= m; ++i) csv << "obj_" << i << (i == m ? '\n' : ',');
    for (const auto& p : feasible) {
        for (int i = 0; i < m; ++i)
            csv << fmt17(p[static_cast<std::size_t>(i)]) << (i + 1 == m ? '\n' : ',');
    }
    write_file(dir / "front.csv", csv.str());

    if (m != 2) {
        std::cout << "front: " << problem_id << " has " << m
                  << " objectives; wrote front.csv only\n";
        return 0;
    }
    const auto cpf = tric::cpf_polylines(tric::parse_tric_id(problem_id), 256);
    write_file(dir / "front.svg",
               svg_front(cpf, feasible, problem_id + " final feasible objectives",
                         feasible.empty()));
    return 0;
}

std::string list_problems_text() {
    std::ostringstream out;
    for (tric::TricId id : tric::all_problems) {
        const int n = tric::default_dimension(id);
        const ProblemDefinition problem = tric::make_problem(id, n);
        const tric::TricParams params = tric::params_for(id, n);
        out << problem.name << ": n=" << n << " (default), m=" << problem.m
            << ", q=" << problem.q << ", l=" << problem.l << '\n';
        switch (id) {
            case tric::TricId::tric1:
                out << "  constraint: diversity arcs, " << params.b << " - sin("
                    << params.a << "*pi*f1) <= 0\n";
                break;
            case tric::TricId::tric2:
                out << "  constraint: feasibility ball, sum_i>=2 (x_i-0.5)^2 <= rho = "
                    << params.rho << '\n';
                break;
            case tric::TricId::tric3:
                out << "  constraint: convergence offset, f1 + f2 >= e = " << params.e
                    << '\n';
                break;
            case tric::TricId::tric4:
                out << "  constraints: diversity arcs (b=" << params.b << ", a=" << params.a
                    << ") + feasibility ball (rho = " << params.rho << ")\n";
                break;
            case tric::TricId::tric5:
                out << "  constraints: diversity arcs (b=" << params.b << ", a=" << params.a
                    << ") + convergence offset (e = " << params.e << ")\n";
                break;
            case tric::TricId::tric6:
                out << "  constraint: convergence offset, f1 + f2 + f3 >= e = "
                    << params.e << " (tri-objective sphere)\n";
                break;
            case tric::TricId::tric7:
                out << "  constraint: equality shell, sum_i>=2 (x_i-0.5)^2 = r^2 = "
                    << params.r2 << " (relaxed by delta)\n";
                break;
        }
        out << "  delta: " << problem.delta << '\n';
        out << "  witness:";
        for (double v : tric::witness_point(id, n)) out << ' ' << llm::format_number(v, 6);
        out << '\n';
    }
    return out.str();
}

int cmd_replay_verify(const std::string& run_dir) {
    const fs::path dir(run_dir);
    const json manifest = json::parse(read_file(dir / "manifest.json"));
    const std::string problem_id = manifest.at("problem").at("id").get<std::string>();
    const int n = manifest.at("problem").at("n").get<int>();

    engine::EngineConfig econf;
    engine_from_json(manifest.at("engine"), econf);
    const ProblemDefinition problem =
        tric::make_problem(tric::parse_tric_id(problem_id), n);

    llm::ReplayBackend backend((dir / "ledger.jsonl").string());

    const int reference_points = manifest.value("reference_points", 1000);
    engine::MetricContext metric_ctx{tric::sample_cpf(problem, reference_points), 1.1};
    const bool every_generation =
        manifest.value("metrics_cadence", std::string("every_generation")) ==
        "every_generation";

    const engine::RunResult result = engine::run(
        problem, econf, backend, every_generation ? &metric_ctx : nullptr);

    const std::string pop_csv = population_csv(result.pop1, problem.n, problem.m);
    const std::string hist_csv = history_csv(result.history);
    const std::string stored_pop = read_file(dir / "population.csv");
    const std::string stored_hist = read_file(dir / "history.csv");

    bool ok = true;
    if (pop_csv != stored_pop) {
        std::cout << "replay-verify: population.csv MISMATCH\n";
        ok = false;
    }
    if (hist_csv != stored_hist) {
        std::cout << "replay-verify: history.csv MISMATCH\n";
        ok = false;
    }
    if (ok) std::cout << "replay-verify: OK (" << run_dir << ")\n";
    return ok ? 0 : 1;
}

}  // namespace cmoforge::exp
