#include "pmots/cli.hpp"

#include "pmots/hash.hpp"
#include "pmots/io.hpp"
#include "pmots/oracle.hpp"
#include "pmots/pareto.hpp"
#include "pmots/wsn.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>

#include <fmt/core.h>

#ifndef PMOTS_VERSION
#define PMOTS_VERSION "0.0.0"
#endif

namespace pmots::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

fs::path resolve_output_dir(const std::optional<std::string>& flag,
                            const std::optional<std::string>& scenario) {
    if (flag) return *flag;
    if (scenario) return *scenario;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return kDefaultOutputDir;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Options {
    std::string scenario;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> cap;
    std::optional<std::string> resume;
    std::optional<std::uint64_t> trials;
    std::string front;
    unsigned count = 15;
};

// Collects written files for the manifest.
class Outputs {
public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, std::string_view content) {
        write_file(dir_ / name, content);
        files_.push_back({{"file", name}, {"sha256", sha256_hex(content)}});
    }
    const fs::path& dir() const { return dir_; }
    ojson list() const { return files_; }

private:
    fs::path dir_;
    ojson files_ = ojson::array();
};

ojson manifest_base(std::string_view command, const Scenario& sc, const std::string& path) {
    ojson m;
    m["tool"] = "pmots";
    m["version"] = PMOTS_VERSION;
    m["command"] = command;
    m["problem"] = kind_name(sc.kind);
    m["scenario"] = {{"file", path}, {"sha256", sc.content_hash}};
    m["seed"] = sc.pmots.seed;
    m["threads"] = sc.pmots.threads;
    return m;
}

void write_manifest(Outputs& outputs, ojson manifest) {
    manifest["outputs"] = outputs.list();
    write_file(outputs.dir() / "manifest.json", manifest.dump(2) + '\n');
}

std::string trace_jsonl(const RunReport& report) {
    std::string out;
    for (const auto& s : report.iterations) {
        ojson line;
        line["iteration"] = s.iteration;
        line["archive_size"] = s.archive_size;
        line["evaluations"] = s.evaluations;
        line["cumulative_evaluations"] = s.cumulative_evaluations;
        ojson paths = ojson::array();
        for (std::size_t k = 0; k < s.subset_labels.size(); ++k) {
            paths.push_back({{"subset", s.subset_labels[k]},
                             {"objectives", s.current_objectives[k]},
                             {"candidates", s.candidates[k]},
                             {"contributions", s.contributions[k]},
                             {"stalled", static_cast<bool>(s.stalled[k])}});
        }
        line["paths"] = std::move(paths);
        out += line.dump() + '\n';
    }
    return out;
}

Scenario load(const Options& o) {
    auto sc = load_scenario(o.scenario);
    if (o.seed) sc.pmots.seed = *o.seed;
    if (o.cap) {
        if (o.cap->empty() || o.cap->find_first_not_of("0123456789") != std::string::npos) {
            throw ScenarioError("--cap: expected a non-negative integer");
        }
        sc.oracle_cap = BigInt(*o.cap);
    }
    validate_scenario(sc);
    return sc;
}

void write_front(Outputs& outputs, const ProblemAdapter& problem, const ParetoArchive& archive) {
    const auto table = make_front_table(problem, archive);
    outputs.write("front.csv", to_csv(table));
    outputs.write("front.json", to_json(table));
}

bool same_config(const PmotsConfig& a, const PmotsConfig& b) {
    return a.paths == b.paths && a.max_rank == b.max_rank &&
           a.tenure_min == b.tenure_min && a.tenure_max == b.tenure_max && a.seed == b.seed &&
           a.aspiration == b.aspiration;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
    const auto t0 = Clock::now();
    const auto sc = load(o);
    Outputs outputs(resolve_output_dir(o.out, sc.output_dir));
    const auto problem = build_problem(sc);
    const double setup_s = seconds_since(t0);

    std::optional<Engine> engine;
    if (o.resume) {
        nlohmann::json state;
        try {
            state = nlohmann::json::parse(read_file(*o.resume));
        } catch (const nlohmann::json::exception& e) {
            throw ScenarioError(std::string("--resume: ") + e.what());
        }
        // The iteration budget and thread count come from the scenario, so
        // a resumed run may also extend the original one.
        if (state.contains("config") && state["config"].is_object()) {
            state["config"]["iterations"] = sc.pmots.iterations;
            state["config"]["threads"] = sc.pmots.threads;
        }
        try {
            engine.emplace(Engine::restore(*problem, state));
        } catch (const nlohmann::json::exception& e) {
            throw ScenarioError(std::string("--resume: malformed checkpoint: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(std::string("--resume: ") + e.what());
        }
        if (!same_config(engine->config(), sc.pmots)) {
            throw ScenarioError("--resume: checkpoint was written for different pmots settings");
        }
    } else {
        engine.emplace(*problem, sc.pmots);
    }

    const auto t1 = Clock::now();
    while (engine->iterate()) {
        if (sc.checkpoint_every > 0 && engine->next_iteration() % sc.checkpoint_every == 0) {
            write_file(outputs.dir() / "checkpoint.json", engine->checkpoint().dump() + '\n');
        }
    }
    const double search_s = seconds_since(t1);
    const auto& report = engine->report();

    write_front(outputs, *problem, report.archive);
    outputs.write("trace.jsonl", trace_jsonl(report));

    auto m = manifest_base("run", sc, o.scenario);
    if (o.resume) m["resumed_from"] = *o.resume;
    m["results"] = {{"archive_size", report.archive.size()},
                    {"iterations", report.iterations.size()},
                    {"initial_evaluations", report.initial_evaluations},
                    {"evaluations", report.total_evaluations},
                    {"stalled_iterations", report.stalled_iterations}};
    m["timings"] = {{"setup_s", setup_s}, {"search_s", search_s}, {"total_s", seconds_since(t0)}};
    write_manifest(outputs, m);

    for (std::size_t k = 0; k < report.stalled_iterations.size(); ++k) {
        if (report.stalled_iterations[k] > 0) {
            err << fmt::format("warning: path {} had no admissible neighbour in {} iteration(s)\n",
                               k + 1, report.stalled_iterations[k]);
        }
    }
    out << fmt::format("{} solutions on the front after {} iterations and {} evaluations; wrote {}\n",
                       report.archive.size(), report.iterations.size(), report.total_evaluations,
                       outputs.dir().string());
    return kOk;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream&) {
    const auto t0 = Clock::now();
    const auto sc = load(o);
    const auto problem = build_problem(sc);
    const auto size = problem->enumeration_size();
    if (size == 0) throw ScenarioError("scenario: the enumeration space is empty");

    OracleOptions opts;
    opts.cap = sc.oracle_cap;
    opts.threads = sc.pmots.threads;
    const auto result = exhaustive_pareto(*problem, opts);

    Outputs outputs(resolve_output_dir(o.out, sc.output_dir));
    write_front(outputs, *problem, result.front);
    auto m = manifest_base("oracle", sc, o.scenario);
    m["results"] = {{"enumerated", result.enumerated},
                    {"infeasible", result.infeasible},
                    {"front_size", result.front.size()},
                    {"cap", sc.oracle_cap.str()}};
    m["timings"] = {{"total_s", seconds_since(t0)}};
    write_manifest(outputs, m);
    out << fmt::format("{} of {} solutions are Pareto-optimal; wrote {}\n", result.front.size(),
                       result.enumerated, outputs.dir().string());
    return kOk;
}

int cmd_select(const Options& o, std::ostream& out, std::ostream&) {
    FrontTable table;
    try {
        table = read_front(o.front);
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(o.front + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw ScenarioError(e.what());
    }
    if (o.count < 1) throw ScenarioError("--count: must be >= 1");
    std::vector<std::size_t> order;
    if (!table.rows.empty()) order = select_representatives(table.solutions(), o.count);

    const bool json = fs::path(o.front).extension() == ".json";
    const auto dir = resolve_output_dir(o.out, std::nullopt);
    const auto file = dir / (json ? "selected.json" : "selected.csv");
    write_file(file, json ? select_json(table, order) : select_csv(table, order));
    out << fmt::format("selected {} of {} solutions; wrote {}\n", order.size(), table.rows.size(),
                       file.string());
    return kOk;
}

int cmd_validate_wsn(const Options& o, std::ostream& out, std::ostream&) {
    const auto sc = load(o);
    if (sc.kind != ProblemKind::wsn) throw ScenarioError("problem: validate-wsn needs a wsn scenario");
    const std::uint64_t trials = o.trials.value_or(sc.wsn.validate_trials);
    if (trials < 1) throw ScenarioError("--trials: must be >= 1");

    const wsn::WsnModel model(sc.wsn.instance);
    const auto& inst = model.instance();
    std::vector<Encoding> solutions{Encoding(inst.topology.size(), 0)};
    auto rng = make_stream(sc.pmots.seed, 0);
    for (auto& s : model.initial_front(static_cast<int>(sc.pmots.paths), rng)) {
        solutions.push_back(std::move(s));
    }

    static constexpr const char* kNames[] = {"f_R", "f_D", "f_E"};
    std::string csv = "solution,source,destination,criterion,dp,monte_carlo,stderr,z\n";
    bool failed = false;
    std::uint64_t stream = sc.wsn.validate_seed;
    for (const auto& s : solutions) {
        const auto x = model.probabilities(s);
        for (int src : inst.topology.sources) {
            for (int dst : inst.topology.destinations) {
                const auto dp = wsn::pair_criteria(inst.topology, inst.link, x, src, dst, inst.h_max);
                const auto mc = wsn::monte_carlo_oracle(inst.topology, inst.link, x, src, dst,
                                                        inst.h_max, trials, stream++,
                                                        sc.pmots.threads);
                for (int c = 0; c < 3; ++c) {
                    const double diff = mc.mean[c] - dp[c];
                    const double z = mc.stderr_[c] > 0.0 ? diff / mc.stderr_[c]
                                     : diff == 0.0     ? 0.0
                                                       : std::copysign(INFINITY, diff);
                    failed = failed || std::abs(z) > 3.0;
                    csv += fmt::format("{},{},{},{},{},{},{},{}\n", model.format(s), src, dst,
                                       kNames[c], format_double(dp[c]), format_double(mc.mean[c]),
                                       format_double(mc.stderr_[c]), format_double(z));
                }
            }
        }
    }

    Outputs outputs(resolve_output_dir(o.out, sc.output_dir));
    outputs.write("validate-wsn.csv", csv);
    auto m = manifest_base("validate-wsn", sc, o.scenario);
    m["results"] = {{"trials", trials}, {"solutions", solutions.size()}, {"passed", !failed}};
    write_manifest(outputs, m);
    out << csv;
    if (failed) {
        out << "at least one criterion differs from the Monte-Carlo estimate by more than 3 "
               "standard errors\n";
        return kValidationFailed;
    }
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Parallel multiobjective Tabu search for network planning problems", "pmots"};
    app.set_version_flag("--version", PMOTS_VERSION);
    app.require_subcommand(1);
    Options o;

    auto* run_cmd = app.add_subcommand("run", "Search a scenario with parallel Tabu paths");
    auto* oracle_cmd = app.add_subcommand("oracle", "Enumerate a small scenario exhaustively");
    auto* select_cmd = app.add_subcommand("select", "Pick representative solutions from a front");
    auto* validate_cmd =
        app.add_subcommand("validate-wsn", "Compare WSN criteria with a Monte-Carlo estimate");

    for (auto* c : {run_cmd, oracle_cmd, validate_cmd}) {
        c->add_option("scenario", o.scenario, "Scenario file (JSON)")->required();
        c->add_option("--out", o.out, "Output directory");
        c->add_option("--seed", o.seed, "Override the scenario seed");
    }
    run_cmd->add_option("--resume", o.resume, "Continue from a checkpoint file");
    oracle_cmd->add_option("--cap", o.cap, "Largest enumeration allowed");
    validate_cmd->add_option("--trials", o.trials, "Monte-Carlo trials per solution");
    select_cmd->add_option("front", o.front, "Front export (.csv or .json)")->required();
    select_cmd->add_option("--count", o.count, "Number of representatives")->capture_default_str();
    select_cmd->add_option("--out", o.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (*run_cmd) return cmd_run(o, out, err);
        if (*oracle_cmd) return cmd_oracle(o, out, err);
        if (*select_cmd) return cmd_select(o, out, err);
        return cmd_validate_wsn(o, out, err);
    } catch (const ScenarioError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const EnumerationCapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kOverCap;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

}  // namespace pmots::cli
