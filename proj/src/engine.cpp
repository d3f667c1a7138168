#include "pmots/engine.hpp"

#include "pmots/parallel.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>

#include <fmt/core.h>

namespace pmots {

using nlohmann::json;

void PmotsConfig::validate() const {
    if (paths < 1) throw std::invalid_argument("pmots.paths: must be >= 1");
    if (max_rank < 1) throw std::invalid_argument("pmots.max_rank: must be >= 1");
    if (tenure_min < 1) throw std::invalid_argument("pmots.tenure_min: must be >= 1");
    if (tenure_min > tenure_max) {
        throw std::invalid_argument(fmt::format(
            "pmots.tenure_min: {} exceeds pmots.tenure_max {}", tenure_min, tenure_max));
    }
    if (threads < 0) throw std::invalid_argument("threads: must be >= 0");
}

bool RunReport::any_stalled() const {
    return std::any_of(stalled_iterations.begin(), stalled_iterations.end(),
                       [](auto n) { return n > 0; });
}

StepResult select_step(SearchPath& path, const ProblemAdapter& problem,
                       const ParetoArchive& archive, std::uint64_t iteration,
                       const PmotsConfig& config, std::vector<Neighbor> neighbors,
                       std::span<const std::optional<ObjectiveVector>> objectives) {
    StepResult result;
    result.evaluated = neighbors.size();
    path.tabu.purge(iteration);

    std::vector<std::size_t> feasible;
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        if (objectives[i]) feasible.push_back(i);
    }

    // Latest expiry among the attributes blocking each feasible neighbour;
    // 0 means the move is not taboo.
    std::vector<std::uint64_t> blocked_until(feasible.size(), 0);
    std::vector<std::size_t> admissible;
    for (std::size_t f = 0; f < feasible.size(); ++f) {
        const auto& nb = neighbors[feasible[f]];
        for (const auto& attr : problem.blocking_attributes(nb.move, path.current)) {
            if (auto e = path.tabu.expiry(attr, iteration)) {
                blocked_until[f] = std::max(blocked_until[f], *e);
            }
        }
        const bool taboo = blocked_until[f] != 0;
        if (!taboo || (config.aspiration && !archive.covers(*objectives[feasible[f]]))) {
            admissible.push_back(feasible[f]);
        }
    }
    if (admissible.empty() && !feasible.empty()) {
        // Every neighbour is taboo: admit those whose blocking entry expires first.
        result.fallback = true;
        const auto soonest = *std::min_element(blocked_until.begin(), blocked_until.end());
        for (std::size_t f = 0; f < feasible.size(); ++f) {
            if (blocked_until[f] == soonest) admissible.push_back(feasible[f]);
        }
    }
    result.admissible = admissible.size();
    if (admissible.empty()) {
        result.stalled = true;
        ++path.stalled_iterations;
        return result;
    }

    std::vector<ObjectiveVector> pool;
    pool.reserve(admissible.size());
    for (auto i : admissible) pool.push_back(*objectives[i]);
    const auto ranks = pareto_ranks(pool, config.threads);

    std::vector<std::size_t> chosen;
    for (std::size_t a = 0; a < admissible.size(); ++a) {
        if (ranks[a] <= config.max_rank) chosen.push_back(admissible[a]);
    }
    const auto pick = chosen[static_cast<std::size_t>(
        uniform_int(path.rng, 0, static_cast<std::int64_t>(chosen.size()) - 1))];

    path.tabu.insert_random(problem.move_attribute(neighbors[pick].move, path.current), iteration,
                            path.rng);
    path.current = neighbors[pick].solution;
    path.current_objectives = objectives[pick];

    result.candidates.reserve(chosen.size());
    for (auto i : chosen) {
        result.candidate_objectives.push_back(*objectives[i]);
        result.candidates.push_back(std::move(neighbors[i]));
    }
    return result;
}

StepResult step_path(SearchPath& path, const ProblemAdapter& problem,
                     const ParetoArchive& archive, std::uint64_t iteration,
                     const PmotsConfig& config) {
    auto neighbors = problem.neighborhood(path.current);
    std::vector<std::optional<ObjectiveVector>> objectives;
    objectives.reserve(neighbors.size());
    for (const auto& nb : neighbors) objectives.push_back(problem.evaluate(nb.solution));
    return select_step(path, problem, archive, iteration, config, std::move(neighbors),
                       objectives);
}

namespace {

/// Runs `body(i)` for i in [0, n) on OpenMP threads and rethrows the first
/// exception (lowest index) on the calling thread.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
    std::exception_ptr error;
    std::size_t error_index = std::numeric_limits<std::size_t>::max();
    std::mutex mu;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(resolve_threads(threads))
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(mu);
            if (static_cast<std::size_t>(i) < error_index) {
                error_index = static_cast<std::size_t>(i);
                error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
}

json bits(const ObjectiveVector& v) {
    json out = json::array();
    for (double x : v) out.push_back(std::bit_cast<std::uint64_t>(x));
    return out;
}

ObjectiveVector unbits(const json& j) {
    ObjectiveVector v;
    for (const auto& x : j) v.push_back(std::bit_cast<double>(x.get<std::uint64_t>()));
    return v;
}

json stats_to_json(const IterationStats& s) {
    json paths = json::array();
    for (const auto& o : s.current_objectives) paths.push_back(bits(o));
    return {{"iteration", s.iteration},
            {"archive_size", s.archive_size},
            {"evaluations", s.evaluations},
            {"cumulative_evaluations", s.cumulative_evaluations},
            {"subset_labels", s.subset_labels},
            {"current_objectives", paths},
            {"candidates", s.candidates},
            {"contributions", s.contributions},
            {"stalled", s.stalled}};
}

IterationStats stats_from_json(const json& j) {
    IterationStats s;
    s.iteration = j.at("iteration");
    s.archive_size = j.at("archive_size");
    s.evaluations = j.at("evaluations");
    s.cumulative_evaluations = j.at("cumulative_evaluations");
    s.subset_labels = j.at("subset_labels").get<std::vector<int>>();
    for (const auto& o : j.at("current_objectives")) s.current_objectives.push_back(unbits(o));
    s.candidates = j.at("candidates").get<std::vector<std::size_t>>();
    s.contributions = j.at("contributions").get<std::vector<std::size_t>>();
    s.stalled = j.at("stalled").get<std::vector<bool>>();
    return s;
}

}  // namespace

Engine::Engine(const ProblemAdapter& problem, PmotsConfig config)
    : Engine(problem, std::move(config), true) {}

Engine::Engine(const ProblemAdapter& problem, PmotsConfig config, bool start_now)
    : problem_(&problem), config_(std::move(config)) {
    config_.validate();
    report_.archive = ParetoArchive(problem.arity());
    report_.stalled_iterations.assign(config_.paths, 0);
    report_.idle_iterations.assign(config_.paths, 0);
    if (start_now) start();
}

void Engine::start() {
    auto init_rng = make_stream(config_.seed, 0);
    auto front = problem_->initial_front(static_cast<int>(config_.paths), init_rng);
    if (front.size() != config_.paths) {
        throw std::runtime_error(fmt::format("initial front has {} solutions, expected {}",
                                             front.size(), config_.paths));
    }
    std::vector<std::optional<ObjectiveVector>> objs(front.size());
    parallel_for(front.size(), config_.threads, [&](std::size_t k) {
        if (!problem_->valid(front[k])) throw std::runtime_error("invalid initial solution");
        objs[k] = problem_->evaluate(front[k]);
    });
    report_.initial_evaluations = front.size();

    paths_.clear();
    for (unsigned k = 0; k < config_.paths; ++k) {
        SearchPath p;
        p.index = k + 1;
        p.current = front[k];
        p.current_objectives = objs[k];
        p.tabu = TabuList(config_.tenure_min, config_.tenure_max);
        p.rng = make_stream(config_.seed, k + 1);
        paths_.push_back(std::move(p));
    }
    for (unsigned k = 0; k < config_.paths; ++k) {
        const SolutionId id = next_id_++;
        if (objs[k]) report_.archive.insert({id, front[k], *objs[k]});
    }
}

void Engine::merge(const EvaluatedSolution& candidate, std::size_t path, IterationStats& stats) {
    if (report_.archive.insert(candidate).accepted()) ++stats.contributions[path];
}

bool Engine::iterate() {
    if (finished()) return false;
    const std::uint64_t iteration = next_iteration_;
    const std::size_t k_paths = paths_.size();

    std::vector<std::vector<Neighbor>> hoods(k_paths);
    parallel_for(k_paths, config_.threads,
                 [&](std::size_t k) { hoods[k] = problem_->neighborhood(paths_[k].current); });

    std::vector<std::size_t> offset(k_paths + 1, 0);
    for (std::size_t k = 0; k < k_paths; ++k) offset[k + 1] = offset[k] + hoods[k].size();
    std::vector<std::optional<ObjectiveVector>> objs(offset.back());
    parallel_for(objs.size(), config_.threads, [&](std::size_t flat) {
        const auto k = static_cast<std::size_t>(
            std::upper_bound(offset.begin(), offset.end(), flat) - offset.begin() - 1);
        objs[flat] = problem_->evaluate(hoods[k][flat - offset[k]].solution);
    });

    IterationStats stats;
    stats.iteration = iteration;
    stats.candidates.assign(k_paths, 0);
    stats.contributions.assign(k_paths, 0);
    stats.stalled.assign(k_paths, false);

    std::vector<StepResult> steps;
    steps.reserve(k_paths);
    for (std::size_t k = 0; k < k_paths; ++k) {
        std::span<const std::optional<ObjectiveVector>> mine(objs.data() + offset[k],
                                                             hoods[k].size());
        steps.push_back(select_step(paths_[k], *problem_, report_.archive, iteration, config_,
                                    std::move(hoods[k]), mine));
        stats.evaluations += steps.back().evaluated;
    }

    // Path-ordered merge keeps ids and reports independent of thread count.
    for (std::size_t k = 0; k < k_paths; ++k) {
        auto& step = steps[k];
        stats.candidates[k] = step.candidates.size();
        stats.stalled[k] = step.stalled;
        for (std::size_t c = 0; c < step.candidates.size(); ++c) {
            merge({next_id_++, std::move(step.candidates[c].solution),
                   std::move(step.candidate_objectives[c])},
                  k, stats);
        }
        auto& path = paths_[k];
        path.idle_iterations = stats.contributions[k] > 0 ? 0 : path.idle_iterations + 1;
        report_.stalled_iterations[k] = path.stalled_iterations;
        report_.idle_iterations[k] = path.idle_iterations;
        stats.subset_labels.push_back(problem_->subset_label(path.current));
        stats.current_objectives.push_back(path.current_objectives.value_or(ObjectiveVector{}));
    }

    report_.total_evaluations += stats.evaluations;
    stats.cumulative_evaluations = report_.total_evaluations;
    stats.archive_size = report_.archive.size();
    report_.iterations.push_back(std::move(stats));
    ++next_iteration_;
    return true;
}

json Engine::checkpoint() const {
    json paths = json::array();
    for (const auto& p : paths_) {
        json tabu = json::array();
        for (const auto& e : p.tabu.entries()) {
            tabu.push_back({e.attribute.kind, e.attribute.index, e.attribute.value, e.expiry});
        }
        paths.push_back({{"index", p.index},
                         {"current", p.current},
                         {"current_objectives",
                          p.current_objectives ? bits(*p.current_objectives) : json(nullptr)},
                         {"tabu", tabu},
                         {"rng", save_rng(p.rng)},
                         {"idle_iterations", p.idle_iterations},
                         {"stalled_iterations", p.stalled_iterations}});
    }
    json archive = json::array();
    for (const auto& m : report_.archive.members()) {
        archive.push_back({{"id", m.id}, {"encoding", m.encoding}, {"objectives", bits(m.objectives)}});
    }
    json iterations = json::array();
    for (const auto& s : report_.iterations) iterations.push_back(stats_to_json(s));
    return {{"format", "pmots-checkpoint-1"},
            {"problem", std::string(problem_->name())},
            {"config",
             {{"paths", config_.paths},
              {"iterations", config_.iterations},
              {"max_rank", config_.max_rank},
              {"tenure_min", config_.tenure_min},
              {"tenure_max", config_.tenure_max},
              {"seed", config_.seed},
              {"aspiration", config_.aspiration},
              {"threads", config_.threads}}},
            {"next_iteration", next_iteration_},
            {"next_id", next_id_},
            {"paths", paths},
            {"archive", archive},
            {"initial_evaluations", report_.initial_evaluations},
            {"total_evaluations", report_.total_evaluations},
            {"iteration_stats", iterations}};
}

Engine Engine::restore(const ProblemAdapter& problem, const json& state) {
    if (state.value("format", "") != "pmots-checkpoint-1") {
        throw std::invalid_argument("not a pmots checkpoint");
    }
    if (state.at("problem").get<std::string>() != problem.name()) {
        throw std::invalid_argument("checkpoint belongs to a different problem kind");
    }
    const auto& c = state.at("config");
    PmotsConfig config;
    config.paths = c.at("paths");
    config.iterations = c.at("iterations");
    config.max_rank = c.at("max_rank");
    config.tenure_min = c.at("tenure_min");
    config.tenure_max = c.at("tenure_max");
    config.seed = c.at("seed");
    config.aspiration = c.at("aspiration");
    config.threads = c.at("threads");

    Engine engine(problem, config, false);
    engine.next_iteration_ = state.at("next_iteration");
    engine.next_id_ = state.at("next_id");
    for (const auto& p : state.at("paths")) {
        SearchPath path;
        path.index = p.at("index");
        path.current = p.at("current").get<Encoding>();
        if (!p.at("current_objectives").is_null()) {
            path.current_objectives = unbits(p.at("current_objectives"));
        }
        path.tabu = TabuList(config.tenure_min, config.tenure_max);
        std::deque<TabuEntry> entries;
        for (const auto& e : p.at("tabu")) {
            entries.push_back({{e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()},
                               e.at(3).get<std::uint64_t>()});
        }
        path.tabu.restore(std::move(entries));
        path.rng = load_rng(p.at("rng").get<std::string>());
        path.idle_iterations = p.at("idle_iterations");
        path.stalled_iterations = p.at("stalled_iterations");
        engine.report_.stalled_iterations.at(path.index - 1) = path.stalled_iterations;
        engine.report_.idle_iterations.at(path.index - 1) = path.idle_iterations;
        engine.paths_.push_back(std::move(path));
    }
    if (engine.paths_.size() != config.paths) {
        throw std::invalid_argument("checkpoint path count does not match its config");
    }
    for (const auto& m : state.at("archive")) {
        engine.report_.archive.insert(
            {m.at("id").get<SolutionId>(), m.at("encoding").get<Encoding>(), unbits(m.at("objectives"))});
    }
    engine.report_.initial_evaluations = state.at("initial_evaluations");
    engine.report_.total_evaluations = state.at("total_evaluations");
    for (const auto& s : state.at("iteration_stats")) {
        engine.report_.iterations.push_back(stats_from_json(s));
    }
    return engine;
}

RunReport run(const ProblemAdapter& problem, const PmotsConfig& config,
              const IterationObserver& observer) {
    Engine engine(problem, config);
    while (engine.iterate()) {
        if (observer) observer(engine, engine.report().iterations.back());
    }
    return engine.report();
}

}  // namespace pmots
