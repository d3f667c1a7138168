#pragma once

#include "pmots/pareto.hpp"
#include "pmots/problem.hpp"
#include "pmots/rng.hpp"
#include "pmots/tabu.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace pmots {

struct PmotsConfig {
    unsigned paths = 1;       ///< K
    unsigned iterations = 0;  ///< I_max
    unsigned max_rank = 1;    ///< R_max
    unsigned tenure_min = 1;
    unsigned tenure_max = 1;
    std::uint64_t seed = 0;
    /// Admit a taboo neighbour when no archive member dominates or equals it.
    bool aspiration = false;
    /// OpenMP threads for neighbour evaluation; 0 = OpenMP default. Results do
    /// not depend on this value.
    int threads = 0;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct SearchPath {
    unsigned index = 0;
    Encoding current;
    std::optional<ObjectiveVector> current_objectives;
    TabuList tabu;
    Rng rng;
    std::uint64_t idle_iterations = 0;  ///< consecutive iterations without archive gain
    std::uint64_t stalled_iterations = 0;
};

/// Outcome of one path step before archive merging.
struct StepResult {
    std::vector<Neighbor> candidates;            ///< P_R, in neighbourhood order
    std::vector<ObjectiveVector> candidate_objectives;
    std::size_t evaluated = 0;                   ///< neighbours evaluated
    std::size_t admissible = 0;                  ///< neighbours ranked
    bool stalled = false;                        ///< no admissible neighbour: path kept in place
    bool fallback = false;                       ///< every feasible neighbour was taboo
};

struct IterationStats {
    std::uint64_t iteration = 0;
    std::size_t archive_size = 0;
    std::uint64_t evaluations = 0;
    std::uint64_t cumulative_evaluations = 0;
    std::vector<int> subset_labels;                    ///< per path, after the step
    std::vector<ObjectiveVector> current_objectives;   ///< per path, after the step
    std::vector<std::size_t> candidates;               ///< |P_R| per path
    std::vector<std::size_t> contributions;            ///< archive acceptances per path
    std::vector<bool> stalled;

    bool operator==(const IterationStats&) const = default;
};

struct RunReport {
    ParetoArchive archive;
    std::vector<IterationStats> iterations;
    std::uint64_t initial_evaluations = 0;
    std::uint64_t total_evaluations = 0;  ///< neighbourhood evaluations over all iterations
    std::vector<std::uint64_t> stalled_iterations;  ///< per path
    std::vector<std::uint64_t> idle_iterations;     ///< per path, trailing streak

    bool any_stalled() const;
};

/// Chooses the next solution of `path` from an already evaluated neighbourhood
/// and updates its Tabu list. `objectives[i]` belongs to `neighbors[i]`.
/// Ranking is local to the admissible neighbours; `archive` is consulted only
/// when aspiration is enabled.
StepResult select_step(SearchPath& path, const ProblemAdapter& problem,
                       const ParetoArchive& archive, std::uint64_t iteration,
                       const PmotsConfig& config, std::vector<Neighbor> neighbors,
                       std::span<const std::optional<ObjectiveVector>> objectives);

/// Generates, evaluates and selects for a single path (serial).
StepResult step_path(SearchPath& path, const ProblemAdapter& problem,
                     const ParetoArchive& archive, std::uint64_t iteration,
                     const PmotsConfig& config);

/// Parallel multiobjective Tabu search over K paths.
class Engine {
public:
    Engine(const ProblemAdapter& problem, PmotsConfig config);

    /// Runs one iteration. Returns false once the iteration budget is spent.
    bool iterate();
    bool finished() const { return next_iteration_ >= config_.iterations; }

    const RunReport& report() const { return report_; }
    const std::vector<SearchPath>& paths() const { return paths_; }
    const PmotsConfig& config() const { return config_; }
    std::uint64_t next_iteration() const { return next_iteration_; }

    /// Full state; `restore` continues bit-identically.
    nlohmann::json checkpoint() const;
    static Engine restore(const ProblemAdapter& problem, const nlohmann::json& state);

private:
    Engine(const ProblemAdapter& problem, PmotsConfig config, bool start);

    void start();
    void merge(const EvaluatedSolution& candidate, std::size_t path, IterationStats& stats);

    const ProblemAdapter* problem_;
    PmotsConfig config_;
    std::vector<SearchPath> paths_;
    RunReport report_;
    std::uint64_t next_iteration_ = 0;
    SolutionId next_id_ = 0;
};

using IterationObserver = std::function<void(const Engine&, const IterationStats&)>;

RunReport run(const ProblemAdapter& problem, const PmotsConfig& config,
              const IterationObserver& observer = {});

}  // namespace pmots
