#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace pmots {

/// Criterion values of one solution. Every criterion is minimized.
using ObjectiveVector = std::vector<double>;

/// Problem-specific solution encoding. The engine treats it as opaque.
using Encoding = std::vector<int>;

using SolutionId = std::uint64_t;

struct EvaluatedSolution {
    SolutionId id = 0;
    Encoding encoding;
    ObjectiveVector objectives;
};

/// True iff `a` Pareto-dominates `b` under minimization. Comparison is exact.
/// Throws std::invalid_argument on arity mismatch and std::domain_error on
/// non-finite values.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Rank of every vector: 1 + number of vectors in the set that dominate it.
/// Data-parallel over the set (each rank is independent).
std::vector<unsigned> pareto_ranks(std::span<const ObjectiveVector> set, int threads = 0);

/// Single-threaded reference for pareto_ranks.
std::vector<unsigned> pareto_ranks_serial(std::span<const ObjectiveVector> set);

using RankAssignment = std::map<SolutionId, unsigned>;

/// Ranks keyed by solution id. Throws std::domain_error on an empty set.
RankAssignment pareto_rank(std::span<const EvaluatedSolution> set);

/// The rank-1 members, in input order.
std::vector<EvaluatedSolution> non_dominated_filter(std::span<const EvaluatedSolution> set);

enum class InsertOutcome { accepted, dominated, duplicate };

struct InsertResult {
    InsertOutcome outcome = InsertOutcome::accepted;
    std::vector<EvaluatedSolution> removed;

    bool accepted() const { return outcome == InsertOutcome::accepted; }
};

/// Mutually non-dominated set of solutions, pruned eagerly on each insert.
/// A solution whose objective vector equals a member's is rejected
/// (first-in wins). Not thread-safe for concurrent inserts.
class ParetoArchive {
public:
    ParetoArchive() = default;
    explicit ParetoArchive(std::size_t arity) : arity_(arity) {}

    InsertResult insert(EvaluatedSolution sol);

    /// True if some member dominates or equals `objectives`.
    bool covers(std::span<const double> objectives) const;

    const std::vector<EvaluatedSolution>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    std::optional<std::size_t> arity() const { return arity_; }

    /// Members ordered by id.
    std::vector<EvaluatedSolution> sorted_by_id() const;

private:
    std::optional<std::size_t> arity_;
    std::vector<EvaluatedSolution> members_;
};

struct CriterionRange {
    double min = 0.0;
    double max = 0.0;
};

/// Per-criterion min/max over a set of solutions.
std::vector<CriterionRange> objective_ranges(std::span<const EvaluatedSolution> front);

/// Greedy farthest-point selection in min-max normalized objective space.
/// Starts from the member with the smallest normalized criterion sum; each
/// later pick maximizes the distance to its nearest already-selected member.
/// Ties go to the lowest id. Returns indices into `front` in selection order.
/// A criterion with max == min contributes nothing to distances.
std::vector<std::size_t> select_representatives(std::span<const EvaluatedSolution> front,
                                                std::size_t count,
                                                std::span<const CriterionRange> ranges);

std::vector<std::size_t> select_representatives(std::span<const EvaluatedSolution> front,
                                                std::size_t count);

}  // namespace pmots
