#include "pmots/pareto.hpp"

#include "pmots/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/core.h>

namespace pmots {

namespace {

void check_comparable(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(
            fmt::format("objective arity mismatch: {} vs {}", a.size(), b.size()));
    }
}

void check_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) throw std::domain_error("non-finite objective value");
    }
}

}  // namespace

bool dominates(std::span<const double> a, std::span<const double> b) {
    check_comparable(a, b);
    check_finite(a);
    check_finite(b);
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

std::vector<unsigned> pareto_ranks_serial(std::span<const ObjectiveVector> set) {
    std::vector<unsigned> ranks(set.size(), 1);
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = 0; j < set.size(); ++j) {
            if (i != j && dominates(set[j], set[i])) ++ranks[i];
        }
    }
    return ranks;
}

std::vector<unsigned> pareto_ranks(std::span<const ObjectiveVector> set, int threads) {
    const auto n = static_cast<std::int64_t>(set.size());
    std::vector<unsigned> ranks(set.size(), 1);
    for (std::size_t i = 1; i < set.size(); ++i) check_comparable(set[0], set[i]);
    for (const auto& v : set) check_finite(v);

    // Validation happened above, so the inner loop cannot throw.
    auto dom = [](const ObjectiveVector& a, const ObjectiveVector& b) {
        bool strict = false;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k] > b[k]) return false;
            if (a[k] < b[k]) strict = true;
        }
        return strict;
    };
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads)) if (n > 256)
    for (std::int64_t i = 0; i < n; ++i) {
        unsigned r = 1;
        for (std::int64_t j = 0; j < n; ++j) {
            if (i != j && dom(set[j], set[i])) ++r;
        }
        ranks[i] = r;
    }
    return ranks;
}

RankAssignment pareto_rank(std::span<const EvaluatedSolution> set) {
    if (set.empty()) throw std::domain_error("pareto_rank of an empty set");
    std::vector<ObjectiveVector> objs;
    objs.reserve(set.size());
    for (const auto& s : set) objs.push_back(s.objectives);
    const auto ranks = pareto_ranks(objs);
    RankAssignment out;
    for (std::size_t i = 0; i < set.size(); ++i) out[set[i].id] = ranks[i];
    return out;
}

std::vector<EvaluatedSolution> non_dominated_filter(std::span<const EvaluatedSolution> set) {
    std::vector<ObjectiveVector> objs;
    objs.reserve(set.size());
    for (const auto& s : set) objs.push_back(s.objectives);
    const auto ranks = pareto_ranks(objs);
    std::vector<EvaluatedSolution> out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (ranks[i] == 1) out.push_back(set[i]);
    }
    return out;
}

InsertResult ParetoArchive::insert(EvaluatedSolution sol) {
    if (!arity_) arity_ = sol.objectives.size();
    if (sol.objectives.size() != *arity_) {
        throw std::invalid_argument(fmt::format("objective arity mismatch: archive {} vs {}",
                                                *arity_, sol.objectives.size()));
    }
    check_finite(sol.objectives);

    InsertResult result;
    for (const auto& m : members_) {
        if (m.objectives == sol.objectives) {
            result.outcome = InsertOutcome::duplicate;
            return result;
        }
        if (dominates(m.objectives, sol.objectives)) {
            result.outcome = InsertOutcome::dominated;
            return result;
        }
    }
    auto keep = std::stable_partition(members_.begin(), members_.end(), [&](const auto& m) {
        return !dominates(sol.objectives, m.objectives);
    });
    result.removed.assign(std::make_move_iterator(keep), std::make_move_iterator(members_.end()));
    members_.erase(keep, members_.end());
    members_.push_back(std::move(sol));
    return result;
}

bool ParetoArchive::covers(std::span<const double> objectives) const {
    return std::any_of(members_.begin(), members_.end(), [&](const auto& m) {
        return std::equal(m.objectives.begin(), m.objectives.end(), objectives.begin(),
                          objectives.end()) ||
               dominates(m.objectives, objectives);
    });
}

std::vector<EvaluatedSolution> ParetoArchive::sorted_by_id() const {
    auto out = members_;
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

std::vector<CriterionRange> objective_ranges(std::span<const EvaluatedSolution> front) {
    if (front.empty()) return {};
    const auto n = front.front().objectives.size();
    std::vector<CriterionRange> ranges(n, {std::numeric_limits<double>::infinity(),
                                           -std::numeric_limits<double>::infinity()});
    for (const auto& s : front) {
        for (std::size_t i = 0; i < n; ++i) {
            ranges[i].min = std::min(ranges[i].min, s.objectives[i]);
            ranges[i].max = std::max(ranges[i].max, s.objectives[i]);
        }
    }
    return ranges;
}

std::vector<std::size_t> select_representatives(std::span<const EvaluatedSolution> front,
                                                std::size_t count,
                                                std::span<const CriterionRange> ranges) {
    if (count == 0) throw std::invalid_argument("representative count must be >= 1");
    if (front.empty()) throw std::invalid_argument("cannot select from an empty front");
    const std::size_t arity = front.front().objectives.size();
    if (ranges.size() != arity) throw std::invalid_argument("range arity mismatch");

    std::vector<std::vector<double>> pts(front.size(), std::vector<double>(arity, 0.0));
    for (std::size_t i = 0; i < front.size(); ++i) {
        for (std::size_t c = 0; c < arity; ++c) {
            const double span = ranges[c].max - ranges[c].min;
            pts[i][c] = span > 0.0 ? (front[i].objectives[c] - ranges[c].min) / span : 0.0;
        }
    }
    auto better = [&](std::size_t i, double vi, std::size_t j, double vj, bool maximize) {
        if (vi != vj) return maximize ? vi > vj : vi < vj;
        return front[i].id < front[j].id;
    };

    const std::size_t want = std::min(count, front.size());
    std::vector<std::size_t> picked;
    std::vector<bool> used(front.size(), false);

    std::size_t first = 0;
    double first_sum = 0.0;
    for (std::size_t i = 0; i < front.size(); ++i) {
        double s = 0.0;
        for (double v : pts[i]) s += v;
        if (i == 0 || better(i, s, first, first_sum, false)) {
            first = i;
            first_sum = s;
        }
    }
    picked.push_back(first);
    used[first] = true;

    std::vector<double> nearest(front.size(), std::numeric_limits<double>::infinity());
    auto sqdist = [&](std::size_t a, std::size_t b) {
        double d = 0.0;
        for (std::size_t c = 0; c < arity; ++c) {
            const double t = pts[a][c] - pts[b][c];
            d += t * t;
        }
        return d;
    };
    while (picked.size() < want) {
        const std::size_t last = picked.back();
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < front.size(); ++i) {
            if (used[i]) continue;
            nearest[i] = std::min(nearest[i], sqdist(i, last));
            if (!best || better(i, nearest[i], *best, nearest[*best], true)) best = i;
        }
        picked.push_back(*best);
        used[*best] = true;
    }
    return picked;
}

std::vector<std::size_t> select_representatives(std::span<const EvaluatedSolution> front,
                                                std::size_t count) {
    const auto ranges = objective_ranges(front);
    return select_representatives(front, count, ranges);
}

}  // namespace pmots
