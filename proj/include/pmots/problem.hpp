#pragma once

#include "pmots/pareto.hpp"
#include "pmots/rng.hpp"
#include "pmots/tabu.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pmots {

using BigInt = boost::multiprecision::cpp_int;

/// A single neighbourhood move. Field meaning is up to the problem model.
struct Move {
    int kind = 0;
    int from = -1;
    int to = -1;
    int value = -1;

    bool operator==(const Move&) const = default;
};

struct Neighbor {
    Move move;
    Encoding solution;
};

/// Contract between the search engine and a problem model.
///
/// Implementations must be immutable after construction: the engine calls
/// `evaluate` and `neighborhood` concurrently from several threads.
class ProblemAdapter {
public:
    virtual ~ProblemAdapter() = default;

    virtual std::string_view name() const = 0;
    virtual std::vector<std::string> criterion_names() const = 0;
    std::size_t arity() const { return criterion_names().size(); }

    /// Exactly `count` valid starting solutions, one per search path.
    virtual std::vector<Encoding> initial_front(int count, Rng& rng) const = 0;

    virtual std::vector<Neighbor> neighborhood(const Encoding& solution) const = 0;

    /// Deterministic objective vector, or nullopt when the solution is
    /// infeasible and must be dropped from the neighbourhood.
    virtual std::optional<ObjectiveVector> evaluate(const Encoding& solution) const = 0;

    /// Attribute stored in the path's Tabu list after applying `move` to
    /// `solution`.
    virtual TabuAttribute move_attribute(const Move& move, const Encoding& solution) const = 0;

    /// Attributes whose presence in a Tabu list forbids `move` from `solution`.
    virtual std::vector<TabuAttribute> blocking_attributes(const Move& move,
                                                           const Encoding& solution) const = 0;

    /// Subset the solution belongs to (active APs, forwarders, ...).
    virtual int subset_label(const Encoding& solution) const = 0;

    virtual bool valid(const Encoding& solution) const = 0;

    /// Text form used in exports. Must not contain ',' or '"'.
    virtual std::string format(const Encoding& solution) const = 0;
    virtual Encoding parse(std::string_view text) const = 0;
};

/// A problem whose (possibly capped) solution space can be listed.
class EnumerableProblem : public ProblemAdapter {
public:
    /// Number of solutions `enumerate` visits.
    virtual BigInt enumeration_size() const = 0;

    /// Visits every solution in lexicographic order of the encoding.
    virtual void enumerate(const std::function<void(const Encoding&)>& visit) const = 0;
};

}  // namespace pmots
