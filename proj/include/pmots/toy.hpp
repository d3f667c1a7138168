#pragma once

#include "pmots/problem.hpp"

namespace pmots {

/// Integers 0..size-1 with f = (x, size-1-x) and moves x -> x±1. Every point
/// is Pareto-optimal, which makes it a convenient end-to-end fixture.
class ToyChain final : public EnumerableProblem {
public:
    explicit ToyChain(int size = 16);

    std::string_view name() const override { return "toy"; }
    std::vector<std::string> criterion_names() const override { return {"f_1", "f_2"}; }
    std::vector<Encoding> initial_front(int count, Rng& rng) const override;
    std::vector<Neighbor> neighborhood(const Encoding& solution) const override;
    std::optional<ObjectiveVector> evaluate(const Encoding& solution) const override;
    TabuAttribute move_attribute(const Move& move, const Encoding& solution) const override;
    std::vector<TabuAttribute> blocking_attributes(const Move& move,
                                                   const Encoding& solution) const override;
    int subset_label(const Encoding& solution) const override { return solution.at(0); }
    bool valid(const Encoding& solution) const override;
    std::string format(const Encoding& solution) const override;
    Encoding parse(std::string_view text) const override;

    BigInt enumeration_size() const override { return size_; }
    void enumerate(const std::function<void(const Encoding&)>& visit) const override;

    int size() const { return size_; }

private:
    int size_;
};

}  // namespace pmots
