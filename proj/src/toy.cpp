#include "pmots/toy.hpp"

#include <charconv>
#include <stdexcept>

namespace pmots {

ToyChain::ToyChain(int size) : size_(size) {
    if (size < 1) throw std::invalid_argument("toy.size: must be >= 1");
}

std::vector<Encoding> ToyChain::initial_front(int count, Rng& rng) const {
    std::vector<Encoding> out;
    for (int k = 0; k < count; ++k) {
        out.push_back({static_cast<int>(uniform_int(rng, 0, size_ - 1))});
    }
    return out;
}

std::vector<Neighbor> ToyChain::neighborhood(const Encoding& solution) const {
    const int x = solution.at(0);
    std::vector<Neighbor> out;
    for (int to : {x - 1, x + 1}) {
        if (to >= 0 && to < size_) out.push_back({Move{0, x, to, 0}, Encoding{to}});
    }
    return out;
}

std::optional<ObjectiveVector> ToyChain::evaluate(const Encoding& solution) const {
    const double x = solution.at(0);
    return ObjectiveVector{x, static_cast<double>(size_ - 1) - x};
}

TabuAttribute ToyChain::move_attribute(const Move& move, const Encoding&) const {
    return {0, move.from, 0};
}

std::vector<TabuAttribute> ToyChain::blocking_attributes(const Move& move,
                                                         const Encoding&) const {
    return {{0, move.to, 0}};
}

bool ToyChain::valid(const Encoding& solution) const {
    return solution.size() == 1 && solution[0] >= 0 && solution[0] < size_;
}

std::string ToyChain::format(const Encoding& solution) const {
    return std::to_string(solution.at(0));
}

Encoding ToyChain::parse(std::string_view text) const {
    int x = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc{} || p != text.data() + text.size() || !valid({x})) {
        throw std::invalid_argument("malformed toy encoding");
    }
    return {x};
}

void ToyChain::enumerate(const std::function<void(const Encoding&)>& visit) const {
    for (int x = 0; x < size_; ++x) visit({x});
}

}  // namespace pmots
