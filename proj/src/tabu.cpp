#include "pmots/tabu.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pmots {

std::string save_rng(const Rng& rng) {
    std::ostringstream os;
    os << rng;
    return os.str();
}

Rng load_rng(const std::string& state) {
    Rng rng;
    std::istringstream is(state);
    is >> rng;
    if (!is) throw std::invalid_argument("malformed RNG state");
    return rng;
}

unsigned sample_tenure(Rng& rng, unsigned min_tenure, unsigned max_tenure) {
    if (min_tenure < 1 || min_tenure > max_tenure) {
        throw std::invalid_argument("tenure bounds must satisfy 1 <= min <= max");
    }
    return static_cast<unsigned>(uniform_int(rng, min_tenure, max_tenure));
}

TabuList::TabuList(unsigned min_tenure, unsigned max_tenure)
    : min_tenure_(min_tenure), max_tenure_(max_tenure) {
    if (min_tenure < 1 || min_tenure > max_tenure) {
        throw std::invalid_argument("tenure bounds must satisfy 1 <= min <= max");
    }
}

void TabuList::insert(const TabuAttribute& attr, std::uint64_t iteration, unsigned tenure) {
    entries_.push_back({attr, iteration + tenure + 1});
}

unsigned TabuList::insert_random(const TabuAttribute& attr, std::uint64_t iteration, Rng& rng) {
    const unsigned t = sample_tenure(rng, min_tenure_, max_tenure_);
    insert(attr, iteration, t);
    return t;
}

bool TabuList::is_taboo(const TabuAttribute& attr, std::uint64_t iteration) const {
    return expiry(attr, iteration).has_value();
}

std::optional<std::uint64_t> TabuList::expiry(const TabuAttribute& attr,
                                              std::uint64_t iteration) const {
    std::optional<std::uint64_t> latest;
    for (const auto& e : entries_) {
        if (e.attribute == attr && e.expiry > iteration) {
            latest = std::max(latest.value_or(0), e.expiry);
        }
    }
    return latest;
}

void TabuList::purge(std::uint64_t iteration) {
    std::erase_if(entries_, [&](const TabuEntry& e) { return e.expiry <= iteration; });
}

}  // namespace pmots
