#pragma once

#include "pmots/rng.hpp"

#include <compare>
#include <cstdint>
#include <deque>
#include <optional>

namespace pmots {

/// Problem-defined token naming a forbidden move aspect. Problems use `kind`
/// to separate ordinary (index, value) attributes from sentinel tokens.
struct TabuAttribute {
    int kind = 0;
    int index = 0;
    int value = 0;

    auto operator<=>(const TabuAttribute&) const = default;
};

struct TabuEntry {
    TabuAttribute attribute;
    std::uint64_t expiry = 0;  ///< taboo while iteration < expiry
};

/// Uniform tenure in [min_tenure, max_tenure].
unsigned sample_tenure(Rng& rng, unsigned min_tenure, unsigned max_tenure);

/// FIFO of attributes with per-entry expiry. An entry inserted at iteration i
/// with tenure t forbids its attribute during iterations i+1 .. i+t.
class TabuList {
public:
    TabuList() = default;
    TabuList(unsigned min_tenure, unsigned max_tenure);

    void insert(const TabuAttribute& attr, std::uint64_t iteration, unsigned tenure);

    /// Draws the tenure from `rng` and inserts.
    unsigned insert_random(const TabuAttribute& attr, std::uint64_t iteration, Rng& rng);

    bool is_taboo(const TabuAttribute& attr, std::uint64_t iteration) const;

    /// Latest expiry among live entries for `attr`, if any.
    std::optional<std::uint64_t> expiry(const TabuAttribute& attr, std::uint64_t iteration) const;

    /// Drops entries that are no longer taboo at `iteration`.
    void purge(std::uint64_t iteration);

    const std::deque<TabuEntry>& entries() const { return entries_; }
    unsigned min_tenure() const { return min_tenure_; }
    unsigned max_tenure() const { return max_tenure_; }

    void restore(std::deque<TabuEntry> entries) { entries_ = std::move(entries); }

private:
    unsigned min_tenure_ = 1;
    unsigned max_tenure_ = 1;
    std::deque<TabuEntry> entries_;
};

}  // namespace pmots
