#pragma once

#include "pmots/pareto.hpp"
#include "pmots/problem.hpp"

#include <stdexcept>

namespace pmots {

BigInt binomial(unsigned n, unsigned k);

/// Solutions with exactly `active` of `sites` positions on, each on position
/// taking one of `powers`·`directions` settings: C(M,N)·(N_P·N_D)^N.
BigInt subset_size(unsigned sites, unsigned active, unsigned powers, unsigned directions);

inline const BigInt kDefaultEnumerationCap = 10'000'000;

/// Thrown when a space is larger than the configured cap.
class EnumerationCapExceeded : public std::runtime_error {
public:
    EnumerationCapExceeded(BigInt count, BigInt cap);
    const BigInt& count() const { return count_; }
    const BigInt& cap() const { return cap_; }

private:
    BigInt count_;
    BigInt cap_;
};

struct OracleOptions {
    BigInt cap = kDefaultEnumerationCap;
    int threads = 0;
    std::size_t batch = 4096;
};

struct OracleResult {
    ParetoArchive front;
    std::uint64_t enumerated = 0;
    std::uint64_t infeasible = 0;
};

/// Exact Pareto front by full enumeration. Solutions get their enumeration
/// index as id. Batches are evaluated in parallel and merged in order, so the
/// result does not depend on the thread count.
OracleResult exhaustive_pareto(const EnumerableProblem& problem, const OracleOptions& options = {});

/// Single-threaded reference.
OracleResult exhaustive_pareto_serial(const EnumerableProblem& problem,
                                      const BigInt& cap = kDefaultEnumerationCap);

}  // namespace pmots
