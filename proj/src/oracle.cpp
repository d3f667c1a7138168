#include "pmots/oracle.hpp"

#include "pmots/parallel.hpp"

#include <fmt/core.h>

namespace pmots {

BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

BigInt subset_size(unsigned sites, unsigned active, unsigned powers, unsigned directions) {
    if (active > sites) throw std::invalid_argument("subset_size: active exceeds sites");
    return binomial(sites, active) * boost::multiprecision::pow(BigInt(powers) * directions, active);
}

EnumerationCapExceeded::EnumerationCapExceeded(BigInt count, BigInt cap)
    : std::runtime_error(fmt::format("enumeration space has {} solutions, above the cap of {}",
                                     count.str(), cap.str())),
      count_(std::move(count)),
      cap_(std::move(cap)) {}

namespace {

void check_cap(const EnumerableProblem& problem, const BigInt& cap) {
    const auto n = problem.enumeration_size();
    if (n > cap) throw EnumerationCapExceeded(n, cap);
}

}  // namespace

OracleResult exhaustive_pareto_serial(const EnumerableProblem& problem, const BigInt& cap) {
    check_cap(problem, cap);
    OracleResult out;
    out.front = ParetoArchive(problem.arity());
    problem.enumerate([&](const Encoding& s) {
        const SolutionId id = out.enumerated++;
        if (auto f = problem.evaluate(s)) {
            out.front.insert({id, s, std::move(*f)});
        } else {
            ++out.infeasible;
        }
    });
    return out;
}

OracleResult exhaustive_pareto(const EnumerableProblem& problem, const OracleOptions& options) {
    check_cap(problem, options.cap);
    OracleResult out;
    out.front = ParetoArchive(problem.arity());
    std::vector<Encoding> batch;
    std::vector<std::optional<ObjectiveVector>> objs;
    batch.reserve(options.batch);
    const int threads = resolve_threads(options.threads);

    auto flush = [&] {
        objs.assign(batch.size(), std::nullopt);
        const auto n = static_cast<std::int64_t>(batch.size());
#pragma omp parallel for schedule(static) num_threads(threads)
        for (std::int64_t i = 0; i < n; ++i) objs[i] = problem.evaluate(batch[i]);
        for (std::size_t i = 0; i < batch.size(); ++i) {
            const SolutionId id = out.enumerated++;
            if (objs[i]) {
                out.front.insert({id, std::move(batch[i]), std::move(*objs[i])});
            } else {
                ++out.infeasible;
            }
        }
        batch.clear();
    };
    problem.enumerate([&](const Encoding& s) {
        batch.push_back(s);
        if (batch.size() >= options.batch) flush();
    });
    flush();
    return out;
}

}  // namespace pmots
