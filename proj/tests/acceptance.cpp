// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "pmots/cli.hpp"
#include "pmots/engine.hpp"
#include "pmots/io.hpp"
#include "pmots/oracle.hpp"
#include "pmots/pareto.hpp"
#include "pmots/wlp.hpp"
#include "pmots/wsn.hpp"

#include <fmt/core.h>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#ifndef PMOTS_SCENARIO_DIR
#error "PMOTS_SCENARIO_DIR must point at the bundled scenarios"
#endif

using namespace pmots;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Settings shared by the oracle-equivalence criteria. The tenure interval is
// not prescribed; short tenures suit neighbourhoods of a few dozen moves.
PmotsConfig search_config(unsigned iterations, std::uint64_t seed) {
    PmotsConfig c;
    c.paths = 3;
    c.iterations = iterations;
    c.max_rank = 3;
    c.tenure_min = 2;
    c.tenure_max = 5;
    c.seed = seed;
    return c;
}

// True when every objective vector of the exact front is held by the archive.
bool recovers(const std::set<ObjectiveVector>& exact, const ParetoArchive& archive) {
    std::set<ObjectiveVector> found;
    for (const auto& m : archive.members()) found.insert(m.objectives);
    return std::includes(found.begin(), found.end(), exact.begin(), exact.end());
}

struct EquivalenceStats {
    int worst_hits = 20;
    double slowest = 0.0;
    std::size_t largest_front = 0;
};

void search_against_oracle(const EnumerableProblem& problem, unsigned iterations,
                           EquivalenceStats& stats) {
    const auto oracle = exhaustive_pareto(problem);
    std::set<ObjectiveVector> exact;
    for (const auto& m : oracle.front.members()) exact.insert(m.objectives);
    stats.largest_front = std::max(stats.largest_front, exact.size());

    const auto t0 = Clock::now();
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        hits += recovers(exact, run(problem, search_config(iterations, seed)).archive);
    }
    stats.slowest = std::max(stats.slowest, seconds_since(t0));
    stats.worst_hits = std::min(stats.worst_hits, hits);
}

// ---------------------------------------------------------------- criterion 1

wlp::WlpModel wlp_fixture(std::uint64_t index) {
    auto rng = make_stream(9100, index);
    wlp::Floorplan floor;
    floor.width_m = 25.0 + 25.0 * uniform01(rng);
    floor.height_m = 20.0 + 20.0 * uniform01(rng);
    floor.meters_per_pixel = 0.5;
    for (int w = 0; w < 2; ++w) {
        const double x = floor.width_m * (0.2 + 0.6 * uniform01(rng));
        const double y = floor.height_m * (0.2 + 0.6 * uniform01(rng));
        const double loss = 3.0 + 5.0 * uniform01(rng);
        if (w == 0) {
            floor.walls.push_back({{x, 0.0}, {x, y}, loss});
        } else {
            floor.walls.push_back({{0.0, y}, {x, y}, loss});
        }
    }

    wlp::WlpInstance inst;
    const int m = static_cast<int>(uniform_int(rng, 5, 8));
    for (int k = 0; k < m; ++k) {
        inst.sites.push_back({floor.width_m * uniform01(rng), floor.height_m * uniform01(rng)});
    }
    // Low powers on a large floor keep the signal penalties away from
    // saturation, so the exact fronts have several members.
    inst.powers_dbm = uniform_int(rng, 1, 2) == 1 ? std::vector<double>{-5.0}
                                                  : std::vector<double>{-5.0, 5.0};
    inst.blocks = wlp::make_block_grid(floor, static_cast<int>(uniform_int(rng, 6, 12)),
                                       static_cast<int>(uniform_int(rng, 6, 12)));
    inst.coverage = {-85.0, -65.0, 1.0, wlp::Orientation::maximize};
    inst.interference = {-90.0, -70.0, 1.0, wlp::Orientation::minimize};
    inst.qos = {0.0, 2e6, 1.0, wlp::Orientation::maximize};
    inst.rate_tiers = {{4.0, 1e6}, {10.0, 5.5e6}, {18.0, 11e6}};
    inst.users = static_cast<double>(uniform_int(rng, 6, 12));
    inst.max_active = 4;
    auto tensor = wlp::generate_coverage_tensor(inst, floor);
    return {std::move(inst), std::move(tensor)};
}

Outcome wlp_oracle_equivalence() {
    EquivalenceStats stats;
    for (std::uint64_t f = 0; f < 10; ++f) search_against_oracle(wlp_fixture(f), 200, stats);
    return {stats.worst_hits >= 18 && stats.slowest < 30.0,
            fmt::format("worst instance {}/20 seeds, slowest {:.2f} s, largest front {}",
                        stats.worst_hits, stats.slowest, stats.largest_front)};
}

// ---------------------------------------------------------------- criterion 2

wsn::LinkModel lossy_link() {
    wsn::LinkModel l;
    l.packet_bits = 16.0;
    l.gamma = 1.0 / 16.0;
    return l;
}

wsn::WsnTopology random_topology(Rng& rng, int n, double width, double height) {
    wsn::WsnTopology t;
    for (int i = 0; i < n; ++i) {
        t.nodes.push_back({width * uniform01(rng), height * uniform01(rng), 1e-3,
                           0.5 + uniform01(rng)});
    }
    t.nodes.front().x = 0.0;
    t.nodes.back().x = width;
    t.communicating.assign(n, true);
    t.sources = {0};
    t.destinations = {n - 1};
    return t;
}

Outcome wsn_oracle_equivalence() {
    EquivalenceStats stats;
    for (std::uint64_t f = 0; f < 10; ++f) {
        auto rng = make_stream(9200, f);
        wsn::WsnInstance inst;
        inst.topology = random_topology(rng, static_cast<int>(uniform_int(rng, 6, 10)), 20.0, 12.0);
        inst.link = lossy_link();
        inst.levels = {0.0, 1.0};
        inst.h_max = 3;
        search_against_oracle(wsn::WsnModel(inst), 300, stats);
    }
    return {stats.worst_hits >= 18 && stats.slowest < 60.0,
            fmt::format("worst instance {}/20 seeds, slowest {:.2f} s, largest front {}",
                        stats.worst_hits, stats.slowest, stats.largest_front)};
}

// ---------------------------------------------------------------- criterion 3

Outcome dp_validation() {
    const auto t0 = Clock::now();
    const std::vector<double> levels{0.0, 0.25, 0.5, 1.0};
    int misses = 0;
    double worst_z = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        auto rng = make_stream(9300, i);
        const auto topo = random_topology(rng, 10, 20.0, 20.0);
        std::vector<double> x(10, 0.0);
        for (int k = 1; k < 9; ++k) x[k] = levels[uniform_int(rng, 0, 3)];
        const auto link = lossy_link();
        const auto dp = wsn::pair_criteria(topo, link, x, 0, 9, 4);
        const auto mc = wsn::monte_carlo_oracle(topo, link, x, 0, 9, 4, 100000, 500 + i);
        for (int c = 0; c < 3; ++c) {
            const double diff = std::abs(mc.mean[c] - dp[c]);
            if (mc.stderr_[c] == 0.0) {
                misses += diff > 1e-12 * std::max(1.0, std::abs(dp[c]));
                continue;
            }
            const double z = diff / mc.stderr_[c];
            worst_z = std::max(worst_z, z);
            misses += z > 3.0;
        }
    }
    const double elapsed = seconds_since(t0);
    return {misses == 0 && elapsed < 120.0,
            fmt::format("{} of 60 criteria beyond 3 standard errors, largest |z| {:.2f}, {:.1f} s",
                        misses, worst_z, elapsed)};
}

// ---------------------------------------------------------------- criterion 4

Outcome all_zero_anchor() {
    auto rng = make_stream(9400, 0);
    int failures = 0;
    const int cases = 500;
    for (int i = 0; i < cases; ++i) {
        wsn::WsnInstance inst;
        const int n = static_cast<int>(uniform_int(rng, 2, 14));
        inst.topology = random_topology(rng, n, 5.0 + 40.0 * uniform01(rng), 30.0 * uniform01(rng));
        for (auto& node : inst.topology.nodes) node.power_w = 1e-4 + 1e-2 * uniform01(rng);
        auto& l = inst.link;
        l.a0 = std::pow(10.0, -6.0 + 4.0 * uniform01(rng));
        l.d0_m = 0.5 + uniform01(rng);
        l.alpha = 2.0 + 2.0 * uniform01(rng);
        l.noise_w = std::pow(10.0, -14.0 + 4.0 * uniform01(rng));
        l.beta = 0.01 + uniform01(rng);
        l.packet_bits = static_cast<double>(uniform_int(rng, 1, 256));
        l.gamma = uniform01(rng);
        inst.levels = {0.0, 0.5, 1.0};
        inst.h_max = static_cast<int>(uniform_int(rng, 1, 5));
        const wsn::WsnModel model(inst);

        const std::vector<double> zeros(n, 0.0);
        const double p = wsn::link_success(inst.topology, l, zeros, 0, n - 1);
        const auto got = model.evaluate(Encoding(n, 0));
        const ObjectiveVector want{1.0 - p, 0.0, 0.0};
        failures += !got || *got != want;
    }
    return {failures == 0, fmt::format("{} of {} topologies differ", failures, cases)};
}

// ---------------------------------------------------------------- criterion 5

Outcome neighbourhood_cardinality() {
    auto rng = make_stream(9500, 0);
    int failures = 0;
    const int cases = 1000;
    for (int i = 0; i < cases; ++i) {
        const int m = static_cast<int>(uniform_int(rng, 1, 30));
        const int np = static_cast<int>(uniform_int(rng, 1, 5));
        const int nd = static_cast<int>(uniform_int(rng, 1, 4));
        wlp::WlpInstance inst;
        for (int k = 0; k < m; ++k) inst.sites.push_back({double(k), 0.0});
        for (int p = 0; p < np; ++p) inst.powers_dbm.push_back(10.0 + 5.0 * p);
        inst.directions_deg.clear();
        for (int d = 0; d < nd; ++d) inst.directions_deg.push_back(360.0 * d / nd);
        wlp::Block block;
        block.center = {0.5, 1.0};
        inst.blocks = {block};
        inst.rate_tiers = {{5.0, 1e6}};
        wlp::CoverageTensor tensor(m, np, nd, 1);
        for (auto& v : tensor.data()) v = -60.0;
        const wlp::WlpModel model(inst, std::move(tensor));

        const double on = uniform01(rng);
        Encoding s(m, wlp::kOff);
        for (auto& v : s) {
            if (bernoulli(rng, on)) v = static_cast<int>(uniform_int(rng, 0, np * nd - 1));
        }
        const int n = model.active_count(s);
        const auto expected = static_cast<std::size_t>(n * (m - n) + (m - n) + n + n * (np - 1) +
                                                       n * (nd - 1));
        failures += model.neighborhood(s).size() != expected;
    }
    return {failures == 0, fmt::format("{} of {} solutions differ", failures, cases)};
}

// ---------------------------------------------------------------- criterion 6

bool within_ulp(double got, double want) {
    return got == want || std::nextafter(want, got) == got;
}

Outcome penalty_exactness() {
    int failures = 0;
    int checks = 0;
    auto check = [&](double got, double want) {
        ++checks;
        failures += !within_ulp(got, want);
    };
    const wlp::PenaltyProfile fixture{-85.0, -65.0, 1.0, wlp::Orientation::maximize};
    check(wlp::penalty(-65.0, fixture), 0.0);
    check(wlp::penalty(-85.0, fixture), 1.0);
    check(wlp::penalty(-75.0, fixture), 0.5);
    check(wlp::criterion(std::vector<double>{3.0, 4.0}, std::vector<double>{1.0, 1.0}), 5.0);

    auto rng = make_stream(9600, 0);
    for (int i = 0; i < 1000; ++i) {
        const double lo = static_cast<double>(uniform_int(rng, -120, 0));
        const double hi = lo + 2.0 * static_cast<double>(uniform_int(rng, 1, 40));
        const double delta = static_cast<double>(uniform_int(rng, 1, 16)) / 4.0;
        const wlp::PenaltyProfile up{lo, hi, delta, wlp::Orientation::maximize};
        const wlp::PenaltyProfile down{lo, hi, delta, wlp::Orientation::minimize};
        const double mid = (lo + hi) / 2.0;
        check(wlp::penalty(hi, up), 0.0);
        check(wlp::penalty(lo, up), delta);
        check(wlp::penalty(mid, up), delta / 2.0);
        check(wlp::penalty(lo, down), 0.0);
        check(wlp::penalty(hi, down), delta);
        check(wlp::penalty(mid, down), delta / 2.0);
    }
    return {failures == 0, fmt::format("{} of {} values off by more than 1 ulp", failures, checks)};
}

// ---------------------------------------------------------------- criterion 7

ObjectiveVector random_point(Rng& rng, int arity, int levels) {
    ObjectiveVector v(arity);
    for (auto& x : v) x = static_cast<double>(uniform_int(rng, 0, levels - 1));
    return v;
}

// Reference dominance written out independently of the library.
bool reference_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        strict = strict || a[i] < b[i];
    }
    return strict;
}

std::vector<EvaluatedSolution> random_set(Rng& rng, int arity) {
    std::vector<EvaluatedSolution> set(uniform_int(rng, 1, 25));
    for (std::size_t i = 0; i < set.size(); ++i) set[i] = {i, {}, random_point(rng, arity, 5)};
    return set;
}

Outcome pareto_properties() {
    constexpr int kCases = 10000;
    auto rng = make_stream(9700, 0);
    int failures = 0;

    for (int i = 0; i < kCases; ++i) {
        const int arity = static_cast<int>(uniform_int(rng, 1, 4));
        const auto a = random_point(rng, arity, 3);
        const auto b = random_point(rng, arity, 3);
        const auto c = random_point(rng, arity, 3);
        bool ok = !dominates(a, a);
        ok = ok && !(dominates(a, b) && dominates(b, a));
        ok = ok && (!(dominates(a, b) && dominates(b, c)) || dominates(a, c));
        ok = ok && dominates(a, b) == reference_dominates(a, b);
        failures += !ok;
    }

    for (int i = 0; i < kCases; ++i) {
        const int arity = static_cast<int>(uniform_int(rng, 2, 3));
        const auto set = random_set(rng, arity);

        ParetoArchive archive(arity);
        for (const auto& s : set) archive.insert(s);
        std::set<ObjectiveVector> expected;
        for (const auto& s : set) {
            bool dominated = false;
            for (const auto& t : set) dominated = dominated || reference_dominates(t.objectives, s.objectives);
            if (!dominated) expected.insert(s.objectives);
        }
        std::set<ObjectiveVector> held;
        bool ok = true;
        for (const auto& m : archive.members()) {
            ok = ok && held.insert(m.objectives).second;
            for (const auto& o : archive.members()) ok = ok && !reference_dominates(o.objectives, m.objectives);
        }
        ok = ok && held == expected;
        for (const auto& s : set) ok = ok && archive.covers(s.objectives);

        std::vector<ObjectiveVector> points;
        for (const auto& s : set) points.push_back(s.objectives);
        const auto ranks = pareto_ranks(points);
        ok = ok && ranks == pareto_ranks_serial(points);
        const auto by_id = pareto_rank(set);
        for (std::size_t j = 0; j < set.size(); ++j) {
            unsigned r = 1;
            for (const auto& t : set) r += reference_dominates(t.objectives, set[j].objectives);
            ok = ok && ranks[j] == r && by_id.at(set[j].id) == r;
        }

        const auto once = non_dominated_filter(set);
        const auto twice = non_dominated_filter(once);
        ok = ok && once.size() == twice.size();
        for (std::size_t j = 0; ok && j < once.size(); ++j) {
            ok = once[j].id == twice[j].id && ranks[once[j].id] == 1;
        }
        std::size_t rank_one = 0;
        for (auto r : ranks) rank_one += r == 1;
        ok = ok && once.size() == rank_one;
        failures += !ok;
    }
    return {failures == 0, fmt::format("{} failures in {} order and {} set cases", failures,
                                       kCases, kCases)};
}

// ---------------------------------------------------------------- criterion 8

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "pmots");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    if (code != 0) std::cerr << err.str();
    return code;
}

Outcome determinism() {
    const auto work = fs::temp_directory_path() / "pmots-acceptance";
    fs::remove_all(work);
    fs::create_directories(work);
    std::vector<fs::path> scenarios;
    for (const auto& e : fs::directory_iterator(PMOTS_SCENARIO_DIR)) {
        if (e.path().extension() == ".json") scenarios.push_back(e.path());
    }
    std::sort(scenarios.begin(), scenarios.end());

    int mismatches = 0;
    for (const auto& file : scenarios) {
        auto j = nlohmann::ordered_json::parse(read_file(file));
        j.erase("output_dir");
        if (j.contains("wlp") && j["wlp"].contains("tensor_cache")) {
            j["wlp"]["tensor_cache"] = (work / "cache").string();
        }
        std::vector<std::string> fronts;
        for (int threads : {1, 8}) {
            j["threads"] = threads;
            const auto name = fmt::format("{}-{}", file.stem().string(), threads);
            const auto copy = work / (name + ".json");
            write_file(copy, j.dump(2));
            if (run_cli({"run", copy.string(), "--out", (work / name).string()}) != 0) {
                fronts.push_back("failed run " + name);
                continue;
            }
            fronts.push_back(read_file(work / name / "front.csv") +
                             read_file(work / name / "front.json"));
        }
        mismatches += fronts[0] != fronts[1];
    }
    return {!scenarios.empty() && mismatches == 0,
            fmt::format("{} of {} bundled scenarios differ between 1 and 8 threads", mismatches,
                        scenarios.size())};
}

// ---------------------------------------------------------------- criterion 9

Outcome count_reproduction() {
    // C(256,3) by direct product, then 20^3 settings.
    const BigInt expected = BigInt(256) * 255 * 254 / 6 * 8000;
    bool ok = subset_size(256, 3, 5, 4) == expected && expected == BigInt("22108160000");
    BigInt prev = 0;
    for (unsigned n = 1; n <= 20; ++n) {
        const auto s = subset_size(256, n, 5, 4);
        ok = ok && s > prev;
        prev = s;
    }
    return {ok, fmt::format("subset_size(256, 3, 5, 4) = {}, N = 20 gives {} digits",
                            subset_size(256, 3, 5, 4).str(), prev.str().size())};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"WLP search recovers the exhaustive front", wlp_oracle_equivalence},
        {"WSN search recovers the exhaustive front", wsn_oracle_equivalence},
        {"WSN dynamic program agrees with Monte-Carlo", dp_validation},
        {"all-zero forwarding gives (1 - p_SD, 0, 0)", all_zero_anchor},
        {"WLP neighbourhood cardinality", neighbourhood_cardinality},
        {"penalty and criterion exactness", penalty_exactness},
        {"Pareto core properties", pareto_properties},
        {"front exports independent of thread count", determinism},
        {"subset size counts", count_reproduction},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << fmt::format("{} criterion {}: {} ({}; {:.1f} s)\n", o.pass ? "PASS" : "FAIL",
                                 i + 1, criteria[i].first, o.detail, seconds_since(t0))
                  << std::flush;
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed,
                             criteria.size());
    return failed == 0 ? 0 : 1;
}
