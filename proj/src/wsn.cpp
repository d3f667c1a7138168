#include "pmots/wsn.hpp"

#include "pmots/oracle.hpp"
#include "pmots/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

#include <fmt/core.h>

namespace pmots::wsn {

void WsnTopology::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
    const int n = static_cast<int>(nodes.size());
    if (n < 2) fail("wsn.nodes: at least two nodes required");
    if (communicating.size() != nodes.size()) fail("wsn.communicating: one flag per node required");
    if (sources.empty()) fail("wsn.sources: at least one source required");
    if (destinations.empty()) fail("wsn.destinations: at least one destination required");
    std::set<int> seen;
    for (const auto* group : {&sources, &destinations}) {
        const char* name = group == &sources ? "wsn.sources" : "wsn.destinations";
        for (int id : *group) {
            if (id < 0 || id >= n) fail(fmt::format("{}: node {} out of range", name, id));
            if (!communicating[id]) {
                fail(fmt::format("{}: node {} is not a communicating node", name, id));
            }
            if (!seen.insert(id).second) {
                fail(fmt::format("{}: node {} listed twice or in both sets", name, id));
            }
        }
    }
    for (const auto& nd : nodes) {
        if (!(nd.power_w > 0.0)) fail("wsn.nodes: transmit power must be > 0");
        if (!(nd.energy_j >= 0.0)) fail("wsn.nodes: energy must be >= 0");
    }
}

double disk_area(const TopologyParams& p) { return p.count / p.density; }

WsnTopology generate_topology(const TopologyParams& p) {
    if (!(p.density > 0.0)) throw std::invalid_argument("wsn.density: must be > 0");
    if (p.count < 2) throw std::invalid_argument("wsn.count: at least two nodes required");
    if (!(p.radius > 0.0)) throw std::invalid_argument("wsn.radius: must be > 0");
    const double disk_radius = std::sqrt(disk_area(p) / std::numbers::pi);
    auto rng = make_stream(p.seed, 0);
    WsnTopology t;
    for (int i = 0; i < p.count; ++i) {
        const double r = disk_radius * std::sqrt(uniform01(rng));
        const double theta = 2.0 * std::numbers::pi * uniform01(rng);
        t.nodes.push_back({r * std::cos(theta), r * std::sin(theta), p.power_w, p.energy_j});
        t.communicating.push_back(r <= p.radius);
    }
    int lo = -1;
    int hi = -1;
    for (int i = 0; i < p.count; ++i) {
        if (!t.communicating[i]) continue;
        if (lo < 0 || t.nodes[i].x < t.nodes[lo].x) lo = i;
        if (hi < 0 || t.nodes[i].x > t.nodes[hi].x) hi = i;
    }
    if (lo < 0 || lo == hi) {
        throw std::invalid_argument(
            "wsn.radius: fewer than two nodes fall inside the communicating disk");
    }
    t.sources = {lo};
    t.destinations = {hi};
    return t;
}

void LinkModel::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
    if (!(a0 > 0.0)) fail("wsn.link.a0: must be > 0");
    if (!(d0_m > 0.0)) fail("wsn.link.d0_m: must be > 0");
    if (!(alpha >= 0.0)) fail("wsn.link.alpha: must be >= 0");
    if (!(noise_w >= 0.0)) fail("wsn.link.noise_w: must be >= 0");
    if (!(beta >= 0.0)) fail("wsn.link.beta: must be >= 0");
    if (!(packet_bits > 0.0)) fail("wsn.link.packet_bits: must be > 0");
    if (!(gamma >= 0.0 && gamma <= 1.0)) fail("wsn.link.gamma: must lie in [0, 1]");
}

double attenuation(const LinkModel& link, const Node& a, const Node& b) {
    const double d = std::max(std::hypot(a.x - b.x, a.y - b.y), link.d0_m);
    return link.a0 * std::pow(d / link.d0_m, -link.alpha);
}

double expected_interference(const WsnTopology& topo, const LinkModel& link,
                             std::span<const double> x, int i, int j) {
    double sum = 0.0;
    for (int k = 0; k < static_cast<int>(topo.size()); ++k) {
        if (k == i || k == j || x[k] <= 0.0) continue;
        sum += topo.nodes[k].power_w * attenuation(link, topo.nodes[k], topo.nodes[j]) * x[k] *
               link.gamma;
    }
    return sum;
}

double success_from_sinr(const LinkModel& link, double sinr) {
    if (std::isinf(sinr)) return 1.0;
    if (sinr <= 0.0) return 0.0;
    return std::clamp(std::exp(-link.beta * link.packet_bits / sinr), 0.0, 1.0);
}

double link_success(const WsnTopology& topo, const LinkModel& link, std::span<const double> x,
                    int i, int j) {
    const double signal = topo.nodes[i].power_w * attenuation(link, topo.nodes[i], topo.nodes[j]);
    const double denom = link.noise_w + expected_interference(topo, link, x, i, j);
    return success_from_sinr(link, denom == 0.0 ? INFINITY : signal / denom);
}

namespace {

// Link probabilities among the nodes a single pair's recursion touches.
// Position 0 is the source; positions 1.. are the relays.
struct ActiveLinks {
    std::vector<int> nodes;
    std::vector<double> to_dest;            // p(node -> destination)
    std::vector<std::vector<double>> relay; // relay[a][b-1] = p(node a -> relay b), 0 on a == b
    std::vector<double> forward;            // x of each relay
    std::vector<double> cost;               // e of each relay
};

ActiveLinks active_links(const WsnTopology& topo, const LinkModel& link, std::span<const double> x,
                         int source, int destination) {
    ActiveLinks al;
    al.nodes.push_back(source);
    for (int r = 0; r < static_cast<int>(topo.size()); ++r) {
        if (r != destination && r != source && x[r] > 0.0) al.nodes.push_back(r);
    }
    const std::size_t a = al.nodes.size();

    // Same sums as expected_interference, restricted to the forwarders.
    std::vector<int> forwarders;
    for (int k = 0; k < static_cast<int>(topo.size()); ++k) {
        if (x[k] > 0.0) forwarders.push_back(k);
    }
    auto success = [&](int i, int j) {
        double interference = 0.0;
        for (int k : forwarders) {
            if (k == i || k == j) continue;
            interference += topo.nodes[k].power_w * attenuation(link, topo.nodes[k], topo.nodes[j]) *
                            x[k] * link.gamma;
        }
        const double signal = topo.nodes[i].power_w * attenuation(link, topo.nodes[i], topo.nodes[j]);
        const double denom = link.noise_w + interference;
        return success_from_sinr(link, denom == 0.0 ? INFINITY : signal / denom);
    };

    al.to_dest.resize(a);
    al.relay.assign(a, std::vector<double>(a - 1, 0.0));
    for (std::size_t i = 0; i < a; ++i) {
        al.to_dest[i] = success(al.nodes[i], destination);
        for (std::size_t b = 1; b < a; ++b) {
            if (b != i) al.relay[i][b - 1] = success(al.nodes[i], al.nodes[b]);
        }
    }
    for (std::size_t b = 1; b < a; ++b) {
        al.forward.push_back(x[al.nodes[b]]);
        al.cost.push_back(topo.nodes[al.nodes[b]].energy_j);
    }
    return al;
}

}  // namespace

namespace {

// Reach and energy tables indexed by active position (0 = source).
struct LocalTables {
    std::vector<std::vector<double>> reach;
    std::vector<std::vector<double>> spent;
};

LocalTables local_tables(const ActiveLinks& al, int h_max) {
    const std::size_t a = al.nodes.size();
    const auto hm = static_cast<std::size_t>(h_max);
    LocalTables t{std::vector<std::vector<double>>(a, std::vector<double>(hm, 0.0)),
                  std::vector<std::vector<double>>(a, std::vector<double>(hm, 0.0))};
    for (std::size_t i = 0; i < a; ++i) t.reach[i][0] = al.to_dest[i];
    for (std::size_t h = 1; h < hm; ++h) {
        for (std::size_t i = 0; i < a; ++i) {
            double miss = 1.0;
            double e = 0.0;
            for (std::size_t b = 1; b < a; ++b) {
                if (b == i) continue;
                const double w = al.relay[i][b - 1] * al.forward[b - 1];
                miss *= 1.0 - w * t.reach[b][h - 1];
                e += w * (al.cost[b - 1] + t.spent[b][h - 1]);
            }
            t.reach[i][h] = 1.0 - miss;
            t.spent[i][h] = e;
        }
    }
    return t;
}

}  // namespace

ReachTable reach_table(const WsnTopology& topo, const LinkModel& link, std::span<const double> x,
                       int source, int destination, int h_max) {
    if (h_max < 1) throw std::invalid_argument("wsn.h_max: must be >= 1");
    const auto al = active_links(topo, link, x, source, destination);
    auto local = local_tables(al, h_max);
    const auto hm = static_cast<std::size_t>(h_max);
    ReachTable t;
    t.h_max = h_max;
    t.reach.assign(topo.size(), std::vector<double>(hm, 0.0));
    t.energy.assign(topo.size(), std::vector<double>(hm, 0.0));
    for (std::size_t i = 0; i < al.nodes.size(); ++i) {
        t.reach[al.nodes[i]] = std::move(local.reach[i]);
        t.energy[al.nodes[i]] = std::move(local.spent[i]);
    }
    return t;
}

double robustness(std::span<const double> p) {
    double miss = 1.0;
    for (double v : p) miss *= 1.0 - v;
    return miss;
}

double delay(std::span<const double> p) {
    double not_yet = 1.0;
    double sum = 0.0;
    for (std::size_t h = 0; h < p.size(); ++h) {
        const double r = p[h] * not_yet;
        sum += static_cast<double>(h * h) * r;
        not_yet *= 1.0 - p[h];
    }
    return sum;
}

double energy(std::span<const double> e) { return std::accumulate(e.begin(), e.end(), 0.0); }

Triple pair_criteria(const WsnTopology& topo, const LinkModel& link, std::span<const double> x,
                     int source, int destination, int h_max) {
    if (h_max < 1) throw std::invalid_argument("wsn.h_max: must be >= 1");
    const auto t = local_tables(active_links(topo, link, x, source, destination), h_max);
    return {robustness(t.reach[0]), delay(t.reach[0]), energy(t.spent[0])};
}

// ---------------------------------------------------------------------------
// Monte-Carlo oracle

namespace {

struct Moments {
    Triple sum{};
    Triple sum_sq{};
    std::uint64_t n = 0;
};

// Grows one broadcast tree from active position i with `hops` hops left.
// Every branch is explored so that its forwarding energy is counted.
bool simulate(const ActiveLinks& al, std::size_t i, int hops, Rng& rng, double& spent) {
    if (hops == 1) return bernoulli(rng, al.to_dest[i]);
    bool delivered = false;
    for (std::size_t b = 1; b < al.nodes.size(); ++b) {
        if (b == i) continue;
        if (!bernoulli(rng, al.relay[i][b - 1])) continue;
        if (!bernoulli(rng, al.forward[b - 1])) continue;
        spent += al.cost[b - 1];
        if (simulate(al, b, hops - 1, rng, spent)) delivered = true;
    }
    return delivered;
}

Moments run_chunk(const ActiveLinks& al, int h_max, std::uint64_t trials, Rng rng) {
    Moments m;
    for (std::uint64_t t = 0; t < trials; ++t) {
        bool any = false;
        double first_delay = 0.0;
        double spent = 0.0;
        for (int h = 1; h <= h_max; ++h) {
            if (simulate(al, 0, h, rng, spent) && !any) {
                any = true;
                first_delay = static_cast<double>((h - 1) * (h - 1));
            }
        }
        const Triple sample{any ? 0.0 : 1.0, first_delay, spent};
        for (int c = 0; c < 3; ++c) {
            m.sum[c] += sample[c];
            m.sum_sq[c] += sample[c] * sample[c];
        }
        ++m.n;
    }
    return m;
}

MonteCarloEstimate finish(const std::vector<Moments>& chunks) {
    Moments total;
    for (const auto& m : chunks) {
        for (int c = 0; c < 3; ++c) {
            total.sum[c] += m.sum[c];
            total.sum_sq[c] += m.sum_sq[c];
        }
        total.n += m.n;
    }
    MonteCarloEstimate est;
    est.trials = total.n;
    const double n = static_cast<double>(total.n);
    for (int c = 0; c < 3; ++c) {
        est.mean[c] = total.sum[c] / n;
        const double var =
            total.n > 1 ? std::max(0.0, (total.sum_sq[c] - n * est.mean[c] * est.mean[c]) / (n - 1))
                        : 0.0;
        est.stderr_[c] = std::sqrt(var / n);
    }
    return est;
}

void check_mc_args(std::uint64_t trials, int h_max) {
    if (trials < 1) throw std::invalid_argument("trials: must be >= 1");
    if (h_max < 1) throw std::invalid_argument("wsn.h_max: must be >= 1");
}

std::uint64_t chunk_trials(std::uint64_t trials, std::uint64_t c) {
    return std::min(kMonteCarloChunk, trials - c * kMonteCarloChunk);
}

}  // namespace

MonteCarloEstimate monte_carlo_oracle(const WsnTopology& topo, const LinkModel& link,
                                      std::span<const double> x, int source, int destination,
                                      int h_max, std::uint64_t trials, std::uint64_t seed,
                                      int threads) {
    check_mc_args(trials, h_max);
    const auto al = active_links(topo, link, x, source, destination);
    const std::uint64_t chunks = (trials + kMonteCarloChunk - 1) / kMonteCarloChunk;
    std::vector<Moments> parts(chunks);
    const auto n = static_cast<std::int64_t>(chunks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
    for (std::int64_t c = 0; c < n; ++c) {
        const auto cu = static_cast<std::uint64_t>(c);
        parts[cu] = run_chunk(al, h_max, chunk_trials(trials, cu), make_stream(seed, cu));
    }
    return finish(parts);
}

MonteCarloEstimate monte_carlo_oracle_serial(const WsnTopology& topo, const LinkModel& link,
                                             std::span<const double> x, int source,
                                             int destination, int h_max, std::uint64_t trials,
                                             std::uint64_t seed) {
    check_mc_args(trials, h_max);
    const auto al = active_links(topo, link, x, source, destination);
    const std::uint64_t chunks = (trials + kMonteCarloChunk - 1) / kMonteCarloChunk;
    std::vector<Moments> parts;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        parts.push_back(run_chunk(al, h_max, chunk_trials(trials, c), make_stream(seed, c)));
    }
    return finish(parts);
}

// ---------------------------------------------------------------------------
// Problem adapter

void WsnInstance::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
    topology.validate();
    link.validate();
    if (levels.size() < 2) fail("wsn.levels: at least the levels 0 and 1 are required");
    if (levels.front() != 0.0 || levels.back() != 1.0) {
        fail("wsn.levels: the first level must be 0 and the last 1");
    }
    for (std::size_t i = 1; i < levels.size(); ++i) {
        if (!(levels[i - 1] < levels[i])) fail("wsn.levels: must be strictly increasing");
    }
    if (h_max < 1) fail("wsn.h_max: must be >= 1");
    if (first_subset < 0) fail("wsn.first_subset: must be >= 0");
    if (default_level == 0 || default_level < -1 ||
        default_level >= static_cast<int>(levels.size())) {
        fail("wsn.default_level: must name a non-zero level");
    }
    if (!(reliability_tolerance >= 0.0)) fail("wsn.reliability_tolerance: must be >= 0");
}

WsnModel::WsnModel(WsnInstance instance) : inst_(std::move(instance)) {
    inst_.validate();
    std::vector<bool> fixed(inst_.topology.size(), false);
    for (int s : inst_.topology.sources) fixed[s] = true;
    for (int d : inst_.topology.destinations) fixed[d] = true;
    for (int i = 0; i < static_cast<int>(fixed.size()); ++i) {
        if (!fixed[i]) eligible_.push_back(i);
    }
}

int WsnModel::forwarder_limit() const {
    const int n = static_cast<int>(eligible_.size());
    return inst_.max_forwarders < 0 ? n : std::min(inst_.max_forwarders, n);
}

int WsnModel::default_level() const {
    return inst_.default_level < 0 ? static_cast<int>(inst_.levels.size()) - 1 : inst_.default_level;
}

std::vector<double> WsnModel::probabilities(const Encoding& s) const {
    std::vector<double> x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) x[i] = inst_.levels[s[i]];
    return x;
}

int WsnModel::forwarder_count(const Encoding& s) const {
    return static_cast<int>(std::count_if(s.begin(), s.end(), [](int v) { return v > 0; }));
}

Triple WsnModel::criteria(const Encoding& s) const {
    const auto x = probabilities(s);
    const auto& topo = inst_.topology;
    Triple sum{};
    for (int src : topo.sources) {
        for (int dst : topo.destinations) {
            const auto t = pair_criteria(topo, inst_.link, x, src, dst, inst_.h_max);
            for (int c = 0; c < 3; ++c) sum[c] += t[c];
        }
    }
    const double pairs = static_cast<double>(topo.sources.size() * topo.destinations.size());
    for (auto& v : sum) v /= pairs;
    return sum;
}

std::vector<std::string> WsnModel::criterion_names() const {
    if (inst_.two_objective) return {"f_D", "f_E"};
    return {"f_R", "f_D", "f_E"};
}

std::optional<ObjectiveVector> WsnModel::evaluate(const Encoding& s) const {
    const auto c = criteria(s);
    if (!inst_.two_objective) return ObjectiveVector{c[0], c[1], c[2]};
    if (c[0] > inst_.reliability_tolerance) return std::nullopt;
    return ObjectiveVector{c[1], c[2]};
}

std::vector<Encoding> WsnModel::initial_front(int count, Rng& rng) const {
    const int highest = inst_.first_subset + count - 1;
    if (count < 1 || highest > forwarder_limit()) {
        throw std::invalid_argument(fmt::format(
            "wsn.first_subset: paths need up to {} forwarders but only {} are allowed", highest,
            forwarder_limit()));
    }
    const int e = static_cast<int>(eligible_.size());
    std::vector<Encoding> out;
    for (int k = 0; k < count; ++k) {
        auto order = eligible_;
        const int f = inst_.first_subset + k;
        for (int i = 0; i < f; ++i) std::swap(order[i], order[uniform_int(rng, i, e - 1)]);
        Encoding s(inst_.topology.size(), 0);
        for (int i = 0; i < f; ++i) s[order[i]] = default_level();
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Neighbor> WsnModel::neighborhood(const Encoding& s) const {
    const int levels = static_cast<int>(inst_.levels.size());
    std::vector<Neighbor> out;
    for (int i : eligible_) {
        if (s[i] == 0) continue;
        for (int j : eligible_) {
            if (s[j] != 0) continue;
            Encoding t = s;
            t[j] = s[i];
            t[i] = 0;
            out.push_back({{swap, i, j, s[i]}, std::move(t)});
        }
    }
    if (forwarder_count(s) < forwarder_limit()) {
        for (int j : eligible_) {
            if (s[j] != 0) continue;
            Encoding t = s;
            t[j] = default_level();
            out.push_back({{add, -1, j, t[j]}, std::move(t)});
        }
    }
    for (int i : eligible_) {
        if (s[i] == 0) continue;
        Encoding t = s;
        t[i] = 0;
        out.push_back({{remove, i, -1, 0}, std::move(t)});
    }
    for (int i : eligible_) {
        if (s[i] == 0) continue;
        for (int v = 1; v < levels; ++v) {
            if (v == s[i]) continue;
            Encoding t = s;
            t[i] = v;
            out.push_back({{level_change, i, i, v}, std::move(t)});
        }
    }
    return out;
}

TabuAttribute WsnModel::move_attribute(const Move& move, const Encoding& s) const {
    switch (move.kind) {
        case swap:
        case level_change:
            return {kNodeState, move.from, s[move.from]};
        case add:
            return {kAddSentinel, 0, 0};
        case remove:
            return {kDeleteSentinel, 0, 0};
    }
    throw std::invalid_argument("unknown WSN move");
}

std::vector<TabuAttribute> WsnModel::blocking_attributes(const Move& move, const Encoding&) const {
    switch (move.kind) {
        case swap:
            return {{kNodeState, move.to, move.value}};
        case add:
            return {{kAddSentinel, 0, 0}, {kNodeState, move.to, move.value}};
        case remove:
            return {{kDeleteSentinel, 0, 0}};
        case level_change:
            return {{kNodeState, move.from, move.value}};
    }
    throw std::invalid_argument("unknown WSN move");
}

bool WsnModel::valid(const Encoding& s) const {
    if (s.size() != inst_.topology.size()) return false;
    const int levels = static_cast<int>(inst_.levels.size());
    for (int v : s) {
        if (v < 0 || v >= levels) return false;
    }
    for (int i : inst_.topology.sources) {
        if (s[i] != 0) return false;
    }
    for (int i : inst_.topology.destinations) {
        if (s[i] != 0) return false;
    }
    return forwarder_count(s) <= forwarder_limit();
}

std::string WsnModel::format(const Encoding& s) const {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == 0) continue;
        if (!out.empty()) out += ';';
        out += fmt::format("{}:{}", i, s[i]);
    }
    return out;
}

Encoding WsnModel::parse(std::string_view text) const {
    auto bad = [] { return std::invalid_argument("malformed WSN encoding"); };
    Encoding s(inst_.topology.size(), 0);
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto end = std::min(text.find(';', pos), text.size());
        const auto tok = text.substr(pos, end - pos);
        const auto colon = tok.find(':');
        if (colon == std::string_view::npos) throw bad();
        int node = 0;
        int level = 0;
        auto r1 = std::from_chars(tok.data(), tok.data() + colon, node);
        auto r2 = std::from_chars(tok.data() + colon + 1, tok.data() + tok.size(), level);
        if (r1.ec != std::errc{} || r1.ptr != tok.data() + colon || r2.ec != std::errc{} ||
            r2.ptr != tok.data() + tok.size() || node < 0 ||
            node >= static_cast<int>(s.size()) || level < 1 || s[node] != 0) {
            throw bad();
        }
        s[node] = level;
        pos = end + 1;
    }
    if (!valid(s)) throw bad();
    return s;
}

BigInt WsnModel::enumeration_size() const {
    BigInt total = 0;
    for (int f = 0; f <= forwarder_limit(); ++f) {
        total += subset_size(static_cast<unsigned>(eligible_.size()), static_cast<unsigned>(f),
                             static_cast<unsigned>(inst_.levels.size() - 1), 1);
    }
    return total;
}

void WsnModel::enumerate(const std::function<void(const Encoding&)>& visit) const {
    const int levels = static_cast<int>(inst_.levels.size());
    const int cap = forwarder_limit();
    Encoding s(inst_.topology.size(), 0);
    auto rec = [&](auto&& self, std::size_t e, int active) -> void {
        if (e == eligible_.size()) {
            visit(s);
            return;
        }
        const int i = eligible_[e];
        s[i] = 0;
        self(self, e + 1, active);
        if (active < cap) {
            for (int v = 1; v < levels; ++v) {
                s[i] = v;
                self(self, e + 1, active + 1);
            }
        }
        s[i] = 0;
    };
    rec(rec, 0, 0);
}

}  // namespace pmots::wsn
