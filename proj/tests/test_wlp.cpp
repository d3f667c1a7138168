#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pmots/rng.hpp"
#include "pmots/wlp.hpp"

#include <cmath>
#include <filesystem>
#include <set>

using namespace pmots;
using namespace pmots::wlp;

namespace {

// Instance with M sites on a line, N_P powers, N_D directions and L blocks.
// The tensor is left for the caller to fill.
WlpInstance line_instance(int m, int np, int nd, int l) {
    WlpInstance inst;
    for (int k = 0; k < m; ++k) inst.sites.push_back({double(k), 0.0});
    for (int p = 0; p < np; ++p) inst.powers_dbm.push_back(10.0 + 5.0 * p);
    inst.directions_deg.clear();
    for (int d = 0; d < nd; ++d) inst.directions_deg.push_back(360.0 * d / nd);
    for (int b = 0; b < l; ++b) {
        Block blk;
        blk.x = b;
        blk.center = {b + 0.5, 1.0};
        inst.blocks.push_back(blk);
    }
    inst.rate_tiers = {{5.0, 1e6}, {15.0, 11e6}};
    return inst;
}

CoverageTensor flat_tensor(const WlpInstance& inst, double value) {
    CoverageTensor t(inst.sites.size(), inst.powers_dbm.size(), inst.directions_deg.size(),
                     inst.blocks.size());
    for (auto& v : t.data()) v = value;
    return t;
}

Floorplan open_floor(double w, double h) {
    Floorplan f;
    f.width_m = w;
    f.height_m = h;
    f.meters_per_pixel = 1.0;
    return f;
}

Encoding random_solution(Rng& rng, int m, int settings) {
    Encoding s(m);
    for (auto& v : s) v = bernoulli(rng, 0.5) ? uniform_int(rng, 0, settings - 1) : kOff;
    return s;
}

// Hand-rolled segment test used to cross-check wall losses: parametric
// solve of p + t·r = q + u·s.
bool oracle_crosses(Point p, Point p2, Point q, Point q2) {
    const double rx = p2.x - p.x, ry = p2.y - p.y;
    const double sx = q2.x - q.x, sy = q2.y - q.y;
    const double denom = rx * sy - ry * sx;
    if (denom == 0.0) return false;  // the fixtures never use collinear walls
    const double t = ((q.x - p.x) * sy - (q.y - p.y) * sx) / denom;
    const double u = ((q.x - p.x) * ry - (q.y - p.y) * rx) / denom;
    return t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0;
}

}  // namespace

TEST_CASE("coverage tensor: reference distance and distance doubling") {
    WlpInstance inst;
    inst.sites = {{0.0, 0.0}};
    inst.powers_dbm = {20.0};
    const auto floor = open_floor(10, 10);
    CHECK(received_power_dbm(inst, floor, 0, 0, 0, {1.0, 0.0}) == doctest::Approx(-20.0));
    const double at2 = received_power_dbm(inst, floor, 0, 0, 0, {2.0, 0.0});
    const double at4 = received_power_dbm(inst, floor, 0, 0, 0, {4.0, 0.0});
    CHECK(at2 - at4 == doctest::Approx(20.0 * std::log10(2.0)));
    CHECK(-20.0 - at2 == doctest::Approx(6.0206).epsilon(1e-4));
    // Coincident block centre is clamped to d0.
    CHECK(received_power_dbm(inst, floor, 0, 0, 0, {0.0, 0.0}) == doctest::Approx(-20.0));
}

TEST_CASE("coverage tensor: wall losses match a segment-intersection oracle") {
    Floorplan floor = open_floor(10, 10);
    floor.walls = {{{5, 0}, {5, 10}, 5.0}, {{0, 5}, {10, 5}, 3.0}};
    WlpInstance inst;
    inst.sites = {{1.0, 1.0}};
    inst.powers_dbm = {20.0};
    const auto bare = open_floor(10, 10);

    // One 5 dB wall on the path.
    const double with = received_power_dbm(inst, floor, 0, 0, 0, {8.0, 2.0});
    const double without = received_power_dbm(inst, bare, 0, 0, 0, {8.0, 2.0});
    CHECK(without - with == doctest::Approx(5.0));

    auto rng = make_stream(21, 0);
    for (int t = 0; t < 2000; ++t) {
        const Point a{uniform01(rng) * 10, uniform01(rng) * 10};
        const Point b{uniform01(rng) * 10, uniform01(rng) * 10};
        double expected = 0.0;
        for (const auto& w : floor.walls) {
            if (oracle_crosses(a, b, w.a, w.b)) expected += w.loss_db;
        }
        REQUIRE(wall_loss_db(floor, a, b) == doctest::Approx(expected));
    }
}

TEST_CASE("coverage tensor: parallel equals serial, power monotone, cache round trip") {
    Floorplan floor = open_floor(20, 12);
    floor.walls = {{{10, 0}, {10, 8}, 4.0}, {{0, 6}, {6, 6}, 7.0}};
    WlpInstance inst;
    inst.sites = {{2, 2}, {15, 3}, {8, 10}, {18, 11}};
    inst.powers_dbm = {5.0, 12.0, 20.0};
    inst.directions_deg = {0.0, 90.0, 180.0, 270.0};
    inst.radio.directional = true;
    inst.blocks = make_block_grid(floor, 10, 6);

    const auto serial = generate_coverage_tensor_serial(inst, floor);
    CHECK(generate_coverage_tensor(inst, floor, 4) == serial);
    CHECK(generate_coverage_tensor(inst, floor, 1) == serial);

    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t d = 0; d < 4; ++d)
            for (std::size_t l = 0; l < inst.blocks.size(); ++l)
                for (std::size_t p = 1; p < 3; ++p)
                    REQUIRE(serial.at(k, p, d, l) >= serial.at(k, p - 1, d, l));

    const auto dir = std::filesystem::temp_directory_path() / "pmots-test-tensor-cache";
    std::filesystem::remove_all(dir);
    const auto first = load_or_generate_tensor(inst, floor, dir, 2);
    CHECK(first == serial);
    const auto file = dir / ("wlp-tensor-" + tensor_cache_key(inst, floor) + ".bin");
    CHECK(std::filesystem::exists(file));
    CHECK(read_tensor(file) == serial);
    CHECK(load_or_generate_tensor(inst, floor, dir, 2) == serial);

    auto moved = inst;
    moved.sites[0].x += 0.5;
    CHECK(tensor_cache_key(moved, floor) != tensor_cache_key(inst, floor));
    std::filesystem::remove_all(dir);
}

TEST_CASE("block grid: weights are normalized pixel areas") {
    const auto floor = open_floor(10, 7);
    const auto blocks = make_block_grid(floor, 3, 2);
    REQUIRE(blocks.size() == 6);
    double sum = 0.0;
    int pixels = 0;
    for (const auto& b : blocks) {
        sum += b.weight;
        pixels += b.sx * b.sy;
        CHECK(b.weight > 0.0);
    }
    CHECK(sum == doctest::Approx(6.0));
    CHECK(pixels == 70);
    CHECK_THROWS_AS(make_block_grid(floor, 11, 1), std::invalid_argument);
}

TEST_CASE("gain pattern: boresight, back lobe and omni") {
    RadioModel r;
    r.directional = true;
    r.front_to_back_db = 20.0;
    CHECK(gain_db(r, 90.0, 90.0) == doctest::Approx(0.0));
    CHECK(gain_db(r, 90.0, -90.0) == doctest::Approx(-20.0));
    CHECK(gain_db(r, 0.0, 90.0) == doctest::Approx(-10.0));
    r.directional = false;
    CHECK(gain_db(r, 0.0, 180.0) == 0.0);
}

TEST_CASE("utilities: coverage and interference") {
    auto inst = line_instance(3, 1, 1, 1);
    auto t = flat_tensor(inst, 0.0);
    t.at(0, 0, 0, 0) = -50.0;
    t.at(1, 0, 0, 0) = -60.0;
    t.at(2, 0, 0, 0) = -70.0;
    const WlpModel model(inst, t);

    CHECK(model.utility_coverage({0, kOff, kOff}, 0) == -50.0);
    CHECK(model.utility_coverage({kOff, 0, kOff}, 0) == -60.0);
    CHECK(model.utility_coverage({0, 0, kOff}, 0) == -50.0);
    CHECK(model.utility_coverage({kOff, kOff, kOff}, 0) == inst.noise_floor_dbm);

    CHECK(model.utility_interference({0, 0, 0}, 0) == -60.0);
    CHECK(model.utility_interference({kOff, 0, kOff}, 0) == inst.noise_floor_dbm);

    auto tied = t;
    tied.at(1, 0, 0, 0) = -50.0;
    const WlpModel tie_model(inst, tied);
    CHECK(tie_model.utility_interference({0, 0, kOff}, 0) == -50.0);
}

TEST_CASE("utilities: QoS apportionment") {
    SUBCASE("one site, one block, even split") {
        auto inst = line_instance(1, 1, 1, 1);
        inst.users = 10.0;
        const WlpModel model(inst, flat_tensor(inst, -60.0));  // SNR 40 dB -> 11 Mbit/s
        CHECK(model.utility_qos({0}, 0) == doctest::Approx(1.1e6));
        CHECK(model.utility_qos({kOff}, 0) == 0.0);
    }
    SUBCASE("two sites split four blocks 3:1") {
        auto inst = line_instance(2, 1, 1, 4);
        inst.users = 8.0;
        auto t = flat_tensor(inst, -95.0);
        // Site 0 serves blocks 0..2, site 1 serves block 3.
        for (int l = 0; l < 3; ++l) t.at(0, 0, 0, l) = -60.0;
        t.at(1, 0, 0, 3) = -60.0;
        const WlpModel model(inst, t);
        const auto d = model.qos_utilities({0, 0});
        CHECK(d[0] == doctest::Approx(11e6 / 6.0));
        CHECK(d[2] == doctest::Approx(11e6 / 6.0));
        CHECK(d[3] == doctest::Approx(11e6 / 2.0));
    }
    SUBCASE("rate tiers") {
        auto inst = line_instance(1, 1, 1, 1);
        const WlpModel model(inst, flat_tensor(inst, -60.0));
        CHECK(model.nominal_rate(4.9) == 0.0);
        CHECK(model.nominal_rate(5.0) == 1e6);
        CHECK(model.nominal_rate(14.0) == 1e6);
        CHECK(model.nominal_rate(15.0) == 11e6);
    }
}

TEST_CASE("penalty: boundaries, midpoint, bounds and monotonicity") {
    const PenaltyProfile up{-85.0, -70.0, 2.0, Orientation::maximize};
    CHECK(penalty(-70.0, up) == 0.0);
    CHECK(penalty(-85.0, up) == 2.0);
    CHECK(penalty(-77.5, up) == doctest::Approx(1.0));
    const PenaltyProfile down{-90.0, -70.0, 1.0, Orientation::minimize};
    CHECK(penalty(-90.0, down) == 0.0);
    CHECK(penalty(-70.0, down) == 1.0);
    CHECK(penalty(-80.0, down) == doctest::Approx(0.5));

    double prev_up = penalty(-200.0, up);
    double prev_down = penalty(-200.0, down);
    for (double u = -200.0; u <= 0.0; u += 0.25) {
        const double a = penalty(u, up);
        const double b = penalty(u, down);
        REQUIRE(a >= 0.0);
        REQUIRE(a <= 2.0);
        REQUIRE(b >= 0.0);
        REQUIRE(b <= 1.0);
        REQUIRE(a <= prev_up);
        REQUIRE(b >= prev_down);
        prev_up = a;
        prev_down = b;
    }
}

TEST_CASE("criterion: examples") {
    CHECK(criterion(std::vector<double>{0, 0, 0}, std::vector<double>{1, 1, 1}) == 0.0);
    CHECK(criterion(std::vector<double>{2.5}, std::vector<double>{1}) == 2.5);
    CHECK(criterion(std::vector<double>{3, 4}, std::vector<double>{1, 1}) == doctest::Approx(5.0));
    CHECK_THROWS_AS(criterion(std::vector<double>{1}, std::vector<double>{1, 1}), std::invalid_argument);
}

TEST_CASE("evaluate: degenerate and fully covered solutions") {
    auto inst = line_instance(1, 1, 1, 4);
    inst.coverage.delta = 3.0;
    const WlpModel model(inst, flat_tensor(inst, -60.0));  // above S_max everywhere
    const auto off = model.criteria({kOff});
    CHECK(off[0] == doctest::Approx(std::sqrt(4.0) * 3.0));
    CHECK(off[1] == 0.0);
    const auto on = model.criteria({0});
    CHECK(on[0] == 0.0);
    CHECK(on[1] == 0.0);
}

TEST_CASE("neighborhood: cardinality formula on random instances") {
    auto rng = make_stream(22, 0);
    for (int rep = 0; rep < 300; ++rep) {
        const int m = static_cast<int>(uniform_int(rng, 1, 30));
        const int np = static_cast<int>(uniform_int(rng, 1, 5));
        const int nd = static_cast<int>(uniform_int(rng, 1, 4));
        const auto inst = line_instance(m, np, nd, 1);
        const WlpModel model(inst, flat_tensor(inst, -60.0));
        const auto s = random_solution(rng, m, np * nd);
        const int n = model.active_count(s);
        const auto hood = model.neighborhood(s);
        REQUIRE(hood.size() == static_cast<std::size_t>(n * (m - n) + (m - n) + n +
                                                        n * (np - 1) + n * (nd - 1)));
        for (const auto& nb : hood) {
            REQUIRE(model.valid(nb.solution));
            int diff = 0;
            for (int i = 0; i < m; ++i) diff += nb.solution[i] != s[i];
            const int dn = model.active_count(nb.solution) - n;
            switch (nb.move.kind) {
                case swap:
                    REQUIRE(diff == 2);
                    REQUIRE(dn == 0);
                    REQUIRE(nb.solution[nb.move.to] == s[nb.move.from]);
                    break;
                case add:
                    REQUIRE(diff == 1);
                    REQUIRE(dn == 1);
                    REQUIRE(nb.solution[nb.move.to] == inst.default_setting());
                    break;
                case wlp::remove:
                    REQUIRE(diff == 1);
                    REQUIRE(dn == -1);
                    break;
                default:
                    REQUIRE(diff == 1);
                    REQUIRE(dn == 0);
            }
        }
    }
}

TEST_CASE("neighborhood: small examples") {
    const auto inst = line_instance(4, 2, 1, 1);
    const WlpModel model(inst, flat_tensor(inst, -60.0));
    CHECK(model.neighborhood({0, kOff, 1, kOff}).size() == 10);
    const auto empty = model.neighborhood({kOff, kOff, kOff, kOff});
    CHECK(empty.size() == 4);
    for (const auto& nb : empty) CHECK(nb.move.kind == add);
}

TEST_CASE("neighborhood: additions respect the active-site limit") {
    auto inst = line_instance(5, 1, 1, 1);
    inst.max_active = 2;
    const WlpModel model(inst, flat_tensor(inst, -60.0));
    for (const auto& nb : model.neighborhood({0, 0, kOff, kOff, kOff})) CHECK(nb.move.kind != add);
    CHECK_FALSE(model.valid({0, 0, 0, kOff, kOff}));
}

TEST_CASE("tabu attributes") {
    const auto inst = line_instance(9, 5, 2, 1);
    const WlpModel model(inst, flat_tensor(inst, -60.0));
    Encoding s(9, kOff);
    s[7] = model.setting(2, 1);
    s[3] = model.setting(1, 0);

    const Move sw{swap, 7, 0, s[7]};
    CHECK(model.move_attribute(sw, s) == TabuAttribute{kApState, 7, model.setting(2, 1)});
    // Moving the same AP state back to site 7 is what the swap blocks.
    const auto back = model.blocking_attributes({swap, 0, 7, model.setting(2, 1)}, s);
    CHECK(std::find(back.begin(), back.end(), TabuAttribute{kApState, 7, model.setting(2, 1)}) !=
          back.end());

    CHECK(model.move_attribute({add, -1, 1, inst.default_setting()}, s) ==
          TabuAttribute{kAddSentinel, 0, 0});
    CHECK(model.move_attribute({add, -1, 5, inst.default_setting()}, s) ==
          TabuAttribute{kAddSentinel, 0, 0});
    CHECK(model.move_attribute({wlp::remove, 3, -1, kOff}, s) == TabuAttribute{kDeleteSentinel, 0, 0});
    CHECK(model.move_attribute({power_change, 3, 3, model.setting(4, 0)}, s) ==
          TabuAttribute{kApState, 3, model.setting(1, 0)});
}

TEST_CASE("initial front: subset sizes and validity") {
    auto inst = line_instance(20, 2, 1, 1);
    inst.first_subset = 4;
    const WlpModel model(inst, flat_tensor(inst, -60.0));
    auto rng = make_stream(23, 0);
    const auto front = model.initial_front(15, rng);
    REQUIRE(front.size() == 15);
    std::set<int> counts;
    for (int k = 0; k < 15; ++k) {
        CHECK(model.valid(front[k]));
        CHECK(model.active_count(front[k]) == 4 + k);
        counts.insert(model.active_count(front[k]));
        for (int v : front[k]) CHECK((v == kOff || v == inst.default_setting()));
    }
    CHECK(counts.size() == 15);

    inst.first_subset = 3;
    const WlpModel one(inst, flat_tensor(inst, -60.0));
    const auto single = one.initial_front(1, rng);
    CHECK(one.active_count(single.at(0)) == 3);

    CHECK_THROWS_AS(model.initial_front(18, rng), std::invalid_argument);
}

TEST_CASE("criteria monotonicity when turning a site on") {
    Floorplan floor = open_floor(16, 16);
    floor.walls = {{{8, 0}, {8, 12}, 6.0}};
    WlpInstance inst;
    inst.sites = {{2, 2}, {14, 2}, {2, 14}, {14, 14}, {8, 8}, {5, 11}};
    inst.powers_dbm = {0.0, 10.0, 20.0};
    inst.directions_deg = {0.0, 180.0};
    inst.radio.directional = true;
    inst.blocks = make_block_grid(floor, 8, 8);
    inst.rate_tiers = {{10.0, 2e6}, {25.0, 24e6}};
    const WlpModel model(inst, generate_coverage_tensor(inst, floor));

    auto rng = make_stream(24, 0);
    for (int rep = 0; rep < 500; ++rep) {
        auto s = random_solution(rng, 6, 6);
        std::vector<int> off;
        for (int i = 0; i < 6; ++i)
            if (s[i] == kOff) off.push_back(i);
        if (off.empty()) continue;
        const auto before = model.criteria(s);
        s[off[uniform_int(rng, 0, off.size() - 1)]] = static_cast<int>(uniform_int(rng, 0, 5));
        const auto after = model.criteria(s);
        REQUIRE(after[0] <= before[0] + 1e-12);
        REQUIRE(after[1] >= before[1] - 1e-12);
    }
}

TEST_CASE("format and parse round trip") {
    const auto inst = line_instance(5, 3, 2, 1);
    const WlpModel model(inst, flat_tensor(inst, -60.0));
    const Encoding s{kOff, model.setting(2, 1), kOff, model.setting(0, 0), kOff};
    CHECK(model.format(s) == "-;2.1;-;0.0;-");
    CHECK(model.parse(model.format(s)) == s);
    CHECK_THROWS(model.parse("-;3.0;-;-;-"));
    CHECK_THROWS(model.parse("-;-"));
    CHECK_THROWS(model.parse("x;-;-;-;-"));
}

TEST_CASE("instance validation") {
    auto inst = line_instance(2, 1, 1, 1);
    inst.coverage.s_min = inst.coverage.s_max;
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
    inst = line_instance(2, 1, 1, 1);
    inst.blocks[0].weight = 0.0;
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
    inst = line_instance(2, 1, 1, 1);
    inst.powers_dbm.clear();
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
}
