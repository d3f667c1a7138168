#include "pmots/wlp.hpp"

#include "pmots/hash.hpp"
#include "pmots/oracle.hpp"
#include "pmots/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <fmt/core.h>

namespace pmots::wlp {

int Floorplan::width_px() const { return std::max(1, static_cast<int>(std::lround(width_m / meters_per_pixel))); }
int Floorplan::height_px() const { return std::max(1, static_cast<int>(std::lround(height_m / meters_per_pixel))); }

std::vector<Block> make_block_grid(const Floorplan& floor, int nx, int ny) {
    const int w = floor.width_px();
    const int h = floor.height_px();
    if (nx < 1 || ny < 1 || nx > w || ny > h) {
        throw std::invalid_argument(
            fmt::format("blocks: {}x{} grid does not fit a {}x{} pixel floor", nx, ny, w, h));
    }
    std::vector<Block> blocks;
    blocks.reserve(static_cast<std::size_t>(nx) * ny);
    double total_area = 0.0;
    for (int j = 0; j < ny; ++j) {
        const int y0 = j * h / ny;
        const int y1 = (j + 1) * h / ny;
        for (int i = 0; i < nx; ++i) {
            const int x0 = i * w / nx;
            const int x1 = (i + 1) * w / nx;
            Block b;
            b.x = x0;
            b.y = y0;
            b.sx = x1 - x0;
            b.sy = y1 - y0;
            b.weight = static_cast<double>(b.sx) * b.sy;
            b.center = {(x0 + 0.5 * b.sx) * floor.meters_per_pixel,
                        (y0 + 0.5 * b.sy) * floor.meters_per_pixel};
            total_area += b.weight;
            blocks.push_back(b);
        }
    }
    const double scale = static_cast<double>(blocks.size()) / total_area;
    for (auto& b : blocks) b.weight *= scale;
    return blocks;
}

double penalty(double u, const PenaltyProfile& pr) {
    if (pr.orientation == Orientation::maximize) {
        if (u >= pr.s_max) return 0.0;
        if (u <= pr.s_min) return pr.delta;
        return pr.delta * (pr.s_max - u) / (pr.s_max - pr.s_min);
    }
    if (u <= pr.s_min) return 0.0;
    if (u >= pr.s_max) return pr.delta;
    return pr.delta * (u - pr.s_min) / (pr.s_max - pr.s_min);
}

double criterion(std::span<const double> penalties, std::span<const double> weights) {
    if (penalties.size() != weights.size()) {
        throw std::invalid_argument("criterion: one penalty per block required");
    }
    double sum = 0.0;
    for (std::size_t l = 0; l < penalties.size(); ++l) sum += weights[l] * penalties[l] * penalties[l];
    return std::sqrt(sum);
}

double gain_db(const RadioModel& radio, double direction_deg, double bearing_deg) {
    if (!radio.directional) return 0.0;
    const double theta = (bearing_deg - direction_deg) * std::numbers::pi / 180.0;
    return -radio.front_to_back_db * 0.5 * (1.0 - std::cos(theta));
}

double path_loss_db(const RadioModel& radio, double distance_m) {
    const double d = std::max(distance_m, radio.d0_m);
    return radio.pl0_db + 10.0 * radio.exponent * std::log10(d / radio.d0_m);
}

namespace {

double cross(Point o, Point a, Point b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(Point a, Point b, Point p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

// Closed-segment intersection test (touching counts).
bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
    const int d1 = sign(cross(q1, q2, p1));
    const int d2 = sign(cross(q1, q2, p2));
    const int d3 = sign(cross(p1, p2, q1));
    const int d4 = sign(cross(p1, p2, q2));
    if (d1 * d2 < 0 && d3 * d4 < 0) return true;
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

double bearing_deg(Point from, Point to) {
    if (from.x == to.x && from.y == to.y) return 0.0;
    return std::atan2(to.y - from.y, to.x - from.x) * 180.0 / std::numbers::pi;
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

double wall_loss_db(const Floorplan& floor, Point a, Point b) {
    double loss = 0.0;
    for (const auto& w : floor.walls) {
        if (segments_intersect(a, b, w.a, w.b)) loss += w.loss_db;
    }
    return loss;
}

int WlpInstance::active_limit() const {
    const int m = static_cast<int>(sites.size());
    return max_active < 0 ? m : std::min(max_active, m);
}

int WlpInstance::default_setting() const {
    const int p = default_power < 0 ? static_cast<int>(powers_dbm.size()) - 1 : default_power;
    return p * static_cast<int>(directions_deg.size()) + default_direction;
}

void WlpInstance::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (sites.empty()) fail("wlp.sites: at least one candidate site required");
    if (powers_dbm.empty()) fail("wlp.powers_dbm: at least one power required");
    if (directions_deg.empty()) fail("wlp.directions_deg: at least one direction required");
    if (blocks.empty()) fail("wlp.blocks: at least one block required");
    for (const auto& b : blocks) {
        if (!(b.weight > 0.0)) fail("wlp.blocks: block weights must be positive");
    }
    auto check_profile = [&](const PenaltyProfile& p, const char* name) {
        if (!(p.s_min < p.s_max)) fail(fmt::format("wlp.penalties.{}: s_min must be < s_max", name));
        if (!(p.delta > 0.0)) fail(fmt::format("wlp.penalties.{}: delta must be > 0", name));
    };
    check_profile(coverage, "coverage");
    check_profile(interference, "interference");
    check_profile(qos, "qos");
    if (!(users > 0.0)) fail("wlp.users: must be > 0");
    if (!(radio.d0_m > 0.0)) fail("wlp.radio.d0_m: must be > 0");
    for (std::size_t i = 1; i < rate_tiers.size(); ++i) {
        if (!(rate_tiers[i - 1].snr_db < rate_tiers[i].snr_db)) {
            fail("wlp.rate_tiers: snr_db must be strictly increasing");
        }
    }
    if (default_power < -1 || default_power >= static_cast<int>(powers_dbm.size())) {
        fail("wlp.default_power: index out of range");
    }
    if (default_direction < 0 || default_direction >= static_cast<int>(directions_deg.size())) {
        fail("wlp.default_direction: index out of range");
    }
    if (first_subset < 0) fail("wlp.first_subset: must be >= 0");
}

CoverageTensor::CoverageTensor(std::size_t sites, std::size_t powers, std::size_t directions,
                               std::size_t blocks)
    : sites_(sites),
      powers_(powers),
      directions_(directions),
      blocks_(blocks),
      data_(sites * powers * directions * blocks, 0.0) {}

double received_power_dbm(const WlpInstance& inst, const Floorplan& floor, std::size_t k,
                          std::size_t p, std::size_t d, Point target) {
    const Point site = inst.sites[k];
    return inst.powers_dbm[p] +
           gain_db(inst.radio, inst.directions_deg[d], bearing_deg(site, target)) -
           path_loss_db(inst.radio, distance(site, target)) - wall_loss_db(floor, site, target);
}

namespace {

// Fills every (power, direction) entry for one (site, block) pair. The loss
// terms that do not depend on power or direction are computed once.
void fill_entry(CoverageTensor& t, const WlpInstance& inst, const Floorplan& floor, std::size_t k,
                std::size_t l) {
    const Point site = inst.sites[k];
    const Point target = inst.blocks[l].center;
    const double loss = path_loss_db(inst.radio, distance(site, target)) +
                        wall_loss_db(floor, site, target);
    const double bearing = bearing_deg(site, target);
    for (std::size_t d = 0; d < inst.directions_deg.size(); ++d) {
        const double g = gain_db(inst.radio, inst.directions_deg[d], bearing);
        for (std::size_t p = 0; p < inst.powers_dbm.size(); ++p) {
            t.at(k, p, d, l) = inst.powers_dbm[p] + g - loss;
        }
    }
}

}  // namespace

CoverageTensor generate_coverage_tensor_serial(const WlpInstance& inst, const Floorplan& floor) {
    CoverageTensor t(inst.sites.size(), inst.powers_dbm.size(), inst.directions_deg.size(),
                     inst.blocks.size());
    for (std::size_t k = 0; k < inst.sites.size(); ++k) {
        for (std::size_t l = 0; l < inst.blocks.size(); ++l) fill_entry(t, inst, floor, k, l);
    }
    return t;
}

CoverageTensor generate_coverage_tensor(const WlpInstance& inst, const Floorplan& floor,
                                        int threads) {
    CoverageTensor t(inst.sites.size(), inst.powers_dbm.size(), inst.directions_deg.size(),
                     inst.blocks.size());
    const auto blocks = static_cast<std::int64_t>(inst.blocks.size());
    const auto pairs = static_cast<std::int64_t>(inst.sites.size()) * blocks;
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
    for (std::int64_t i = 0; i < pairs; ++i) {
        fill_entry(t, inst, floor, static_cast<std::size_t>(i / blocks),
                   static_cast<std::size_t>(i % blocks));
    }
    return t;
}

std::string tensor_cache_key(const WlpInstance& inst, const Floorplan& floor) {
    std::ostringstream os;
    os.precision(17);
    os << "pmots-tensor-v1\n";
    os << floor.width_m << ' ' << floor.height_m << ' ' << floor.meters_per_pixel << '\n';
    for (const auto& w : floor.walls) {
        os << "w " << w.a.x << ' ' << w.a.y << ' ' << w.b.x << ' ' << w.b.y << ' ' << w.loss_db << '\n';
    }
    for (const auto& s : inst.sites) os << "s " << s.x << ' ' << s.y << '\n';
    for (double p : inst.powers_dbm) os << "p " << p << '\n';
    for (double d : inst.directions_deg) os << "d " << d << '\n';
    for (const auto& b : inst.blocks) {
        os << "b " << b.x << ' ' << b.y << ' ' << b.sx << ' ' << b.sy << ' ' << b.center.x << ' '
           << b.center.y << '\n';
    }
    const auto& r = inst.radio;
    os << "r " << r.pl0_db << ' ' << r.d0_m << ' ' << r.exponent << ' ' << r.directional << ' '
       << r.front_to_back_db << '\n';
    return sha256_hex(os.str());
}

namespace {
constexpr char kTensorMagic[8] = {'P', 'M', 'O', 'T', 'S', 'C', 'T', '1'};
}

void write_tensor(const CoverageTensor& t, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write tensor cache " + file.string());
    out.write(kTensorMagic, sizeof kTensorMagic);
    const std::uint64_t dims[4] = {t.sites(), t.powers(), t.directions(), t.blocks()};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    out.write(reinterpret_cast<const char*>(t.data().data()),
              static_cast<std::streamsize>(t.data().size() * sizeof(double)));
    if (!out) throw std::runtime_error("cannot write tensor cache " + file.string());
}

CoverageTensor read_tensor(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    char magic[8];
    std::uint64_t dims[4];
    if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kTensorMagic) ||
        !in.read(reinterpret_cast<char*>(dims), sizeof dims)) {
        throw std::runtime_error("malformed tensor cache " + file.string());
    }
    CoverageTensor t(dims[0], dims[1], dims[2], dims[3]);
    if (!in.read(reinterpret_cast<char*>(t.data().data()),
                 static_cast<std::streamsize>(t.data().size() * sizeof(double)))) {
        throw std::runtime_error("truncated tensor cache " + file.string());
    }
    return t;
}

CoverageTensor load_or_generate_tensor(const WlpInstance& inst, const Floorplan& floor,
                                       const std::filesystem::path& dir, int threads) {
    const auto file = dir / fmt::format("wlp-tensor-{}.bin", tensor_cache_key(inst, floor));
    if (std::filesystem::exists(file)) {
        auto t = read_tensor(file);
        if (t.sites() == inst.sites.size() && t.powers() == inst.powers_dbm.size() &&
            t.directions() == inst.directions_deg.size() && t.blocks() == inst.blocks.size()) {
            return t;
        }
    }
    auto t = generate_coverage_tensor(inst, floor, threads);
    std::filesystem::create_directories(dir);
    write_tensor(t, file);
    return t;
}

// ---------------------------------------------------------------------------

WlpModel::WlpModel(WlpInstance instance, CoverageTensor tensor)
    : inst_(std::move(instance)), tensor_(std::move(tensor)) {
    inst_.validate();
    if (tensor_.sites() != inst_.sites.size() || tensor_.powers() != inst_.powers_dbm.size() ||
        tensor_.directions() != inst_.directions_deg.size() ||
        tensor_.blocks() != inst_.blocks.size()) {
        throw std::invalid_argument("coverage tensor dimensions do not match the instance");
    }
    for (const auto& b : inst_.blocks) weights_.push_back(b.weight);
    settings_ = static_cast<int>(inst_.powers_dbm.size() * inst_.directions_deg.size());
}

int WlpModel::setting(int power, int direction) const {
    return power * static_cast<int>(inst_.directions_deg.size()) + direction;
}
int WlpModel::power_of(int s) const { return s / static_cast<int>(inst_.directions_deg.size()); }
int WlpModel::direction_of(int s) const { return s % static_cast<int>(inst_.directions_deg.size()); }

int WlpModel::active_count(const Encoding& s) const {
    return static_cast<int>(std::count_if(s.begin(), s.end(), [](int v) { return v != kOff; }));
}

double WlpModel::received(const Encoding& s, std::size_t site, std::size_t block) const {
    const int v = s[site];
    return tensor_.at(site, power_of(v), direction_of(v), block);
}

std::vector<WlpModel::ActiveRow> WlpModel::active_rows(const Encoding& s) const {
    std::vector<ActiveRow> rows;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] == kOff) continue;
        rows.push_back({static_cast<int>(k), tensor_.row(k, power_of(s[k]), direction_of(s[k]))});
    }
    return rows;
}

double WlpModel::utility_coverage(const Encoding& s, std::size_t block) const {
    double best = -INFINITY;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] != kOff) best = std::max(best, received(s, k, block));
    }
    return std::isinf(best) ? inst_.noise_floor_dbm : best;
}

double WlpModel::utility_interference(const Encoding& s, std::size_t block) const {
    double best = -INFINITY;
    double second = -INFINITY;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] == kOff) continue;
        const double r = received(s, k, block);
        if (r > best) {
            second = best;
            best = r;
        } else if (r > second) {
            second = r;
        }
    }
    return std::isinf(second) ? inst_.noise_floor_dbm : second;
}

double WlpModel::nominal_rate(double snr_db) const {
    double rate = 0.0;
    for (const auto& t : inst_.rate_tiers) {
        if (snr_db >= t.snr_db) rate = t.rate_bps;
    }
    return rate;
}

std::vector<double> WlpModel::qos_utilities(const Encoding& s) const {
    const std::size_t blocks = inst_.blocks.size();
    std::vector<double> out(blocks, 0.0);
    const auto rows = active_rows(s);
    if (rows.empty()) return out;

    std::vector<int> server(blocks, -1);
    std::vector<double> best(blocks, -INFINITY);
    std::vector<double> served_weight(s.size(), 0.0);
    double total_weight = 0.0;
    for (std::size_t l = 0; l < blocks; ++l) {
        for (const auto& row : rows) {
            const double r = row.received[l];
            if (r > best[l]) {
                best[l] = r;
                server[l] = row.site;
            }
        }
        served_weight[server[l]] += weights_[l];
        total_weight += weights_[l];
    }
    for (std::size_t l = 0; l < blocks; ++l) {
        const double users = inst_.users * served_weight[server[l]] / total_weight;
        out[l] = nominal_rate(best[l] - inst_.noise_floor_dbm) / users;
    }
    return out;
}

double WlpModel::utility_qos(const Encoding& s, std::size_t block) const {
    return qos_utilities(s).at(block);
}

ObjectiveVector WlpModel::criteria(const Encoding& s) const {
    const std::size_t blocks = inst_.blocks.size();
    const auto qos = qos_utilities(s);
    const auto rows = active_rows(s);
    std::vector<double> pc(blocks), pi(blocks), pq(blocks);
    for (std::size_t l = 0; l < blocks; ++l) {
        double best = -INFINITY;
        double second = -INFINITY;
        for (const auto& row : rows) {
            const double r = row.received[l];
            if (r > best) {
                second = best;
                best = r;
            } else if (r > second) {
                second = r;
            }
        }
        pc[l] = penalty(std::isinf(best) ? inst_.noise_floor_dbm : best, inst_.coverage);
        pi[l] = penalty(std::isinf(second) ? inst_.noise_floor_dbm : second, inst_.interference);
        pq[l] = penalty(qos[l], inst_.qos);
    }
    return {criterion(pc, weights_), criterion(pi, weights_), criterion(pq, weights_)};
}

std::vector<Encoding> WlpModel::initial_front(int count, Rng& rng) const {
    const int m = static_cast<int>(inst_.sites.size());
    const int highest = inst_.first_subset + count - 1;
    if (count < 1 || highest > inst_.active_limit()) {
        throw std::invalid_argument(fmt::format(
            "wlp.first_subset: paths need up to {} active sites but only {} are allowed",
            highest, inst_.active_limit()));
    }
    std::vector<Encoding> out;
    for (int k = 0; k < count; ++k) {
        const int n = inst_.first_subset + k;
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 0);
        // Partial Fisher-Yates: the first n entries are a uniform n-subset.
        for (int i = 0; i < n; ++i) {
            std::swap(order[i], order[uniform_int(rng, i, m - 1)]);
        }
        Encoding s(m, kOff);
        for (int i = 0; i < n; ++i) s[order[i]] = inst_.default_setting();
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Neighbor> WlpModel::neighborhood(const Encoding& s) const {
    const int m = static_cast<int>(s.size());
    const int n = active_count(s);
    const int np = static_cast<int>(inst_.powers_dbm.size());
    const int nd = static_cast<int>(inst_.directions_deg.size());
    std::vector<Neighbor> out;
    out.reserve(static_cast<std::size_t>(n) * (m - n) + m + n * (np + nd));

    for (int i = 0; i < m; ++i) {
        if (s[i] == kOff) continue;
        for (int j = 0; j < m; ++j) {
            if (s[j] != kOff) continue;
            Encoding t = s;
            t[j] = s[i];
            t[i] = kOff;
            out.push_back({{swap, i, j, s[i]}, std::move(t)});
        }
    }
    if (n < inst_.active_limit()) {
        for (int j = 0; j < m; ++j) {
            if (s[j] != kOff) continue;
            Encoding t = s;
            t[j] = inst_.default_setting();
            out.push_back({{add, -1, j, t[j]}, std::move(t)});
        }
    }
    for (int i = 0; i < m; ++i) {
        if (s[i] == kOff) continue;
        Encoding t = s;
        t[i] = kOff;
        out.push_back({{remove, i, -1, kOff}, std::move(t)});
    }
    for (int i = 0; i < m; ++i) {
        if (s[i] == kOff) continue;
        const int p0 = power_of(s[i]);
        const int d0 = direction_of(s[i]);
        for (int p = 0; p < np; ++p) {
            if (p == p0) continue;
            Encoding t = s;
            t[i] = setting(p, d0);
            out.push_back({{power_change, i, i, t[i]}, std::move(t)});
        }
        for (int d = 0; d < nd; ++d) {
            if (d == d0) continue;
            Encoding t = s;
            t[i] = setting(p0, d);
            out.push_back({{direction_change, i, i, t[i]}, std::move(t)});
        }
    }
    return out;
}

TabuAttribute WlpModel::move_attribute(const Move& move, const Encoding& s) const {
    switch (move.kind) {
        case swap:
            return {kApState, move.from, s[move.from]};
        case add:
            return {kAddSentinel, 0, 0};
        case remove:
            return {kDeleteSentinel, 0, 0};
        case power_change:
        case direction_change:
            return {kApState, move.from, s[move.from]};
    }
    throw std::invalid_argument("unknown WLP move");
}

std::vector<TabuAttribute> WlpModel::blocking_attributes(const Move& move, const Encoding&) const {
    switch (move.kind) {
        case swap:
            return {{kApState, move.to, move.value}};
        case add:
            return {{kAddSentinel, 0, 0}, {kApState, move.to, move.value}};
        case remove:
            return {{kDeleteSentinel, 0, 0}};
        case power_change:
        case direction_change:
            return {{kApState, move.from, move.value}};
    }
    throw std::invalid_argument("unknown WLP move");
}

bool WlpModel::valid(const Encoding& s) const {
    if (s.size() != inst_.sites.size()) return false;
    for (int v : s) {
        if (v != kOff && (v < 0 || v >= settings_)) return false;
    }
    return active_count(s) <= inst_.active_limit();
}

std::string WlpModel::format(const Encoding& s) const {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ';';
        out += s[i] == kOff ? std::string("-")
                            : fmt::format("{}.{}", power_of(s[i]), direction_of(s[i]));
    }
    return out;
}

Encoding WlpModel::parse(std::string_view text) const {
    Encoding s;
    auto bad = [] { return std::invalid_argument("malformed WLP encoding"); };
    std::size_t pos = 0;
    while (true) {
        const auto end = std::min(text.find(';', pos), text.size());
        const auto tok = text.substr(pos, end - pos);
        if (tok == "-") {
            s.push_back(kOff);
        } else {
            const auto dot = tok.find('.');
            if (dot == std::string_view::npos) throw bad();
            int p = 0, d = 0;
            auto r1 = std::from_chars(tok.data(), tok.data() + dot, p);
            auto r2 = std::from_chars(tok.data() + dot + 1, tok.data() + tok.size(), d);
            if (r1.ec != std::errc{} || r1.ptr != tok.data() + dot || r2.ec != std::errc{} ||
                r2.ptr != tok.data() + tok.size() || p < 0 || d < 0 ||
                p >= static_cast<int>(inst_.powers_dbm.size()) ||
                d >= static_cast<int>(inst_.directions_deg.size())) {
                throw bad();
            }
            s.push_back(setting(p, d));
        }
        if (end == text.size()) break;
        pos = end + 1;
    }
    if (!valid(s)) throw bad();
    return s;
}

BigInt WlpModel::enumeration_size() const {
    BigInt total = 0;
    for (int n = 0; n <= inst_.active_limit(); ++n) {
        total += subset_size(static_cast<unsigned>(inst_.sites.size()), static_cast<unsigned>(n),
                             static_cast<unsigned>(inst_.powers_dbm.size()),
                             static_cast<unsigned>(inst_.directions_deg.size()));
    }
    return total;
}

void WlpModel::enumerate(const std::function<void(const Encoding&)>& visit) const {
    const int m = static_cast<int>(inst_.sites.size());
    const int cap = inst_.active_limit();
    Encoding s(m, kOff);
    // Depth-first over sites with values ordered off < 0 < 1 < ...; this is
    // lexicographic order of the encoding.
    auto rec = [&](auto&& self, int i, int active) -> void {
        if (i == m) {
            visit(s);
            return;
        }
        s[i] = kOff;
        self(self, i + 1, active);
        if (active < cap) {
            for (int v = 0; v < settings_; ++v) {
                s[i] = v;
                self(self, i + 1, active + 1);
            }
        }
        s[i] = kOff;
    };
    rec(rec, 0, 0);
}

}  // namespace pmots::wlp
