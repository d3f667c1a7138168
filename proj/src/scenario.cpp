#include "pmots/scenario.hpp"

#include "pmots/hash.hpp"
#include "pmots/io.hpp"
#include "pmots/toy.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <set>

#include <fmt/core.h>

namespace pmots {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw ScenarioError(path + ": " + why);
}

// Strict view of a JSON object: every key must be consumed before finish().
class Section {
public:
    Section(const json& j, std::string path) : j_(&j), path_(std::move(path)) {
        if (!j.is_object()) fail(path_, "must be an object");
    }

    const std::string& path() const { return path_; }
    std::string at(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    const json* find(std::string_view key) {
        const auto it = j_->find(std::string(key));
        if (it == j_->end()) return nullptr;
        used_.insert(std::string(key));
        return &*it;
    }
    bool has(std::string_view key) const { return j_->contains(std::string(key)); }

    const json& need(std::string_view key) {
        const json* v = find(key);
        if (!v) fail(at(key), "required field is missing");
        return *v;
    }

    double number(std::string_view key, std::optional<double> def = std::nullopt) {
        const json* v = find(key);
        if (!v) {
            if (!def) fail(at(key), "required field is missing");
            return *def;
        }
        return as_number(*v, at(key));
    }

    std::int64_t integer(std::string_view key, std::optional<std::int64_t> def = std::nullopt) {
        const json* v = find(key);
        if (!v) {
            if (!def) fail(at(key), "required field is missing");
            return *def;
        }
        return as_integer(*v, at(key));
    }

    std::uint64_t unsigned_(std::string_view key, std::optional<std::uint64_t> def = std::nullopt) {
        const json* v = find(key);
        if (!v) {
            if (!def) fail(at(key), "required field is missing");
            return *def;
        }
        if (!v->is_number_unsigned()) fail(at(key), "expected a non-negative integer");
        return v->get<std::uint64_t>();
    }

    bool boolean(std::string_view key, bool def) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_boolean()) fail(at(key), "expected true or false");
        return v->get<bool>();
    }

    std::optional<std::string> string(std::string_view key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        if (!v->is_string()) fail(at(key), "expected a string");
        return v->get<std::string>();
    }

    std::vector<double> numbers(std::string_view key, std::optional<std::vector<double>> def = {}) {
        const json* v = find(key);
        if (!v) {
            if (!def) fail(at(key), "required field is missing");
            return *def;
        }
        if (!v->is_array()) fail(at(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v->size(); ++i) {
            out.push_back(as_number((*v)[i], fmt::format("{}[{}]", at(key), i)));
        }
        return out;
    }

    std::vector<int> ids(std::string_view key) {
        const json& v = need(key);
        if (!v.is_array()) fail(at(key), "expected an array of node indices");
        std::vector<int> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto n = as_integer(v[i], fmt::format("{}[{}]", at(key), i));
            if (n < 0 || n > std::numeric_limits<int>::max()) {
                fail(fmt::format("{}[{}]", at(key), i), "node index out of range");
            }
            out.push_back(static_cast<int>(n));
        }
        return out;
    }

    void finish() const {
        for (const auto& [key, value] : j_->items()) {
            if (!used_.count(key)) fail(at(key), "unknown key");
        }
    }

    static double as_number(const json& v, const std::string& path) {
        if (!v.is_number()) fail(path, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(path, "must be finite");
        return d;
    }

    static std::int64_t as_integer(const json& v, const std::string& path) {
        if (!v.is_number_integer()) fail(path, "expected an integer");
        return v.get<std::int64_t>();
    }

private:
    const json* j_;
    std::string path_;
    std::set<std::string> used_;
};

int small_int(std::int64_t v, const std::string& path) {
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        fail(path, "out of range");
    }
    return static_cast<int>(v);
}

unsigned small_unsigned(std::uint64_t v, const std::string& path) {
    if (v > std::numeric_limits<unsigned>::max()) fail(path, "out of range");
    return static_cast<unsigned>(v);
}

wlp::Point point(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) fail(path, "expected [x, y]");
    return {Section::as_number(v[0], path + "[0]"), Section::as_number(v[1], path + "[1]")};
}

wlp::PenaltyProfile profile(Section& parent, std::string_view key, wlp::PenaltyProfile def) {
    const json* v = parent.find(key);
    if (!v) return def;
    Section s(*v, parent.at(key));
    wlp::PenaltyProfile p;
    p.s_min = s.number("s_min", def.s_min);
    p.s_max = s.number("s_max", def.s_max);
    p.delta = s.number("delta", def.delta);
    p.orientation = def.orientation;
    if (auto o = s.string("orientation")) {
        if (*o == "maximize") {
            p.orientation = wlp::Orientation::maximize;
        } else if (*o == "minimize") {
            p.orientation = wlp::Orientation::minimize;
        } else {
            fail(s.at("orientation"), "expected \"maximize\" or \"minimize\"");
        }
    }
    s.finish();
    return p;
}

WlpScenario parse_wlp(const json& j) {
    Section s(j, "wlp");
    WlpScenario out;
    auto& inst = out.instance;

    {
        Section f(s.need("floor"), "wlp.floor");
        out.floor.width_m = f.number("width_m");
        out.floor.height_m = f.number("height_m");
        out.floor.meters_per_pixel = f.number("meters_per_pixel", 1.0);
        if (!(out.floor.width_m > 0.0)) fail(f.at("width_m"), "must be > 0");
        if (!(out.floor.height_m > 0.0)) fail(f.at("height_m"), "must be > 0");
        if (!(out.floor.meters_per_pixel > 0.0)) fail(f.at("meters_per_pixel"), "must be > 0");
        if (const json* walls = f.find("walls")) {
            if (!walls->is_array()) fail(f.at("walls"), "expected an array");
            for (std::size_t i = 0; i < walls->size(); ++i) {
                Section w((*walls)[i], fmt::format("wlp.floor.walls[{}]", i));
                wlp::Wall wall;
                wall.a = point(w.need("from"), w.at("from"));
                wall.b = point(w.need("to"), w.at("to"));
                wall.loss_db = w.number("loss_db");
                if (!(wall.loss_db >= 0.0)) fail(w.at("loss_db"), "must be >= 0");
                w.finish();
                out.floor.walls.push_back(wall);
            }
        }
        f.finish();
    }

    {
        const json& sites = s.need("sites");
        if (!sites.is_array()) fail("wlp.sites", "expected an array of [x, y]");
        for (std::size_t i = 0; i < sites.size(); ++i) {
            const auto path = fmt::format("wlp.sites[{}]", i);
            const auto p = point(sites[i], path);
            if (p.x < 0.0 || p.y < 0.0 || p.x > out.floor.width_m || p.y > out.floor.height_m) {
                fail(path, "lies outside the floor");
            }
            inst.sites.push_back(p);
        }
    }
    inst.powers_dbm = s.numbers("powers_dbm");
    inst.directions_deg = s.numbers("directions_deg", std::vector<double>{0.0});

    {
        Section b(s.need("blocks"), "wlp.blocks");
        const int nx = small_int(b.integer("nx"), b.at("nx"));
        const int ny = small_int(b.integer("ny"), b.at("ny"));
        b.finish();
        try {
            inst.blocks = wlp::make_block_grid(out.floor, nx, ny);
        } catch (const std::invalid_argument& e) {
            fail("wlp.blocks", e.what());
        }
    }

    if (const json* r = s.find("radio")) {
        Section rs(*r, "wlp.radio");
        inst.radio.pl0_db = rs.number("pl0_db", inst.radio.pl0_db);
        inst.radio.d0_m = rs.number("d0_m", inst.radio.d0_m);
        inst.radio.exponent = rs.number("exponent", inst.radio.exponent);
        inst.radio.directional = rs.boolean("directional", inst.radio.directional);
        inst.radio.front_to_back_db = rs.number("front_to_back_db", inst.radio.front_to_back_db);
        rs.finish();
    }

    if (const json* p = s.find("penalties")) {
        Section ps(*p, "wlp.penalties");
        inst.coverage = profile(ps, "coverage", inst.coverage);
        inst.interference = profile(ps, "interference", inst.interference);
        inst.qos = profile(ps, "qos", inst.qos);
        ps.finish();
    }

    const json& tiers = s.need("rate_tiers");
    if (!tiers.is_array()) fail("wlp.rate_tiers", "expected an array");
    for (std::size_t i = 0; i < tiers.size(); ++i) {
        Section t(tiers[i], fmt::format("wlp.rate_tiers[{}]", i));
        inst.rate_tiers.push_back({t.number("snr_db"), t.number("rate_bps")});
        if (!(inst.rate_tiers.back().rate_bps >= 0.0)) fail(t.at("rate_bps"), "must be >= 0");
        t.finish();
    }

    inst.users = s.number("users", inst.users);
    inst.noise_floor_dbm = s.number("noise_floor_dbm", inst.noise_floor_dbm);
    inst.default_power = small_int(s.integer("default_power", -1), s.at("default_power"));
    inst.default_direction = small_int(s.integer("default_direction", 0), s.at("default_direction"));
    inst.max_active = small_int(s.integer("max_active", -1), s.at("max_active"));
    inst.first_subset = small_int(s.integer("first_subset", 1), s.at("first_subset"));
    if (inst.max_active < -1) fail(s.at("max_active"), "must be >= 0, or -1 for no limit");
    out.tensor_cache = s.string("tensor_cache");
    s.finish();

    try {
        inst.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(e.what());
    }
    return out;
}

wsn::WsnTopology parse_topology(const json& j) {
    Section s(j, "wsn.topology");
    wsn::WsnTopology topo;
    const bool generated = s.has("generate");
    if (generated == s.has("nodes")) {
        fail("wsn.topology", "give exactly one of \"generate\" or \"nodes\"");
    }
    if (generated) {
        Section g(s.need("generate"), "wsn.topology.generate");
        wsn::TopologyParams p;
        p.density = g.number("density", p.density);
        p.count = small_int(g.integer("count", p.count), g.at("count"));
        p.radius = g.number("radius", p.radius);
        p.seed = g.unsigned_("seed", p.seed);
        p.power_w = g.number("power_w", p.power_w);
        p.energy_j = g.number("energy_j", p.energy_j);
        g.finish();
        try {
            topo = wsn::generate_topology(p);
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(std::string("wsn.topology.generate.") +
                                (std::string_view(e.what()).starts_with("wsn.")
                                     ? std::string(e.what()).substr(4)
                                     : std::string(e.what())));
        }
    } else {
        const json& nodes = s.need("nodes");
        if (!nodes.is_array()) fail("wsn.topology.nodes", "expected an array");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            Section n(nodes[i], fmt::format("wsn.topology.nodes[{}]", i));
            wsn::Node node;
            node.x = n.number("x");
            node.y = n.number("y");
            node.power_w = n.number("power_w", node.power_w);
            node.energy_j = n.number("energy_j", node.energy_j);
            topo.communicating.push_back(n.boolean("communicating", true));
            n.finish();
            topo.nodes.push_back(node);
        }
        if (!s.has("sources") || !s.has("destinations")) {
            fail("wsn.topology", "explicit node lists need \"sources\" and \"destinations\"");
        }
    }
    if (s.has("sources")) topo.sources = s.ids("sources");
    if (s.has("destinations")) topo.destinations = s.ids("destinations");
    s.finish();
    try {
        topo.validate();
    } catch (const std::invalid_argument& e) {
        // Topology diagnostics name the list ("wsn.sources"); point into the section.
        std::string msg = e.what();
        if (msg.starts_with("wsn.")) msg = "wsn.topology." + msg.substr(4);
        throw ScenarioError(msg);
    }
    return topo;
}

WsnScenario parse_wsn(const json& j) {
    Section s(j, "wsn");
    WsnScenario out;
    auto& inst = out.instance;
    inst.topology = parse_topology(s.need("topology"));

    if (const json* l = s.find("link")) {
        Section ls(*l, "wsn.link");
        auto& link = inst.link;
        link.a0 = ls.number("a0", link.a0);
        link.d0_m = ls.number("d0_m", link.d0_m);
        link.alpha = ls.number("alpha", link.alpha);
        link.noise_w = ls.number("noise_w", link.noise_w);
        link.beta = ls.number("beta", link.beta);
        link.packet_bits = ls.number("packet_bits", link.packet_bits);
        if (ls.has("gamma") && ls.has("spreading_factor")) {
            fail("wsn.link", "give at most one of \"gamma\" or \"spreading_factor\"");
        }
        link.gamma = ls.number("gamma", link.gamma);
        if (ls.has("spreading_factor")) {
            const double f = ls.number("spreading_factor");
            if (!(f >= 1.0)) fail(ls.at("spreading_factor"), "must be >= 1");
            link.gamma = 1.0 / f;
        }
        ls.finish();
    }
    inst.levels = s.numbers("levels", inst.levels);
    inst.h_max = small_int(s.integer("h_max", inst.h_max), s.at("h_max"));
    inst.max_forwarders = small_int(s.integer("max_forwarders", -1), s.at("max_forwarders"));
    if (inst.max_forwarders < -1) fail(s.at("max_forwarders"), "must be >= 0, or -1 for no limit");
    inst.first_subset = small_int(s.integer("first_subset", 1), s.at("first_subset"));
    inst.default_level = small_int(s.integer("default_level", -1), s.at("default_level"));
    inst.two_objective = s.boolean("two_objective", false);
    inst.reliability_tolerance = s.number("reliability_tolerance", inst.reliability_tolerance);
    if (const json* v = s.find("validate")) {
        Section vs(*v, "wsn.validate");
        out.validate_trials = vs.unsigned_("trials", out.validate_trials);
        out.validate_seed = vs.unsigned_("seed", out.validate_seed);
        vs.finish();
    }
    s.finish();
    try {
        inst.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(e.what());
    }
    return out;
}

BigInt parse_cap(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return BigInt(v.get<std::uint64_t>());
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) return BigInt(s);
    }
    fail(path, "expected a non-negative integer");
}

}  // namespace

std::string_view kind_name(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::toy:
            return "toy";
        case ProblemKind::wlp:
            return "wlp";
        case ProblemKind::wsn:
            return "wsn";
    }
    return "?";
}

Scenario parse_scenario(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario: malformed JSON: ") + e.what());
    }
    Section s(root, "");
    Scenario sc;
    sc.content_hash = sha256_hex(text);

    const auto problem = s.string("problem");
    if (!problem) fail("problem", "required field is missing");
    if (*problem == "toy") {
        sc.kind = ProblemKind::toy;
    } else if (*problem == "wlp") {
        sc.kind = ProblemKind::wlp;
    } else if (*problem == "wsn") {
        sc.kind = ProblemKind::wsn;
    } else {
        fail("problem", fmt::format("unknown problem kind '{}' (expected wlp, wsn or toy)", *problem));
    }

    sc.pmots.seed = s.unsigned_("seed", 1);
    sc.pmots.threads = small_int(s.integer("threads", 0), "threads");
    sc.output_dir = s.string("output_dir");

    if (const json* p = s.find("pmots")) {
        Section ps(*p, "pmots");
        auto& c = sc.pmots;
        c.paths = small_unsigned(ps.unsigned_("paths", 3), ps.at("paths"));
        c.iterations = small_unsigned(ps.unsigned_("iterations", 100), ps.at("iterations"));
        c.max_rank = small_unsigned(ps.unsigned_("max_rank", 1), ps.at("max_rank"));
        c.tenure_min = small_unsigned(ps.unsigned_("tenure_min", 5), ps.at("tenure_min"));
        c.tenure_max = small_unsigned(ps.unsigned_("tenure_max", 10), ps.at("tenure_max"));
        c.aspiration = ps.boolean("aspiration", false);
        sc.checkpoint_every =
            small_unsigned(ps.unsigned_("checkpoint_every", 0), ps.at("checkpoint_every"));
        ps.finish();
    } else {
        sc.pmots.paths = 3;
        sc.pmots.iterations = 100;
        sc.pmots.tenure_min = 5;
        sc.pmots.tenure_max = 10;
    }

    if (const json* o = s.find("oracle")) {
        Section os(*o, "oracle");
        if (const json* cap = os.find("cap")) sc.oracle_cap = parse_cap(*cap, "oracle.cap");
        os.finish();
    }
    if (const json* sel = s.find("select")) {
        Section ss(*sel, "select");
        sc.select_count = small_unsigned(ss.unsigned_("count", 15), ss.at("count"));
        ss.finish();
    }

    const std::string own(kind_name(sc.kind));
    for (const char* section : {"toy", "wlp", "wsn"}) {
        if (own != section && s.has(section)) {
            fail(section, fmt::format("section does not apply to problem '{}'", own));
        }
    }
    switch (sc.kind) {
        case ProblemKind::toy:
            if (const json* t = s.find("toy")) {
                Section ts(*t, "toy");
                sc.toy_size = small_int(ts.integer("size", 16), ts.at("size"));
                ts.finish();
            }
            break;
        case ProblemKind::wlp:
            sc.wlp = parse_wlp(s.need("wlp"));
            break;
        case ProblemKind::wsn:
            sc.wsn = parse_wsn(s.need("wsn"));
            break;
    }
    s.finish();
    validate_scenario(sc);
    return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::string text;
    try {
        text = read_file(file);
    } catch (const std::runtime_error& e) {
        throw ScenarioError(std::string("scenario: ") + e.what());
    }
    return parse_scenario(text);
}

void validate_scenario(const Scenario& sc) {
    try {
        sc.pmots.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(e.what());
    }
    if (sc.select_count < 1) fail("select.count", "must be >= 1");
    const int k = static_cast<int>(sc.pmots.paths);
    switch (sc.kind) {
        case ProblemKind::toy:
            if (sc.toy_size < 1) fail("toy.size", "must be >= 1 (the solution space is empty)");
            break;
        case ProblemKind::wlp: {
            const auto& inst = sc.wlp.instance;
            const int highest = inst.first_subset + k - 1;
            if (highest > inst.active_limit()) {
                fail("wlp.first_subset",
                     fmt::format("{} paths starting at {} active sites need {} sites, but at most {} "
                                 "may be active",
                                 k, inst.first_subset, highest, inst.active_limit()));
            }
            break;
        }
        case ProblemKind::wsn: {
            const auto& inst = sc.wsn.instance;
            const auto& topo = inst.topology;
            const int eligible = static_cast<int>(topo.size() - topo.sources.size() -
                                                  topo.destinations.size());
            const int limit = inst.max_forwarders < 0 ? eligible : std::min(inst.max_forwarders, eligible);
            const int highest = inst.first_subset + k - 1;
            if (highest > limit) {
                fail("wsn.first_subset",
                     fmt::format("{} paths starting at {} forwarders need {}, but at most {} may "
                                 "forward",
                                 k, inst.first_subset, highest, limit));
            }
            break;
        }
    }
}

std::unique_ptr<EnumerableProblem> build_problem(const Scenario& sc) {
    switch (sc.kind) {
        case ProblemKind::toy:
            return std::make_unique<ToyChain>(sc.toy_size);
        case ProblemKind::wlp: {
            const auto& w = sc.wlp;
            auto tensor = w.tensor_cache
                              ? wlp::load_or_generate_tensor(w.instance, w.floor, *w.tensor_cache,
                                                             sc.pmots.threads)
                              : wlp::generate_coverage_tensor(w.instance, w.floor, sc.pmots.threads);
            return std::make_unique<wlp::WlpModel>(w.instance, std::move(tensor));
        }
        case ProblemKind::wsn:
            return std::make_unique<wsn::WsnModel>(sc.wsn.instance);
    }
    throw std::logic_error("unknown problem kind");
}

}  // namespace pmots
