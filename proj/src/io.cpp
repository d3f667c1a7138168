#include "pmots/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/core.h>

namespace pmots {

using ojson = nlohmann::ordered_json;

std::vector<EvaluatedSolution> FrontTable::solutions() const {
    std::vector<EvaluatedSolution> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back({r.id, {}, r.objectives});
    return out;
}

FrontTable make_front_table(const ProblemAdapter& problem, const ParetoArchive& archive) {
    FrontTable t;
    t.criteria = problem.criterion_names();
    for (const auto& m : archive.sorted_by_id()) {
        t.rows.push_back({m.id, m.objectives, problem.format(m.encoding), {}});
    }
    return t;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, res.ptr};
}

std::string to_csv(const FrontTable& t) {
    std::string out = "id";
    for (const auto& c : t.criteria) out += ',' + c;
    out += ",encoding\n";
    for (const auto& r : t.rows) {
        out += std::to_string(r.id);
        for (double v : r.objectives) out += ',' + format_double(v);
        out += ',' + r.encoding + '\n';
    }
    return out;
}

std::string to_json(const FrontTable& t) {
    ojson arr = ojson::array();
    for (const auto& r : t.rows) {
        ojson o;
        o["id"] = r.id;
        for (std::size_t c = 0; c < t.criteria.size(); ++c) o[t.criteria[c]] = r.objectives[c];
        o["encoding"] = r.encoding;
        arr.push_back(std::move(o));
    }
    return arr.dump(1) + '\n';
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto end = line.find(sep, pos);
        if (end == std::string_view::npos) {
            out.push_back(line.substr(pos));
            return out;
        }
        out.push_back(line.substr(pos, end - pos));
        pos = end + 1;
    }
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

}  // namespace

FrontTable parse_csv(std::string_view text) {
    FrontTable t;
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw std::invalid_argument("line 1: missing header");

    const auto head = split(lines[0], ',');
    if (head.size() < 3 || head.front() != "id" || head.back() != "encoding") {
        throw std::invalid_argument("line 1: header must be id,<criteria...>,encoding");
    }
    t.header = std::string(lines[0]);
    for (std::size_t c = 1; c + 1 < head.size(); ++c) t.criteria.emplace_back(head[c]);

    for (std::size_t n = 1; n < lines.size(); ++n) {
        const auto cells = split(lines[n], ',');
        if (cells.size() != head.size()) {
            throw std::invalid_argument(fmt::format("line {}: expected {} fields, found {}", n + 1,
                                                    head.size(), cells.size()));
        }
        FrontRow r;
        if (!parse_number(cells[0], r.id)) {
            throw std::invalid_argument(fmt::format("line {}: bad id '{}'", n + 1, cells[0]));
        }
        for (std::size_t c = 1; c + 1 < cells.size(); ++c) {
            double v = 0.0;
            if (!parse_number(cells[c], v) || !std::isfinite(v)) {
                throw std::invalid_argument(
                    fmt::format("line {}: bad value '{}' for {}", n + 1, cells[c], head[c]));
            }
            r.objectives.push_back(v);
        }
        r.encoding = std::string(cells.back());
        r.raw = std::string(lines[n]);
        t.rows.push_back(std::move(r));
    }
    return t;
}

FrontTable parse_json(std::string_view text) {
    ojson arr;
    try {
        arr = ojson::parse(text);
    } catch (const ojson::parse_error& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
    if (!arr.is_array()) throw std::invalid_argument("front JSON must be an array");
    FrontTable t;
    for (std::size_t n = 0; n < arr.size(); ++n) {
        const auto& o = arr[n];
        auto bad = [&](const std::string& why) {
            return std::invalid_argument(fmt::format("element {}: {}", n, why));
        };
        if (!o.is_object() || o.size() < 3) throw bad("expected an object with id, criteria, encoding");
        auto it = o.begin();
        if (it.key() != "id" || !it->is_number_unsigned()) throw bad("first key must be an unsigned id");
        std::vector<std::string> names;
        FrontRow r;
        r.id = it->get<SolutionId>();
        for (++it; it != o.end() && it.key() != "encoding"; ++it) {
            if (!it->is_number()) throw bad(fmt::format("criterion '{}' is not a number", it.key()));
            names.push_back(it.key());
            r.objectives.push_back(it->get<double>());
        }
        if (it == o.end() || !it->is_string() || std::next(it) != o.end()) {
            throw bad("last key must be a string encoding");
        }
        r.encoding = it->get<std::string>();
        if (n == 0) {
            t.criteria = names;
        } else if (names != t.criteria) {
            throw bad("criteria differ from the first element");
        }
        if (names.empty()) throw bad("no criteria");
        r.raw = o.dump();
        t.rows.push_back(std::move(r));
    }
    return t;
}

FrontTable read_front(const std::filesystem::path& file) {
    const auto ext = file.extension().string();
    if (ext == ".csv") return parse_csv(read_file(file));
    if (ext == ".json") return parse_json(read_file(file));
    throw std::invalid_argument("front file must end in .csv or .json: " + file.string());
}

std::string select_csv(const FrontTable& t, const std::vector<std::size_t>& order) {
    std::string out = t.header.empty() ? to_csv({t.criteria, {}, {}}) : t.header + '\n';
    for (auto i : order) {
        const auto& r = t.rows.at(i);
        if (!r.raw.empty()) {
            out += r.raw + '\n';
        } else {
            FrontTable one{t.criteria, {r}, {}};
            const auto s = to_csv(one);
            out += s.substr(s.find('\n') + 1);
        }
    }
    return out;
}

std::string select_json(const FrontTable& t, const std::vector<std::size_t>& order) {
    ojson arr = ojson::array();
    for (auto i : order) {
        const auto& r = t.rows.at(i);
        if (!r.raw.empty()) {
            arr.push_back(ojson::parse(r.raw));
        } else {
            arr.push_back(ojson::parse(to_json({t.criteria, {r}, {}})).at(0));
        }
    }
    return arr.dump(1) + '\n';
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& file, std::string_view content) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("cannot write " + file.string());
}

}  // namespace pmots
