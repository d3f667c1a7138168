#pragma once

#include "pmots/pareto.hpp"
#include "pmots/problem.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pmots {

/// One exported archive member. `raw` holds the source text of the row when
/// the table was read from a file, so rows can be passed through verbatim.
struct FrontRow {
    SolutionId id = 0;
    ObjectiveVector objectives;
    std::string encoding;
    std::string raw;
};

struct FrontTable {
    std::vector<std::string> criteria;
    std::vector<FrontRow> rows;
    std::string header;  // CSV header line as read, empty otherwise

    std::vector<EvaluatedSolution> solutions() const;
};

/// Rows sorted by id, encodings in the problem's text form.
FrontTable make_front_table(const ProblemAdapter& problem, const ParetoArchive& archive);

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

/// Header `id,<criteria...>,encoding`, '\n' line endings.
std::string to_csv(const FrontTable& table);
/// Array of objects with keys id, <criteria...>, encoding, in that order.
std::string to_json(const FrontTable& table);

/// Both throw std::invalid_argument with a line or element number.
FrontTable parse_csv(std::string_view text);
FrontTable parse_json(std::string_view text);

/// Dispatches on the extension (.csv or .json).
FrontTable read_front(const std::filesystem::path& file);

/// The selected rows in the given order, copied verbatim from `table`.
std::string select_csv(const FrontTable& table, const std::vector<std::size_t>& order);
std::string select_json(const FrontTable& table, const std::vector<std::size_t>& order);

std::string read_file(const std::filesystem::path& file);
void write_file(const std::filesystem::path& file, std::string_view content);

}  // namespace pmots
