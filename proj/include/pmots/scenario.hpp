#pragma once

#include "pmots/engine.hpp"
#include "pmots/oracle.hpp"
#include "pmots/wlp.hpp"
#include "pmots/wsn.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace pmots {

/// Invalid scenario content. The message starts with the offending field
/// path, e.g. "pmots.tenure_min: ...".
class ScenarioError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ProblemKind { toy, wlp, wsn };

struct WlpScenario {
    wlp::Floorplan floor;
    wlp::WlpInstance instance;
    std::optional<std::string> tensor_cache;  // directory for cached tensors
};

struct WsnScenario {
    wsn::WsnInstance instance;
    std::uint64_t validate_trials = 100000;
    std::uint64_t validate_seed = 1;
};

struct Scenario {
    ProblemKind kind = ProblemKind::toy;
    PmotsConfig pmots;
    unsigned checkpoint_every = 0;
    std::optional<std::string> output_dir;
    BigInt oracle_cap = kDefaultEnumerationCap;
    unsigned select_count = 15;

    int toy_size = 16;
    WlpScenario wlp;
    WsnScenario wsn;

    /// SHA-256 of the scenario file bytes.
    std::string content_hash;
};

/// Parses and fully validates a scenario. Throws ScenarioError.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& file);

/// Re-checks everything that depends on fields a command line may override
/// (seed, caps) and on cross-field constraints.
void validate_scenario(const Scenario& scenario);

std::string_view kind_name(ProblemKind kind);

/// Builds the problem model. WLP tensors are read from or written to the
/// scenario's tensor cache when one is configured.
std::unique_ptr<EnumerableProblem> build_problem(const Scenario& scenario);

}  // namespace pmots
