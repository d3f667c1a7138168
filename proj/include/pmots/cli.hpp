#pragma once

#include "pmots/scenario.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace pmots::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 2,
    kRuntimeError = 3,
    kOverCap = 4,
    kValidationFailed = 5,
};

inline constexpr const char* kOutputDirEnv = "PMOTS_OUTPUT_DIR";
inline constexpr const char* kDefaultOutputDir = "pmots-out";

/// Flag, then scenario field, then $PMOTS_OUTPUT_DIR, then "pmots-out".
std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag,
                                         const std::optional<std::string>& scenario);

/// Entry point shared by the executable and the tests. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pmots::cli
