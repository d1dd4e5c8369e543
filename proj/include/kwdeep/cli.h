#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace kwdeep {

enum class Mode { analyze, query, reach, optimal, stats };

struct RunConfig {
    Mode mode = Mode::query;
    std::string schema_path;
    std::string instance_path;  // unused by analyze
    std::string query;          // unused by reach
    std::string constants;      // reach only
    std::optional<std::string> dot_dir;
    std::optional<std::string> log_path;
    bool seedless = false;  // no coverage pre-check before peeling
    bool timing = false;    // add elapsed_ms to reports
};

inline constexpr int exit_found = 0;
inline constexpr int exit_not_found = 1;
inline constexpr int exit_input_error = 2;

/// Runs one mode.  Reports go to `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace kwdeep
