#pragma once

#include <optional>
#include <string>

#include "kwdeep/engine.h"
#include "kwdeep/source.h"

namespace kwdeep {

struct RunReport {
    std::optional<Answer> answer;
    AccessStats stats;
    std::size_t witnesses_attempted = 0;
    std::optional<double> elapsed_ms;  // left out of the JSON when unset
};

/// One JSON object, keys in a fixed order, pretty-printed with two spaces.
std::string to_json(const RunReport& report);

}  // namespace kwdeep
