#pragma once

#include <ostream>
#include <string>

#include "cli/config.hpp"

namespace lambdacav::cli {

struct RunOutput {
    std::string csv;
    int warnings = 0;
};

RunOutput run_mode(const RunConfig& cfg);

// Executes the invariant checks; prints one line per check. Returns the
// number of failures. level is "quick" or "full".
int run_validate(const std::string& level, int threads, std::ostream& os);

} // namespace lambdacav::cli
