#pragma once

#include <stdexcept>
#include <string>

namespace cohortdiff {

// Malformed or missing input: files, records, parameters. Maps to CLI exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Statistically degenerate request: empty population, impossible split,
// zero-event curve. Maps to CLI exit code 3.
struct DegenerateError : std::runtime_error {
    explicit DegenerateError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace cohortdiff
