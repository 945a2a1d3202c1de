#pragma once

#include <stdexcept>
#include <string>

namespace logbed {

// Bad user input: malformed templates, unknown flags, impossible parameter
// spaces. Maps to process exit code 1.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// I/O or internal failure while executing an otherwise valid request.
// Maps to process exit code 2.
struct RuntimeFailure : std::runtime_error {
    explicit RuntimeFailure(const std::string& what) : std::runtime_error(what) {}
};

// A dataset or label check did not hold. Maps to process exit code 3.
struct VerificationFailure : std::runtime_error {
    explicit VerificationFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace logbed
