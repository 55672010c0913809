#pragma once

#include <stdexcept>
#include <string>

namespace taut0 {

// Bad user input: malformed files, malformed expressions, parameters out of
// range, contexts that cannot support the requested operation.  CLI exit 2.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid input that lands outside the supported calculus, e.g. a
// product of two tilde boundary terms.  CLI exit 3.
struct fragment_error : std::runtime_error {
    explicit fragment_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace taut0
