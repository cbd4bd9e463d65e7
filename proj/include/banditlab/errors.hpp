#pragma once

#include <stdexcept>
#include <string>

namespace banditlab {

// Raised for invalid experiment, kernel, schedule or policy parameters.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a trace or CSV input file is malformed. `line` is 1-based, 0 if
// the problem is not tied to a particular line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace banditlab
