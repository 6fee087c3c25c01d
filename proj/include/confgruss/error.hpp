#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace confgruss {

/// Malformed expression text. `position` is a 0-based byte offset into the input.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position, std::string expected = {})
        : std::runtime_error(message), position_(position), expected_(std::move(expected)) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t position_;
    std::string expected_;
};

/// Evaluation outside the region where a function (or its derivative) is finite.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Rejected parameters: alpha outside (0,1], a bad interval, an empty check list, ...
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The random corpus could not produce a function passing the screen.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace confgruss
