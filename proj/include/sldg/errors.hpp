#pragma once

#include <stdexcept>
#include <string>

namespace sldg {

/// Invalid user input: bad sizes, unknown identifiers, violated preconditions.
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure failed: NaN/Inf detected, root bracket lost, etc.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sldg
