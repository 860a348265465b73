#pragma once

#include <stdexcept>
#include <string>

namespace famdad {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr const char* kVersion = "0.1.0";

} // namespace famdad
