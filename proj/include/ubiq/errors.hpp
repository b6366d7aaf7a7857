#pragma once

#include <stdexcept>
#include <string>

namespace ubiq {

// Requested scale is finer than the configured or representable resolution.
struct resolution_error : std::runtime_error {
    explicit resolution_error(const std::string& what) : std::runtime_error(what) {}
};

// A computation would exceed a configured memory/point budget.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// An iterative construction could not complete within its search caps.
struct construction_error : std::runtime_error {
    explicit construction_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ubiq
