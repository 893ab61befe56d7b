#pragma once

#include <stdexcept>
#include <string>

namespace mcrt {

// Bad arguments / precondition violations (CLI exit code 3).
struct domain_error : std::invalid_argument {
    explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Harmonic system with an interior component touching no boundary.
struct unsolvable_error : std::runtime_error {
    explicit unsolvable_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Work refused because it exceeds a size cap (CLI exit code 4).
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Library-side consistency check failed; indicates a bug, not bad input.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace mcrt
