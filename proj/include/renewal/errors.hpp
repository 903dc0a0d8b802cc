// Error types shared across modules.

#pragma once

#include <stdexcept>
#include <string>

namespace renewal {

// Requested an exact-rational computation for a distribution that has no
// exact weight/tail representation (custom series).
struct ExactModeRequired : std::runtime_error {
    explicit ExactModeRequired(const std::string& what) : std::runtime_error(what) {}
};

// Operation needs a finite mean (e.g. tail generating function).
struct InfiniteMeanError : std::runtime_error {
    explicit InfiniteMeanError(const std::string& what) : std::runtime_error(what) {}
};

// Operation is specific to the infinite-mean case.
struct FiniteMeanError : std::runtime_error {
    explicit FiniteMeanError(const std::string& what) : std::runtime_error(what) {}
};

// Two results were combined that do not describe the same distribution.
struct DistributionMismatch : std::runtime_error {
    explicit DistributionMismatch(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace renewal
