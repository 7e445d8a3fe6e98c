#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>

#include "netstab/error.hpp"

namespace netstab {

/// Iteration cap taken from NETSTAB_MAX_ITERS when set, else `fallback`.
inline std::size_t iteration_cap(std::size_t fallback) {
    const char* raw = std::getenv("NETSTAB_MAX_ITERS");
    if (raw == nullptr || *raw == '\0') {
        return fallback;
    }
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (*end != '\0' || v == 0) {
        throw DomainError(std::string("NETSTAB_MAX_ITERS must be a positive integer, got '") + raw + "'");
    }
    return static_cast<std::size_t>(v);
}

} // namespace netstab
