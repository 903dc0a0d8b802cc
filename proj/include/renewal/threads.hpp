#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>

namespace renewal {

// Worker-thread cap: RENEWAL_KIT_THREADS env var; 0 or unset means auto.
inline std::size_t worker_threads() {
    if (const char* env = std::getenv("RENEWAL_KIT_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace renewal
