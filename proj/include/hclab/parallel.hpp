#pragma once

// Index-placed parallel map. Results never depend on the thread count.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace hclab {

/// HCLAB_THREADS caps the worker count; default is the hardware concurrency.
inline unsigned thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HCLAB_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
        } catch (const std::exception&) {
        }
    }
    return hw;
}

/// Calls body(i) for i in [0, count); the first exception (lowest index) is rethrown.
template <class Body>
void parallel_for(std::size_t count, const Body& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_budget(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, const Fn& fn) {
    std::vector<T> out(count);
    parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

} // namespace hclab
