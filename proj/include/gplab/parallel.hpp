#ifndef GPLAB_PARALLEL_HPP
#define GPLAB_PARALLEL_HPP

#include <cstdlib>
#include <thread>

namespace gplab {

// Worker count for the parallel search and corpus drivers.  Controlled by
// GRADED_PRIME_LAB_THREADS; unset falls back to the hardware count.  Every
// parallel routine in this library is required to produce output identical
// to a single-threaded run, so this only affects speed.
inline unsigned worker_count() {
    if (const char* s = std::getenv("GRADED_PRIME_LAB_THREADS")) {
        long v = std::strtol(s, nullptr, 10);
        return v >= 1 ? static_cast<unsigned>(v) : 1u;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1u;
}

}  // namespace gplab

#endif
