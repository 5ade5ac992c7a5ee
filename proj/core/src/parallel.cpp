#include "slsamp/parallel.hpp"

#include <algorithm>

namespace slsamp {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_default_threads(unsigned n) { g_threads.store(n); }

unsigned default_threads() {
    unsigned n = g_threads.load();
    if (n != 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(hw, 1u, 8u);
}

}  // namespace slsamp
