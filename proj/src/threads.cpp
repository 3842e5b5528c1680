#include "parrondo/threads.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace parrondo {

namespace {

int initial_count() {
    if (const char* env = std::getenv("PARRONDO_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return std::min(v, 64);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(static_cast<int>(hw), 1, 16);
}

int g_count = 0;

}  // namespace

int thread_count() {
    if (g_count == 0) g_count = initial_count();
    return g_count;
}

void set_thread_count(int v) { g_count = std::max(1, v); }

}  // namespace parrondo
