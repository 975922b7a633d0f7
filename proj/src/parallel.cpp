#include "quadscat/parallel.hpp"

namespace quadscat {
namespace {
std::atomic<unsigned> g_threads{1};
}

void set_max_threads(unsigned count) { g_threads = std::max(1u, count); }
unsigned max_threads() { return g_threads; }

}  // namespace quadscat
