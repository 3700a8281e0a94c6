#include "ruelle/parallel.hpp"

#include <algorithm>

namespace ruelle {

namespace {
int g_threads = 0;  // 0 = use hardware concurrency
}

int thread_count() {
  if (g_threads > 0) return g_threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_thread_count(int n) { g_threads = std::max(0, n); }

}  // namespace ruelle
