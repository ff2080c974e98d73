#include "treeagg/runtime.hpp"

#include <atomic>
#include <cstdlib>

namespace treeagg::runtime {

namespace {

int initial_threads() {
  if (const char* env = std::getenv("TREEAGG_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

std::atomic<int>& slot() {
  static std::atomic<int> value{initial_threads()};
  return value;
}

}  // namespace

int threads() { return slot().load(std::memory_order_relaxed); }

void set_threads(int n) {
  slot().store(n >= 1 ? n : 1, std::memory_order_relaxed);
}

}  // namespace treeagg::runtime
