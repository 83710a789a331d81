#include "ksplit/kernels.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace ksplit::kernels {
namespace {
std::atomic<Exec> g_exec{Exec::kParallel};
}

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec exec) { g_exec.store(exec); }

int apply_thread_limit_from_env() {
  if (const char* env = std::getenv("KSPLIT_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap > 0) omp_set_num_threads(cap);
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return omp_get_max_threads();
}

}  // namespace ksplit::kernels
