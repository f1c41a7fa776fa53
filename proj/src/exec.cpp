#include "calmedns/exec.hpp"

#include <cstdlib>
#include <string>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace calmedns::exec {

namespace {
ExecPolicy g_policy = ExecPolicy::Parallel;
}

ExecPolicy policy() { return g_policy; }
void set_policy(ExecPolicy p) { g_policy = p; }

int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#if defined(_OPENMP)
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

void init_from_env() {
  const char* s = std::getenv("CALMEDNS_THREADS");
  if (s == nullptr) return;
  try {
    const int n = std::stoi(std::string(s));
    if (n > 0) set_threads(n);
    if (n == 1) set_policy(ExecPolicy::Serial);
  } catch (...) {
    // malformed value: keep defaults
  }
}

bool openmp_compiled() {
#if defined(_OPENMP)
  return true;
#else
  return false;
#endif
}

}  // namespace calmedns::exec
