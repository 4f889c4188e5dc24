#include "l2x/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace l2x::par {

namespace {

int g_jobs = 0;  // 0 means "not set yet"

int default_jobs() {
  if (const char* env = std::getenv("L2EXT_JOBS")) {
    try {
      int k = std::stoi(env);
      if (k >= 1) return k;
    } catch (...) {
    }
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

int jobs() {
  if (g_jobs == 0) set_jobs(default_jobs());
  return g_jobs;
}

void set_jobs(int k) {
  if (k < 1) k = 1;
  g_jobs = k;
#ifdef _OPENMP
  omp_set_num_threads(k);
#endif
}

}  // namespace l2x::par
