#include "czlab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace czlab {

int worker_count() {
  static const int cached = [] {
    if (const char* env = std::getenv("CZLAB_THREADS")) {
      const int v = std::atoi(env);
      if (v >= 1) return std::min(v, 256);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return cached;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body) {
  const int workers = worker_count();
  if (workers <= 1 || n < 256) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  const int used = static_cast<int>(std::min<std::int64_t>(workers, n));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(used));
  pool.reserve(static_cast<std::size_t>(used));
  for (int w = 0; w < used; ++w) {
    const std::int64_t lo = n * w / used, hi = n * (w + 1) / used;
    pool.emplace_back([lo, hi, &body, err = &errors[static_cast<std::size_t>(w)]] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        *err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace czlab
