#include "kinhydro/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kinhydro {

unsigned worker_count()
{
  static const unsigned count = [] {
    if (const char* env = std::getenv("KINHYDRO_THREADS")) {
      const int v = std::atoi(env);
      if (v > 0)
        return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }();
  return count;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    threads.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i)
          body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
      }
    });
  }
  for (auto& t : threads)
    t.join();
  if (error)
    std::rethrow_exception(error);
}

}  // namespace kinhydro
