#include "ascent/worker_pool.hpp"

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ascent {

void WorkerPool::parallel_for(std::size_t count,
                              const std::function<void(std::size_t)>& fn) const {
  const unsigned active = static_cast<unsigned>(
      std::min<std::size_t>(workers_, count == 0 ? 1 : count));
  if (active <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> threads;
  threads.reserve(active);
  for (unsigned w = 0; w < active; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += active) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ascent
