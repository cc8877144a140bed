#include "sdeproj/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

#include "sdeproj/errors.hpp"

namespace sdeproj {

namespace {
std::atomic<int> g_threads{1};
}

int default_threads() { return g_threads.load(); }

void set_default_threads(int threads) {
  require(threads >= 1, ErrorCode::config, "thread count must be >= 1");
  g_threads.store(threads);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  int threads) {
  if (threads <= 0) threads = default_threads();
  if (count == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr first_error = nullptr;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t]() {
      const std::size_t lo = count * t / workers;
      const std::size_t hi = count * (t + 1) / workers;
      for (std::size_t i = lo; i < hi; ++i) {
        try {
          body(i);
        } catch (...) {
          bool expected = false;
          if (failed.compare_exchange_strong(expected, true)) {
            first_error = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sdeproj
