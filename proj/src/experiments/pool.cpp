#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "pqfreq/experiments.hpp"

namespace pqfreq {

int pool_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("NUMERIC_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<int>(std::min<long>(v, hw));
  }
  return hw;
}

void run_pool(std::size_t count, const std::function<void(std::size_t)>& fn, int threads) {
  if (count == 0) return;
  threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (error) return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace pqfreq
