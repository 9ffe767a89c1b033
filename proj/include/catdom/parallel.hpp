#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace catdom {

/// Evaluates fn(0..count-1) on up to `workers` threads and returns the
/// results in index order. If several tasks throw, the exception of the
/// lowest index is rethrown, so outcomes do not depend on scheduling.
template <typename Fn>
auto parallel_map(std::size_t count, std::size_t workers, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<std::optional<Result>> slots(count);
  std::vector<std::exception_ptr> errors(count);

  auto run = [&](std::size_t i) {
    try {
      slots[i].emplace(fn(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::size_t n_threads = workers < count ? workers : count;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) run(i);
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace catdom
