/*
 Copyright 2026 The risklq Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace risklq {

/// Number of workers to use. `requested` <= 0 means hardware concurrency.
/// The environment variable RISKLQ_THREADS, when set to a positive integer,
/// caps the result. Always at least 1.
int worker_count(int requested = 0);

/// Calls `fn(chunk)` for every chunk index in [0, n_chunks), spread over up
/// to `workers` threads that pull indices from a shared counter. Callers
/// store per-chunk results and reduce them in index order, which makes the
/// reduction independent of the worker count. The exception from the
/// lowest-numbered failing chunk is rethrown.
template <class Fn>
void parallel_chunks(std::size_t n_chunks, int workers, Fn&& fn) {
  if (n_chunks == 0) return;
  const std::size_t nthreads =
      std::min<std::size_t>(n_chunks, static_cast<std::size_t>(workers < 1 ? 1 : workers));
  std::vector<std::exception_ptr> errors(n_chunks);
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) {
      try {
        fn(c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  if (nthreads == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads - 1);
    for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace risklq
