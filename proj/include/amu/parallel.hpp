// Copyright 2026 The amu-spectra Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace amu {

/// Thread count from AMU_SPECTRA_THREADS, else hardware concurrency.
inline unsigned default_thread_count() {
    if (const char *env = std::getenv("AMU_SPECTRA_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) {
                return static_cast<unsigned>(v);
            }
        } catch (...) {
        }
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

/**
 * Runs fn(i) for i in [0, count) on up to @p threads workers, each owning a
 * contiguous block. fn must only write to per-index outputs, so results do not
 * depend on the thread count. The first exception thrown is rethrown.
 */
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn &&fn) {
    threads = std::max(1U, threads);
    if (threads == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, count);
    const std::size_t block = (count + workers - 1) / workers;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t lo = w * block;
            const std::size_t hi = std::min(count, lo + block);
            try {
                for (std::size_t i = lo; i < hi; ++i) {
                    fn(i);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace amu
