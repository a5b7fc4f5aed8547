// Copyright 2026 The qspforge Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "qspforge/parallel.hpp"

namespace qspforge {

int resolve_threads(int requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char *env = std::getenv("QSPFORGE_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) {
                return v;
            }
        } catch (const std::exception &) {
            // fall through to the default
        }
    }
    return 1;
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)> &body) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(std::min(workers, n));
    for (std::size_t t = 0; t < std::min(workers, n); ++t) {
        pool.emplace_back(run);
    }
    for (auto &th : pool) {
        th.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

} // namespace qspforge
