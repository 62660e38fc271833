// Copyright 2026 The hxz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HXZ_PARALLEL_HPP
#define HXZ_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hxz {

/// Calls f(i) for i in [0, count) on up to `jobs` threads. Results must be
/// written to per-index slots so that output does not depend on scheduling.
template <typename F>
void parallel_for(std::size_t count, std::size_t jobs, F &&f) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; i++) {
            f(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(jobs, count); t++) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next++;
                if (i >= count) {
                    return;
                }
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace hxz

#endif
