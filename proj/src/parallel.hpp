// SPDX-License-Identifier: Apache-2.0
//
// holo - holographic MIMO channel synthesis and capacity evaluation
// Copyright (C) 2026 The holo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Index-parallel loop on a fixed set of std::threads. Work items are claimed from an
// atomic counter; results must be written to per-index slots by the callee.

#ifndef HOLO_SRC_PARALLEL_HPP
#define HOLO_SRC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace holo::detail
{
    // Calls fn(i) for every i in [0, count). If calls throw, the exception of the lowest
    // failing index is rethrown after all items ran, so the error is schedule-independent.
    template <typename Fn>
    void parallel_for(std::size_t count, int jobs, Fn &&fn)
    {
        const std::size_t workers = std::min<std::size_t>(std::size_t(std::max(jobs, 1)), std::max<std::size_t>(count, 1));
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                fn(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::mutex guard;
        std::size_t failed_index = count;
        std::exception_ptr failure;

        auto worker = [&]
        {
            while (true)
            {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(guard);
                    if (i < failed_index)
                    {
                        failed_index = i;
                        failure = std::current_exception();
                    }
                }
            }
        };

        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
    }
}

#endif
