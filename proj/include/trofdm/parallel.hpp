// SPDX-License-Identifier: Apache-2.0
//
// trofdm: frequency-domain time-reversal MISO-OFDM simulation and NMSE analysis
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

#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace trofdm
{
    inline unsigned resolve_workers(unsigned requested)
    {
        if (requested > 0)
            return requested;
        return std::max(1u, std::thread::hardware_concurrency());
    }

    /// Calls fn(i) for i in [0, n) on `workers` threads. Work is claimed through an atomic
    /// counter; callers write results to slot i so the outcome is independent of scheduling.
    /// The first exception thrown by any call is rethrown after all threads join.
    template <typename Fn>
    void parallel_for(long n, unsigned workers, Fn &&fn)
    {
        workers = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max(1L, n)));
        if (workers <= 1)
        {
            for (long i = 0; i < n; ++i)
                fn(i);
            return;
        }
        std::atomic<long> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
        {
            pool.emplace_back([&] {
                for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                {
                    try
                    {
                        fn(i);
                    }
                    catch (...)
                    {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                        next.store(n);
                    }
                }
            });
        }
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }
}
