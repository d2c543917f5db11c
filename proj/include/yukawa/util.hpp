// Copyright 2026 the yukawa2d authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace yukawa
{

using Vec2 = Eigen::Vector2d;

enum class Kernel
{
    G,  // scalar kernel K0(alpha r)
    H   // vector kernel K1(alpha r) r/|r|, contracted with vector strengths
};

// Counter-based RNG: stream name "splitmix64-counter".
// value(i) depends only on (seed, i), so independent streams are carved out
// of the counter space by offset. The CLI documents its stream layout.
struct SplitMix64
{
    uint64_t seed;

    explicit SplitMix64(uint64_t s) : seed(s) {}

    uint64_t value(uint64_t counter) const
    {
        uint64_t x = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // uniform in [0, 1)
    double uniform(uint64_t counter) const
    {
        return double(value(counter) >> 11) * 0x1.0p-53;
    }
};

// Smallest n' >= n that is even and factors into 2, 3, 5 (FFT-friendly).
inline int next_fast_size(int n)
{
    if (n < 2) return 2;
    for (int m = n + (n % 2);; m += 2)
    {
        int r = m;
        for (int p : {2, 3, 5})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

// Splits [0, n) into contiguous chunks, one per worker thread. Each index is
// processed by exactly one thread, so per-index results do not depend on the
// thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body)
{
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw < 1) hw = 1;
    std::size_t nthreads = std::min<std::size_t>(hw, n > 0 ? n : 1);
    if (nthreads <= 1)
    {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    std::size_t chunk = (n + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t)
    {
        std::size_t lo = t * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace yukawa
