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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "yukawa/realspace.hpp"

using namespace yukawa;

namespace
{

constexpr double kL = 6.283185307179586;

PointCloud random_cloud(int n, double span, uint64_t seed)
{
    const SplitMix64 rng{seed};
    PointCloud c;
    const uint64_t nn = uint64_t(n);
    for (uint64_t i = 0; i < nn; ++i)
        c.positions.emplace_back(rng.uniform(2 * i) * span, rng.uniform(2 * i + 1) * span);
    for (uint64_t i = 0; i < nn; ++i) c.strengths_scalar.push_back(rng.uniform(2 * nn + i));
    for (uint64_t i = 0; i < nn; ++i)
        c.strengths_vector.emplace_back(rng.uniform(3 * nn + 2 * i),
                                        rng.uniform(3 * nn + 2 * i + 1));
    return c;
}

// Reference truncated sums by exhaustive pairs and explicit image shifts.
double brute_real_g(const PointCloud& src, const Vec2& x, const KernelParams& p, double r_c,
                    bool periodic, bool include_self)
{
    const int s_max = periodic ? 1 : 0;
    double acc = 0.0;
    for (std::size_t s = 0; s < src.size(); ++s)
        for (int sy = -s_max; sy <= s_max; ++sy)
            for (int sx = -s_max; sx <= s_max; ++sx) {
                const Vec2 sep = x - src.positions[s] - Vec2(sx * p.box_length, sy * p.box_length);
                const double r = sep.norm();
                if (r >= r_c) continue;
                if (r == 0.0) {
                    if (include_self) acc += g_self(p) * src.strengths_scalar[s];
                    continue;
                }
                acc += g_real(r, p) * src.strengths_scalar[s];
            }
    return acc;
}

double brute_real_h(const PointCloud& src, const Vec2& x, const KernelParams& p, double r_c,
                    bool periodic)
{
    const int s_max = periodic ? 1 : 0;
    double acc = 0.0;
    for (std::size_t s = 0; s < src.size(); ++s)
        for (int sy = -s_max; sy <= s_max; ++sy)
            for (int sx = -s_max; sx <= s_max; ++sx) {
                const Vec2 sep = x - src.positions[s] - Vec2(sx * p.box_length, sy * p.box_length);
                if (sep.squaredNorm() == 0.0 || sep.norm() >= r_c) continue;
                acc += h_real(sep, p).dot(src.strengths_vector[s]);
            }
    return acc;
}

}  // namespace

TEST_CASE("truncated screened sums match exhaustive enumeration")
{
    const PointCloud src = random_cloud(50, kL, 17);
    const KernelParams p{1.0, 2.0, kL};
    std::vector<Vec2> targets = src.positions;  // coincident, plus off-lattice extras
    targets.emplace_back(0.1, 5.9);
    targets.emplace_back(3.0, 3.0);

    for (bool periodic : {true, false}) {
        for (double r_c : {0.8, 2.5}) {
            const RealSumConfig cfg{r_c, true};
            const auto ug = real_sum_g(src, targets, p, cfg, periodic);
            const auto uh = real_sum_h(src, targets, p, cfg, periodic);
            for (std::size_t t = 0; t < targets.size(); ++t) {
                CHECK(ug[t] == doctest::Approx(
                                   brute_real_g(src, targets[t], p, r_c, periodic, true))
                                   .epsilon(1e-12));
                CHECK(uh[t] == doctest::Approx(brute_real_h(src, targets[t], p, r_c, periodic))
                                   .epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("self term included exactly once, and only on request")
{
    PointCloud src;
    src.positions.emplace_back(2.0, 2.0);
    src.positions.emplace_back(2.6, 2.0);
    src.strengths_scalar = {0.7, 1.1};
    const KernelParams p{1.0, 3.0, kL};
    const std::vector<Vec2> targets{Vec2(2.0, 2.0)};

    const auto with_self = real_sum_g(src, targets, p, RealSumConfig{1.0, true}, true);
    const auto without = real_sum_g(src, targets, p, RealSumConfig{1.0, false}, true);
    CHECK(with_self[0] - without[0] == doctest::Approx(g_self(p) * 0.7).epsilon(1e-14));
    CHECK(without[0] == doctest::Approx(g_real(0.6, p) * 1.1).epsilon(1e-13));
}

TEST_CASE("two distinct sources on one target point are rejected")
{
    PointCloud src;
    src.positions.emplace_back(1.0, 1.0);
    src.positions.emplace_back(1.0, 1.0);
    src.strengths_scalar = {1.0, 1.0};
    const KernelParams p{1.0, 2.0, kL};
    const std::vector<Vec2> targets{Vec2(1.0, 1.0)};
    CHECK_THROWS_AS(real_sum_g(src, targets, p, RealSumConfig{1.0, true}, true),
                    std::domain_error);
}

TEST_CASE("periodic direct sum: automatic shells agree with a generous fixed count")
{
    const PointCloud src = random_cloud(20, kL, 29);
    const KernelParams p{1.0, 1.0, kL};
    std::vector<Vec2> targets{Vec2(0.3, 0.4), Vec2(5.0, 1.0)};
    for (Kernel kernel : {Kernel::G, Kernel::H}) {
        const auto automatic = direct_sum(src, targets, p, DirectMode{true, -1}, kernel);
        const auto fixed = direct_sum(src, targets, p, DirectMode{true, 9}, kernel);
        for (std::size_t t = 0; t < targets.size(); ++t)
            CHECK(automatic[t] == doctest::Approx(fixed[t]).epsilon(1e-13));
    }
}

TEST_CASE("free-space direct sum matches a hand loop and skips self pairs")
{
    const PointCloud src = random_cloud(30, kL, 31);
    const KernelParams p{1.5, 1.0, kL};
    std::vector<Vec2> targets = src.positions;
    const auto u = direct_sum(src, targets, p, DirectMode{false, -1}, Kernel::G);
    for (std::size_t t = 0; t < targets.size(); ++t) {
        double acc = 0.0;
        for (std::size_t s = 0; s < src.size(); ++s) {
            if (s == t) continue;
            acc += g_direct((targets[t] - src.positions[s]).norm(), p) *
                   src.strengths_scalar[s];
        }
        CHECK(u[t] == doctest::Approx(acc).epsilon(1e-13));
    }
}

TEST_CASE("truncation radius solves the decay envelope")
{
    for (double alpha : {1.0, 20.0}) {
        for (double eps : {1e-8, 1e-12}) {
            const double r = truncation_radius(alpha, eps);
            const auto env = [&](double x) {
                return std::sqrt(M_PI / (2.0 * alpha * x)) * std::exp(-alpha * x);
            };
            CHECK(env(r) <= eps);
            CHECK(env(0.999 * r) > eps);
        }
    }
}

TEST_CASE("cutoff direct sum reproduces the full sum at strong decay")
{
    const PointCloud src = random_cloud(60, kL, 41);
    const KernelParams p{20.0, 1.0, kL};
    std::vector<Vec2> targets{src.positions[0], Vec2(3.1, 2.9), Vec2(0.05, 6.2)};
    for (Kernel kernel : {Kernel::G, Kernel::H}) {
        const auto full = direct_sum(src, targets, p, DirectMode{false, -1}, kernel);
        const auto cut = truncated_direct_sum(src, targets, p, 1e-12, kernel, false);
        for (std::size_t t = 0; t < targets.size(); ++t)
            CHECK(cut[t] == doctest::Approx(full[t]).epsilon(1e-11));
    }
}

TEST_CASE("cutoff beyond the domain falls back to the full sum")
{
    // alpha = 1 with eps = 1e-12 wants a radius far past this small hull
    const PointCloud src = random_cloud(15, 2.0, 7);
    const KernelParams p{1.0, 1.0, kL};
    std::vector<Vec2> targets{Vec2(1.0, 1.0)};
    const auto cut = truncated_direct_sum(src, targets, p, 1e-12, Kernel::G, false);
    const auto full = direct_sum(src, targets, p, DirectMode{false, -1}, Kernel::G);
    CHECK(cut[0] == full[0]);
}
