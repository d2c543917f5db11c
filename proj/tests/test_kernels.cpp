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

#include "yukawa/kernels.hpp"
#include "yukawa/reference.hpp"
#include "yukawa/specfun.hpp"

using namespace yukawa;

namespace
{
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("direct kernels reduce to ordinary Bessel functions")
{
    const KernelParams p{1.7, 2.0, 2.0 * kPi};
    for (double r : {0.05, 0.4, 1.3, 3.0}) {
        CHECK(g_direct(r, p) == doctest::Approx(bessel_k(0, 1.7 * r)).epsilon(1e-14));
        const Vec2 rv(0.6 * r, -0.8 * r);
        const Vec2 h = h_direct(rv, p);
        CHECK(h.norm() == doctest::Approx(bessel_k(1, 1.7 * r)).epsilon(1e-13));
        // direction along rvec
        CHECK(h.x() * rv.y() - h.y() * rv.x() == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(h.dot(rv) > 0.0);
    }
    CHECK_THROWS_AS(g_direct(0.0, p), std::domain_error);
    CHECK_THROWS_AS(h_direct(Vec2::Zero(), p), std::domain_error);
}

TEST_CASE("parameter validation rejects non-positive values")
{
    CHECK_THROWS_AS(validate(KernelParams{0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(KernelParams{1.0, -1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(KernelParams{1.0, 1.0, 0.0}), std::invalid_argument);
    CHECK_NOTHROW(validate(KernelParams{1.0, 1.0, 1.0}));
}

TEST_CASE("real-space parts decay like the screened kernel")
{
    const KernelParams p{1.0, 3.0, 2.0 * kPi};
    double prev = g_real(0.2, p);
    for (double r : {0.4, 0.8, 1.2, 1.6}) {
        const double cur = g_real(r, p);
        CHECK(cur > 0.0);
        CHECK(cur < prev);
        prev = cur;
    }
    // At r xi = 4.5 the remainder is far below the unsplit kernel.
    CHECK(g_real(1.5, p) < 1e-8 * g_direct(1.5, p));
    const Vec2 rv(1.2, 0.9);
    CHECK(h_real(rv, p).norm() < 1e-8 * h_direct(rv, p).norm());
    // parity: the vector part is odd
    const Vec2 hp = h_real(rv, p);
    const Vec2 hm = h_real(Vec2(-rv), p);
    CHECK(hp.x() == doctest::Approx(-hm.x()).epsilon(1e-15));
    CHECK(hp.y() == doctest::Approx(-hm.y()).epsilon(1e-15));
}

TEST_CASE("pair split identity: direct kernel = screened part + k-space integral")
{
    // One unit-strength source; the k-space part comes from the gridding-free
    // trapezoid of the mollified multiplier.
    const KernelParams p{1.0, 2.0, 2.0 * kPi};
    const double lt = 9.0;
    const FreeSpaceMollification moll{std::sqrt(2.0) * lt, lt};
    PointCloud src;
    src.positions.emplace_back(1.0, 1.5);
    src.strengths_scalar.push_back(1.0);
    src.strengths_vector.emplace_back(0.0, 0.0);

    std::vector<Vec2> targets;
    targets.emplace_back(1.7, 1.1);  // r ~ 0.8
    targets.emplace_back(3.0, 2.5);  // r ~ 2.2

    auto smooth = direct_ksum(src, targets, p, 8.0, Kernel::G, false, &moll, 4);
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const double r = (targets[t] - src.positions[0]).norm();
        CHECK(g_direct(r, p) == doctest::Approx(g_real(r, p) + smooth[t]).epsilon(1e-11));
    }

    src.strengths_vector[0] = Vec2(0.7, -0.4);
    auto smooth_h = direct_ksum(src, targets, p, 8.0, Kernel::H, false, &moll, 4);
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const Vec2 sep = targets[t] - src.positions[0];
        const double want = h_direct(sep, p).dot(src.strengths_vector[0]);
        const double got = h_real(sep, p).dot(src.strengths_vector[0]) + smooth_h[t];
        CHECK(want == doctest::Approx(got).epsilon(1e-10));
    }
}

TEST_CASE("self term equals the coincident-pair limit of the smooth part")
{
    for (double xi : {1.5, 4.0}) {
        const KernelParams p{1.0, xi, 2.0 * kPi};
        // g_real - g_direct tends to g_self as r -> 0 (both diverge, the
        // difference does not).
        const double lim1 = g_real(1e-5, p) - g_direct(1e-5, p);
        const double lim2 = g_real(1e-6, p) - g_direct(1e-6, p);
        CHECK(lim1 == doctest::Approx(g_self(p)).epsilon(1e-8));
        CHECK(lim2 == doctest::Approx(g_self(p)).epsilon(1e-8));
        CHECK(g_self(p) == doctest::Approx(-0.5 * expint_en(1, 1.0 / (4.0 * xi * xi)))
                               .epsilon(1e-14));
        CHECK(h_self(p).norm() == 0.0);
    }
}

TEST_CASE("periodic multiplier: positive, screened, vector variant odd")
{
    const KernelParams p{1.3, 2.5, 2.0 * kPi};
    double prev = g_fourier_periodic(0.0, p);
    CHECK(prev == doctest::Approx(2.0 * kPi / (1.3 * 1.3) *
                                  std::exp(-1.3 * 1.3 / (4.0 * 2.5 * 2.5)))
                      .epsilon(1e-14));
    for (double k : {1.0, 2.0, 4.0, 8.0}) {
        const double cur = g_fourier_periodic(k, p);
        CHECK(cur > 0.0);
        CHECK(cur < prev);
        prev = cur;
    }
    const Vec2 kv(1.2, -0.7);
    const Vec2 hv = h_fourier_periodic(kv, p);
    const Vec2 hn = h_fourier_periodic(Vec2(-kv), p);
    CHECK(hv.x() == doctest::Approx(-hn.x()).epsilon(1e-15));
    CHECK(hv.y() == doctest::Approx(-hn.y()).epsilon(1e-15));
    // component relation to the scalar multiplier
    const double g = g_fourier_periodic(kv.norm(), p);
    CHECK(hv.x() == doctest::Approx(-kv.x() / 1.3 * g).epsilon(1e-14));
    CHECK(hv.y() == doctest::Approx(-kv.y() / 1.3 * g).epsilon(1e-14));
}

TEST_CASE("free-space multiplier: finite at k=0, continuous series branch")
{
    const double lt = 9.0;
    const FreeSpaceMollification moll{std::sqrt(2.0) * lt, lt};
    for (double alpha : {0.05, 1.0}) {
        const KernelParams p{alpha, 2.0, 2.0 * kPi};
        const double at0 = g_fourier_freespace(0.0, p, moll);
        CHECK(std::isfinite(at0));
        const double want = 2.0 * kPi / (alpha * alpha) *
                            (1.0 - alpha * moll.R * bessel_k(1, alpha * moll.R)) *
                            std::exp(-alpha * alpha / (4.0 * p.xi * p.xi));
        CHECK(at0 == doctest::Approx(want).epsilon(1e-12));
        // continuity across the small-argument branch switch at k R = 1e-4
        const double kb = 1e-4 / moll.R;
        const double below = g_fourier_freespace(kb * 0.999, p, moll);
        const double above = g_fourier_freespace(kb * 1.001, p, moll);
        CHECK(below == doctest::Approx(above).epsilon(1e-9));
    }
}

TEST_CASE("free-space multiplier matches the plain one once the cut is remote")
{
    // alpha R ~ 42: the truncation correction is K-Bessel small.
    const double lt = 15.0;
    const FreeSpaceMollification moll{std::sqrt(2.0) * lt, lt};
    const KernelParams p{2.0, 3.0, 2.0 * kPi};
    for (double k : {0.0, 0.5, 2.0, 6.0}) {
        const double fs = g_fourier_freespace(k, p, moll);
        const double per = g_fourier_periodic(k, p);
        CHECK(fs == doctest::Approx(per).epsilon(1e-12));
    }
    const Vec2 kv(1.0, 2.0);
    const Vec2 a = h_fourier_freespace(kv, p, moll);
    const Vec2 b = h_fourier_periodic(kv, p);
    CHECK(a.x() == doctest::Approx(b.x()).epsilon(1e-12));
    CHECK(a.y() == doctest::Approx(b.y()).epsilon(1e-12));
}
