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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <tuple>
#include <vector>

#include "yukawa/geometry.hpp"

using namespace yukawa;

namespace
{

constexpr double kL = 6.283185307179586;

PointCloud random_cloud(int n, double span, uint64_t seed)
{
    const SplitMix64 rng{seed};
    PointCloud c;
    for (int i = 0; i < n; ++i)
        c.positions.emplace_back(rng.uniform(2 * i) * span, rng.uniform(2 * i + 1) * span);
    return c;
}

// (source index, image shift in units of L) for set comparison
using PairKey = std::tuple<int, int, int>;

std::vector<PairKey> brute_pairs(const PointCloud& cloud, const Vec2& target, double r_c,
                                 double L, bool periodic)
{
    std::vector<PairKey> out;
    const int s_max = periodic ? 1 : 0;
    for (std::size_t s = 0; s < cloud.size(); ++s)
        for (int sy = -s_max; sy <= s_max; ++sy)
            for (int sx = -s_max; sx <= s_max; ++sx) {
                const Vec2 sep = target - cloud.positions[s] - Vec2(sx * L, sy * L);
                if (sep.squaredNorm() < r_c * r_c) out.emplace_back(int(s), sx, sy);
            }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PairKey> list_pairs(const CellList& list, const PointCloud& cloud,
                                const Vec2& target, double L)
{
    std::vector<PairKey> out;
    for_neighbors(list, cloud, target, [&](int s, const Vec2& shift, const Vec2&) {
        const int sx = int(std::lround(shift.x() / L));
        const int sy = int(std::lround(shift.y() / L));
        out.emplace_back(s, sx, sy);
    });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("cell list visits exactly the pairs within the cutoff (periodic)")
{
    const PointCloud cloud = random_cloud(200, kL, 11);
    const Box box{Vec2::Zero(), Vec2(kL, kL)};
    for (double r_c : {0.3, 1.0, 0.5 * kL}) {
        const CellList list = build_cell_list(cloud, r_c, box, true);
        for (int t = 0; t < 40; ++t) {
            const SplitMix64 rng{77};
            const Vec2 target(rng.uniform(2 * t) * kL, rng.uniform(2 * t + 1) * kL);
            CHECK(list_pairs(list, cloud, target, kL) ==
                  brute_pairs(cloud, target, r_c, kL, true));
        }
    }
}

TEST_CASE("cell list visits exactly the pairs within the cutoff (free)")
{
    const PointCloud cloud = random_cloud(150, 3.0, 5);
    Box box{cloud.positions[0], cloud.positions[0]};
    for (const Vec2& p : cloud.positions) {
        box.lo = box.lo.cwiseMin(p);
        box.hi = box.hi.cwiseMax(p);
    }
    for (double r_c : {0.25, 0.9, 5.0}) {
        const CellList list = build_cell_list(cloud, r_c, box, false);
        const SplitMix64 rng{91};
        for (int t = 0; t < 40; ++t) {
            // includes targets outside the hull
            const Vec2 target(rng.uniform(2 * t) * 5.0 - 1.0, rng.uniform(2 * t + 1) * 5.0 - 1.0);
            CHECK(list_pairs(list, cloud, target, 1.0) ==
                  brute_pairs(cloud, target, r_c, 1.0, false));
        }
    }
}

TEST_CASE("cell list handles duplicate positions")
{
    PointCloud cloud;
    cloud.positions.emplace_back(1.0, 1.0);
    cloud.positions.emplace_back(1.0, 1.0);
    cloud.positions.emplace_back(2.0, 2.0);
    const Box box{Vec2::Zero(), Vec2(kL, kL)};
    const CellList list = build_cell_list(cloud, 1.5, box, true);
    int visits = 0;
    for_neighbors(list, cloud, Vec2(1.0, 1.2), [&](int, const Vec2&, const Vec2&) { ++visits; });
    CHECK(visits == 3);
}

TEST_CASE("cell list rejects invalid configurations")
{
    const PointCloud cloud = random_cloud(10, kL, 3);
    const Box box{Vec2::Zero(), Vec2(kL, kL)};
    CHECK_THROWS_AS(build_cell_list(cloud, 0.0, box, true), std::invalid_argument);
    CHECK_THROWS_AS(build_cell_list(cloud, 0.51 * kL, box, true), std::invalid_argument);
    const Box off{Vec2(1.0, 0.0), Vec2(kL + 1.0, kL)};
    CHECK_THROWS_AS(build_cell_list(cloud, 1.0, off, true), std::invalid_argument);
}

TEST_CASE("point cloud validation catches mismatched strength lengths")
{
    PointCloud c;
    c.positions.emplace_back(0.0, 0.0);
    c.positions.emplace_back(1.0, 1.0);
    c.strengths_scalar.push_back(1.0);
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c.strengths_scalar.push_back(2.0);
    CHECK_NOTHROW(validate(c));
    c.strengths_vector.emplace_back(1.0, 0.0);
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("CSV round trip preserves values exactly for all header shapes")
{
    const char* path = "geom_roundtrip.csv";
    PointCloud base = random_cloud(17, kL, 123);

    SUBCASE("positions only")
    {
        write_point_csv(path, base);
        const PointCloud back = read_point_csv(path);
        REQUIRE(back.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(back.positions[i].x() == base.positions[i].x());
            CHECK(back.positions[i].y() == base.positions[i].y());
        }
    }
    SUBCASE("scalar strengths")
    {
        for (std::size_t i = 0; i < base.size(); ++i)
            base.strengths_scalar.push_back(0.1 * double(i) + 1.0 / 3.0);
        write_point_csv(path, base);
        const PointCloud back = read_point_csv(path);
        REQUIRE(back.strengths_scalar.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i)
            CHECK(back.strengths_scalar[i] == base.strengths_scalar[i]);
    }
    SUBCASE("vector strengths")
    {
        for (std::size_t i = 0; i < base.size(); ++i)
            base.strengths_vector.emplace_back(i * 0.7, -1.0 / (i + 1.0));
        write_point_csv(path, base);
        const PointCloud back = read_point_csv(path);
        REQUIRE(back.strengths_vector.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(back.strengths_vector[i].x() == base.strengths_vector[i].x());
            CHECK(back.strengths_vector[i].y() == base.strengths_vector[i].y());
        }
    }
    std::remove(path);
}

TEST_CASE("CSV parse errors carry the line number")
{
    const char* path = "geom_bad.csv";
    const auto write_file = [&](const char* text) {
        std::ofstream f(path);
        f << text;
    };

    write_file("x,y,f\n1.0,2.0,3.0\n# comment\n1.0,oops,3.0\n");
    try {
        read_point_csv(path);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }

    write_file("x,y\n1.0,2.0\n3.0\n");
    try {
        read_point_csv(path);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    write_file("a,b\n");
    CHECK_THROWS_AS(read_point_csv(path), ParseError);
    CHECK_THROWS_AS(read_point_csv("no_such_file_anywhere.csv"), ParseError);

    // comments and blank lines are fine
    write_file("# produced by hand\n\nx,y,f\n0.5,0.25,1\n");
    const PointCloud c = read_point_csv(path);
    CHECK(c.size() == 1);
    CHECK(c.strengths_scalar[0] == 1.0);
    std::remove(path);
}
