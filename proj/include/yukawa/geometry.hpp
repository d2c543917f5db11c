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

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "yukawa/util.hpp"

namespace yukawa
{

// Sources or targets with optional strength channels. Whichever channel is
// present must match positions in length.
struct PointCloud
{
    std::vector<Vec2> positions;
    std::vector<double> strengths_scalar;  // f for the scalar kernel; may be empty
    std::vector<Vec2> strengths_vector;    // f for the vector kernel; may be empty

    std::size_t size() const { return positions.size(); }
};

void validate(const PointCloud& cloud);

struct Box
{
    Vec2 lo;
    Vec2 hi;
};

// Linked cell list over a square domain. Periodic mode tiles [0, L)^2 exactly
// (cell_size = L / floor(L / r_c)); free mode clamps the 3x3 neighbourhood at
// the domain edge and falls back to a single cell when r_c exceeds the box.
struct CellList
{
    double r_c = 0.0;
    double cell_size_x = 0.0;
    double cell_size_y = 0.0;
    int nx = 0;
    int ny = 0;
    bool periodic = false;
    double L = 0.0;  // periodic box side
    Vec2 origin = Vec2::Zero();
    std::vector<int> head;  // first point index per cell, -1 when empty
    std::vector<int> next;  // chained point indices, -1 terminates
};

// Periodic mode requires box = [0, L)^2 and r_c <= L/2; free mode accepts any
// box covering the points.
CellList build_cell_list(const PointCloud& cloud, double r_c, const Box& box, bool periodic);

// Visits every source with |target - y - shift| < r_c exactly once, in a
// deterministic order. The callback receives (source index, image shift,
// separation = target - y - shift).
template <class F>
void for_neighbors(const CellList& list, const PointCloud& cloud, const Vec2& target, F&& f)
{
    if (list.head.empty()) return;
    double rc2 = list.r_c * list.r_c;
    auto cell_of = [](double v, double origin, double size, int n)
    {
        int i = int(std::floor((v - origin) / size));
        if (i < 0) i = 0;
        if (i >= n) i = n - 1;
        return i;
    };
    int cx = cell_of(target.x(), list.origin.x(), list.cell_size_x, list.nx);
    int cy = cell_of(target.y(), list.origin.y(), list.cell_size_y, list.ny);
    for (int dy = -1; dy <= 1; ++dy)
    {
        for (int dx = -1; dx <= 1; ++dx)
        {
            int jx = cx + dx, jy = cy + dy;
            double shift_x = 0.0, shift_y = 0.0;
            if (list.periodic)
            {
                if (jx < 0) { jx += list.nx; shift_x = -list.L; }
                else if (jx >= list.nx) { jx -= list.nx; shift_x = list.L; }
                if (jy < 0) { jy += list.ny; shift_y = -list.L; }
                else if (jy >= list.ny) { jy -= list.ny; shift_y = list.L; }
            }
            else
            {
                if (jx < 0 || jx >= list.nx || jy < 0 || jy >= list.ny) continue;
            }
            for (int idx = list.head[std::size_t(jy) * list.nx + jx]; idx >= 0;
                 idx = list.next[idx])
            {
                Vec2 sep(target.x() - cloud.positions[idx].x() - shift_x,
                         target.y() - cloud.positions[idx].y() - shift_y);
                if (sep.squaredNorm() < rc2) f(idx, Vec2(shift_x, shift_y), sep);
            }
        }
    }
}

// CSV point I/O. Header must be "x,y", "x,y,f", or "x,y,f1,f2"; lines starting
// with '#' are ignored. Parse failures carry the 1-based line number.
struct ParseError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

PointCloud read_point_csv(const std::string& path);
void write_point_csv(const std::string& path, const PointCloud& cloud);

}  // namespace yukawa
