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

#include "yukawa/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace yukawa
{

void validate(const PointCloud& cloud)
{
    if (!cloud.strengths_scalar.empty() &&
        cloud.strengths_scalar.size() != cloud.positions.size())
        throw std::invalid_argument("PointCloud: scalar strengths do not match positions");
    if (!cloud.strengths_vector.empty() &&
        cloud.strengths_vector.size() != cloud.positions.size())
        throw std::invalid_argument("PointCloud: vector strengths do not match positions");
}

CellList build_cell_list(const PointCloud& cloud, double r_c, const Box& box, bool periodic)
{
    if (!(r_c > 0.0) || !std::isfinite(r_c))
        throw std::invalid_argument("build_cell_list: r_c must be positive");
    validate(cloud);

    CellList list;
    list.r_c = r_c;
    list.periodic = periodic;
    if (periodic)
    {
        double L = box.hi.x() - box.lo.x();
        if (box.lo.x() != 0.0 || box.lo.y() != 0.0 || box.hi.y() - box.lo.y() != L)
            throw std::invalid_argument("build_cell_list: periodic box must be [0, L)^2");
        if (r_c > 0.5 * L)
            throw std::invalid_argument(
                "build_cell_list: periodic mode requires r_c <= L/2 (minimum image is "
                "ambiguous beyond)");
        int n = int(std::floor(L / r_c));
        list.nx = list.ny = n;
        list.cell_size_x = list.cell_size_y = L / n;  // >= r_c, tiles the box exactly
        list.L = L;
        list.origin = Vec2::Zero();
    }
    else
    {
        double ex = box.hi.x() - box.lo.x();
        double ey = box.hi.y() - box.lo.y();
        if (!(ex >= 0.0) || !(ey >= 0.0))
            throw std::invalid_argument("build_cell_list: malformed box");
        // all-pairs fallback when the cutoff covers the whole box
        int nx = std::max(1, int(std::floor(ex / r_c)));
        int ny = std::max(1, int(std::floor(ey / r_c)));
        list.nx = nx;
        list.ny = ny;
        list.cell_size_x = nx > 0 ? std::max(r_c, ex / nx) : r_c;
        list.cell_size_y = ny > 0 ? std::max(r_c, ey / ny) : r_c;
        if (ex == 0.0) list.cell_size_x = r_c;
        if (ey == 0.0) list.cell_size_y = r_c;
        list.origin = box.lo;
    }

    list.head.assign(std::size_t(list.nx) * list.ny, -1);
    list.next.assign(cloud.size(), -1);
    // Insert in reverse so chains enumerate in ascending point order.
    for (std::size_t s = cloud.size(); s-- > 0;)
    {
        const Vec2& y = cloud.positions[s];
        int ix, iy;
        if (periodic)
        {
            ix = int(std::floor(y.x() / list.cell_size_x));
            iy = int(std::floor(y.y() / list.cell_size_y));
            ix = ((ix % list.nx) + list.nx) % list.nx;
            iy = ((iy % list.ny) + list.ny) % list.ny;
        }
        else
        {
            ix = int(std::floor((y.x() - list.origin.x()) / list.cell_size_x));
            iy = int(std::floor((y.y() - list.origin.y()) / list.cell_size_y));
            ix = std::min(std::max(ix, 0), list.nx - 1);
            iy = std::min(std::max(iy, 0), list.ny - 1);
        }
        std::size_t cell = std::size_t(iy) * list.nx + ix;
        list.next[s] = list.head[cell];
        list.head[cell] = int(s);
    }
    return list;
}

namespace
{

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line)
    {
        if (ch == ',')
        {
            out.push_back(cur);
            cur.clear();
        }
        else if (ch != ' ' && ch != '\t' && ch != '\r')
            cur += ch;
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& s, long lineno)
{
    try
    {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    }
    catch (const std::exception&)
    {
        throw ParseError("CSV parse error at line " + std::to_string(lineno) +
                         ": bad number '" + s + "'");
    }
}

}  // namespace

PointCloud read_point_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    PointCloud cloud;
    std::string line;
    long lineno = 0;
    int ncols = -1;
    while (std::getline(in, line))
    {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_fields(line);
        if (ncols < 0)
        {
            // header row
            if (fields.size() == 2 && fields[0] == "x" && fields[1] == "y")
                ncols = 2;
            else if (fields.size() == 3 && fields[0] == "x" && fields[1] == "y" &&
                     fields[2] == "f")
                ncols = 3;
            else if (fields.size() == 4 && fields[0] == "x" && fields[1] == "y" &&
                     fields[2] == "f1" && fields[3] == "f2")
                ncols = 4;
            else
                throw ParseError("CSV parse error at line " + std::to_string(lineno) +
                                 ": header must be x,y or x,y,f or x,y,f1,f2");
            continue;
        }
        if (int(fields.size()) != ncols)
            throw ParseError("CSV parse error at line " + std::to_string(lineno) + ": expected " +
                             std::to_string(ncols) + " fields, got " +
                             std::to_string(fields.size()));
        double x = parse_number(fields[0], lineno);
        double y = parse_number(fields[1], lineno);
        cloud.positions.emplace_back(x, y);
        if (ncols == 3)
            cloud.strengths_scalar.push_back(parse_number(fields[2], lineno));
        else if (ncols == 4)
            cloud.strengths_vector.emplace_back(parse_number(fields[2], lineno),
                                                parse_number(fields[3], lineno));
    }
    if (ncols < 0) throw ParseError("CSV parse error: '" + path + "' has no header row");
    return cloud;
}

void write_point_csv(const std::string& path, const PointCloud& cloud)
{
    validate(cloud);
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    char buf[128];
    if (!cloud.strengths_vector.empty())
    {
        out << "x,y,f1,f2\n";
        for (std::size_t i = 0; i < cloud.size(); ++i)
        {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", cloud.positions[i].x(),
                          cloud.positions[i].y(), cloud.strengths_vector[i].x(),
                          cloud.strengths_vector[i].y());
            out << buf;
        }
    }
    else if (!cloud.strengths_scalar.empty())
    {
        out << "x,y,f\n";
        for (std::size_t i = 0; i < cloud.size(); ++i)
        {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", cloud.positions[i].x(),
                          cloud.positions[i].y(), cloud.strengths_scalar[i]);
            out << buf;
        }
    }
    else
    {
        out << "x,y\n";
        for (std::size_t i = 0; i < cloud.size(); ++i)
        {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", cloud.positions[i].x(),
                          cloud.positions[i].y());
            out << buf;
        }
    }
}

}  // namespace yukawa
