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

#include "yukawa/realspace.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace yukawa
{
namespace
{

Box hull_of(const PointCloud& cloud)
{
    Box box{Vec2::Zero(), Vec2::Zero()};
    if (cloud.size() == 0) return box;
    box.lo = box.hi = cloud.positions[0];
    for (const Vec2& p : cloud.positions)
    {
        box.lo = box.lo.cwiseMin(p);
        box.hi = box.hi.cwiseMax(p);
    }
    return box;
}

Box domain_box(const PointCloud& sources, const KernelParams& params, bool periodic)
{
    if (periodic) return Box{Vec2::Zero(), Vec2(params.box_length, params.box_length)};
    return hull_of(sources);
}

// Shared neighbour-sum driver; `pair` maps (source index, separation) to the
// target's accumulator contribution, `self` is added once per coincident
// source when include_self is set.
template <class PairFn>
std::vector<double> neighbor_sum(const PointCloud& sources, const std::vector<Vec2>& targets,
                                 const KernelParams& params, double r_c, bool periodic,
                                 bool include_self, double self_value, PairFn&& pair)
{
    validate(params);
    CellList list = build_cell_list(sources, r_c, domain_box(sources, params, periodic), periodic);
    std::vector<double> out(targets.size(), 0.0);
    std::atomic<long> coincident_overflow{-1};
    parallel_for(targets.size(),
                 [&](std::size_t lo, std::size_t hi)
                 {
                     for (std::size_t t = lo; t < hi; ++t)
                     {
                         double acc = 0.0;
                         int zero_seps = 0;
                         for_neighbors(list, sources, targets[t],
                                       [&](int s, const Vec2&, const Vec2& sep)
                                       {
                                           if (sep.squaredNorm() == 0.0)
                                           {
                                               ++zero_seps;
                                               if (include_self && zero_seps == 1)
                                                   acc += self_value *
                                                          (pair(s, sep, true));
                                               return;
                                           }
                                           acc += pair(s, sep, false);
                                       });
                         if (zero_seps > 1) coincident_overflow.store(long(t));
                         out[t] = acc;
                     }
                 });
    if (coincident_overflow.load() >= 0)
        throw std::domain_error("real_sum: two distinct points coincide at target " +
                                std::to_string(coincident_overflow.load()));
    return out;
}

}  // namespace

std::vector<double> real_sum_g(const PointCloud& sources, const std::vector<Vec2>& targets,
                               const KernelParams& params, const RealSumConfig& cfg,
                               bool periodic)
{
    if (sources.strengths_scalar.size() != sources.size())
        throw std::invalid_argument("real_sum_g: sources need scalar strengths");
    double self = g_self(params);
    return neighbor_sum(sources, targets, params, cfg.r_c, periodic, cfg.include_self, self,
                        [&](int s, const Vec2& sep, bool self_pair)
                        {
                            double f = sources.strengths_scalar[s];
                            if (self_pair) return f;  // scaled by self_value outside
                            return g_real(sep.norm(), params) * f;
                        });
}

std::vector<double> real_sum_h(const PointCloud& sources, const std::vector<Vec2>& targets,
                               const KernelParams& params, const RealSumConfig& cfg,
                               bool periodic)
{
    if (sources.strengths_vector.size() != sources.size())
        throw std::invalid_argument("real_sum_h: sources need vector strengths");
    return neighbor_sum(sources, targets, params, cfg.r_c, periodic, cfg.include_self, 0.0,
                        [&](int s, const Vec2& sep, bool self_pair)
                        {
                            if (self_pair) return 0.0;  // vector self term vanishes
                            return h_real(sep, params).dot(sources.strengths_vector[s]);
                        });
}

namespace
{

double direct_pair(const Vec2& sep, const PointCloud& sources, std::size_t s,
                   const KernelParams& params, Kernel kernel)
{
    if (kernel == Kernel::G)
        return g_direct(sep.norm(), params) * sources.strengths_scalar[s];
    return h_direct(sep, params).dot(sources.strengths_vector[s]);
}

}  // namespace

std::vector<double> direct_sum(const PointCloud& sources, const std::vector<Vec2>& targets,
                               const KernelParams& params, const DirectMode& mode, Kernel kernel)
{
    validate(params);
    validate(sources);
    if (kernel == Kernel::G && sources.strengths_scalar.size() != sources.size())
        throw std::invalid_argument("direct_sum: sources need scalar strengths");
    if (kernel == Kernel::H && sources.strengths_vector.size() != sources.size())
        throw std::invalid_argument("direct_sum: sources need vector strengths");

    std::vector<double> out(targets.size(), 0.0);
    std::atomic<long> coincident{-1};

    if (!mode.periodic)
    {
        parallel_for(targets.size(),
                     [&](std::size_t lo, std::size_t hi)
                     {
                         for (std::size_t t = lo; t < hi; ++t)
                         {
                             double acc = 0.0;
                             int zero_seps = 0;
                             for (std::size_t s = 0; s < sources.size(); ++s)
                             {
                                 Vec2 sep = targets[t] - sources.positions[s];
                                 if (sep.squaredNorm() == 0.0)
                                 {
                                     if (++zero_seps > 1) coincident.store(long(t));
                                     continue;  // self pair is excluded from the sum
                                 }
                                 acc += direct_pair(sep, sources, s, params, kernel);
                             }
                             out[t] = acc;
                         }
                     });
        if (coincident.load() >= 0)
            throw std::domain_error("direct_sum: two distinct points coincide at target " +
                                    std::to_string(coincident.load()));
        return out;
    }

    // Periodic: accumulate image shells |p|_inf = s. With images < 0, stop
    // once two successive shells change nothing above 1e-14 (the kernel decay
    // makes shell contributions strictly decreasing).
    double L = params.box_length;
    int max_shell = mode.images >= 0 ? mode.images : 30;
    bool automatic = mode.images < 0;
    std::vector<double> shell_delta(targets.size());
    int quiet = 0;
    for (int shell = 0; shell <= max_shell; ++shell)
    {
        std::fill(shell_delta.begin(), shell_delta.end(), 0.0);
        parallel_for(targets.size(),
                     [&](std::size_t lo, std::size_t hi)
                     {
                         for (std::size_t t = lo; t < hi; ++t)
                         {
                             double acc = 0.0;
                             int zero_seps = 0;
                             for (int py = -shell; py <= shell; ++py)
                             {
                                 for (int px = -shell; px <= shell; ++px)
                                 {
                                     if (std::max(std::abs(px), std::abs(py)) != shell)
                                         continue;
                                     Vec2 tau(px * L, py * L);
                                     for (std::size_t s = 0; s < sources.size(); ++s)
                                     {
                                         Vec2 sep = targets[t] - sources.positions[s] - tau;
                                         if (sep.squaredNorm() == 0.0)
                                         {
                                             if (++zero_seps > 1) coincident.store(long(t));
                                             continue;
                                         }
                                         acc += direct_pair(sep, sources, s, params, kernel);
                                     }
                                 }
                             }
                             shell_delta[t] = acc;
                             out[t] += acc;
                         }
                     });
        if (coincident.load() >= 0)
            throw std::domain_error("direct_sum: two distinct points coincide at target " +
                                    std::to_string(coincident.load()));
        if (automatic && shell >= 2)
        {
            double worst = 0.0;
            for (double d : shell_delta) worst = std::max(worst, std::abs(d));
            quiet = worst < 1e-14 ? quiet + 1 : 0;
            if (quiet >= 2) break;
        }
    }
    return out;
}

double truncation_radius(double alpha, double eps)
{
    if (!(alpha > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("truncation_radius: alpha and eps must be positive");
    auto envelope = [&](double r) { return std::sqrt(M_PI / (2.0 * alpha * r)) * std::exp(-alpha * r); };
    double lo = 1e-12, hi = 1.0;
    while (envelope(hi) > eps && hi < 1e9) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it)
    {
        double mid = 0.5 * (lo + hi);
        (envelope(mid) > eps ? lo : hi) = mid;
    }
    return hi;  // envelope(hi) <= eps
}

std::vector<double> truncated_direct_sum(const PointCloud& sources,
                                         const std::vector<Vec2>& targets,
                                         const KernelParams& params, double eps, Kernel kernel,
                                         bool periodic)
{
    validate(params);
    double r_t = truncation_radius(params.alpha, eps);
    Box box = domain_box(sources, params, periodic);
    double limit = periodic ? 0.5 * params.box_length : (box.hi - box.lo).norm();
    if (r_t > limit && limit > 0.0)
    {
        std::fprintf(stderr,
                     "truncated_direct_sum: cutoff %.3g exceeds the domain limit %.3g; "
                     "falling back to the full direct sum\n",
                     r_t, limit);
        return direct_sum(sources, targets, params, DirectMode{periodic, -1}, kernel);
    }
    if (kernel == Kernel::G && sources.strengths_scalar.size() != sources.size())
        throw std::invalid_argument("truncated_direct_sum: sources need scalar strengths");
    if (kernel == Kernel::H && sources.strengths_vector.size() != sources.size())
        throw std::invalid_argument("truncated_direct_sum: sources need vector strengths");

    CellList list = build_cell_list(sources, r_t, box, periodic);
    std::vector<double> out(targets.size(), 0.0);
    std::atomic<long> coincident{-1};
    parallel_for(targets.size(),
                 [&](std::size_t lo, std::size_t hi)
                 {
                     for (std::size_t t = lo; t < hi; ++t)
                     {
                         double acc = 0.0;
                         int zero_seps = 0;
                         for_neighbors(list, sources, targets[t],
                                       [&](int s, const Vec2&, const Vec2& sep)
                                       {
                                           if (sep.squaredNorm() == 0.0)
                                           {
                                               if (++zero_seps > 1) coincident.store(long(t));
                                               return;
                                           }
                                           acc += direct_pair(sep, sources, std::size_t(s),
                                                              params, kernel);
                                       });
                         out[t] = acc;
                     }
                 });
    if (coincident.load() >= 0)
        throw std::domain_error("truncated_direct_sum: two distinct points coincide at target " +
                                std::to_string(coincident.load()));
    return out;
}

}  // namespace yukawa
