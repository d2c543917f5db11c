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

#include "yukawa/ewald.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace yukawa
{
namespace
{

constexpr double kPi = 3.141592653589793238462643383279502884;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

EvalSetup resolve_setup(const SetupRequest& req, const SystemMoments& moments)
{
    if (!(req.alpha > 0.0) || !std::isfinite(req.alpha))
        throw std::invalid_argument("alpha must be positive and finite");
    if (!(req.box_length > 0.0) || !std::isfinite(req.box_length))
        throw std::invalid_argument("box length must be positive and finite");
    EvalSetup s;
    s.params.alpha = req.alpha;
    s.params.box_length = req.box_length;
    s.p = req.p;
    s.tol = req.tol;
    s.periodic = req.periodic;
    const KernelParams proto{req.alpha, 1.0, req.box_length};
    if (req.xi > 0.0) {
        s.params.xi = req.xi;
        s.r_c = req.r_c > 0.0 ? req.r_c
                              : rc_for_tolerance(req.tol, req.xi, proto, moments);
    } else {
        s.r_c = req.r_c > 0.0 ? req.r_c : req.box_length / 8.0;
        const TuneResult t = tune(req.tol, s.r_c, proto, moments, req.periodic);
        s.params.xi = t.xi;
        s.k_inf = t.k_inf;
        s.M = t.M;
    }
    if (s.periodic && s.r_c > 0.5 * req.box_length)
        throw std::invalid_argument(
            "resolved cutoff exceeds half the box; lower the tolerance or raise xi");
    if (req.M > 0) {
        if (req.M % 2 != 0) throw std::invalid_argument("grid size must be even");
        s.M = req.M;
        s.k_inf = kPi * req.M / req.box_length;
    } else if (req.k_inf > 0.0) {
        s.k_inf = req.k_inf;
        s.M = std::max(4, next_fast_size(2 * static_cast<int>(std::ceil(
                              req.k_inf * req.box_length / (2.0 * kPi)))));
    } else if (s.k_inf == 0.0) {
        s.k_inf = kinf_for_tolerance(req.tol, s.params.xi, s.params, moments, req.periodic);
        s.M = std::max(4, next_fast_size(2 * static_cast<int>(std::ceil(
                              s.k_inf * req.box_length / (2.0 * kPi)))));
    }
    validate(s.params);
    return s;
}

EvalResult ewald_eval(const PointCloud& sources, const std::vector<Vec2>& targets,
                      const EvalSetup& setup, Kernel kernel)
{
    const auto t0 = std::chrono::steady_clock::now();
    EvalResult out;
    const RealSumConfig rcfg{setup.r_c, true};
    {
        const auto tr = std::chrono::steady_clock::now();
        out.values = kernel == Kernel::G
                         ? real_sum_g(sources, targets, setup.params, rcfg, setup.periodic)
                         : real_sum_h(sources, targets, setup.params, rcfg, setup.periodic);
        out.timings.realspace += seconds_since(tr);
    }
    std::vector<double> kpart;
    if (setup.periodic) {
        const WindowConfig cfg = make_window(setup.p, setup.params.box_length / setup.M);
        kpart = kspace_sum_periodic(sources, targets, setup.params, setup.M, cfg, kernel,
                                    &out.timings, &out.diag);
    } else {
        const FreeSpacePlan plan =
            make_freespace_plan(setup.params, setup.k_inf, setup.p, setup.tol);
        const FreeSpaceKernelTables tables =
            precompute_mollified(plan, kernel, 1.0 + std::sqrt(2.0), &out.timings);
        const WindowConfig cfg = make_window(setup.p, plan.h);
        kpart = kspace_sum_freespace(sources, targets, plan, cfg, tables, &out.timings,
                                     &out.diag);
    }
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += kpart[i];
    out.timings.total += seconds_since(t0);
    return out;
}

EvalResult ewald_eval_ongrid(const PointCloud& sources, int K, const EvalSetup& setup,
                             Kernel kernel)
{
    const auto t0 = std::chrono::steady_clock::now();
    EvalResult out;
    const std::vector<Vec2> targets = make_grid_targets(K, setup.params.box_length);
    const RealSumConfig rcfg{setup.r_c, true};
    {
        const auto tr = std::chrono::steady_clock::now();
        out.values = kernel == Kernel::G
                         ? real_sum_g(sources, targets, setup.params, rcfg, setup.periodic)
                         : real_sum_h(sources, targets, setup.params, rcfg, setup.periodic);
        out.timings.realspace += seconds_since(tr);
    }
    std::vector<double> kpart;
    if (setup.periodic) {
        const WindowConfig cfg = make_window(setup.p, setup.params.box_length / setup.M);
        kpart = kspace_sum_ongrid_periodic(sources, K, setup.params, setup.M, cfg, kernel,
                                           &out.timings);
    } else {
        const FreeSpacePlan plan =
            make_freespace_plan(setup.params, setup.k_inf, setup.p, setup.tol);
        const FreeSpaceKernelTables tables =
            precompute_mollified(plan, kernel, 1.0 + std::sqrt(2.0), &out.timings);
        const WindowConfig cfg = make_window(setup.p, plan.h);
        kpart = kspace_sum_ongrid_freespace(sources, K, plan, cfg, tables, &out.timings);
    }
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += kpart[i];
    out.timings.total += seconds_since(t0);
    return out;
}

}  // namespace yukawa
