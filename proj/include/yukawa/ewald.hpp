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

#include <vector>

#include "yukawa/estimate.hpp"
#include "yukawa/fourier.hpp"
#include "yukawa/realspace.hpp"

namespace yukawa
{

// Fully resolved evaluation parameters for one Ewald run.
struct EvalSetup
{
    KernelParams params;
    double r_c = 0.0;
    double k_inf = 0.0;
    int M = 0;        // periodic grid size; free-space plans derive theirs from k_inf
    int p = 24;
    double tol = 1e-10;
    bool periodic = true;
};

// Fills the unset knobs of a run request: xi from the tolerance at r_c (or
// r_c from the tolerance at xi when only xi is pinned), then k_inf and M.
struct SetupRequest
{
    double alpha = 0.0;
    double box_length = 0.0;
    double tol = 1e-10;
    bool periodic = true;
    int p = 24;
    double r_c = 0.0;    // 0 = resolve
    double xi = 0.0;     // 0 = resolve
    double k_inf = 0.0;  // 0 = resolve
    int M = 0;           // 0 = resolve (overrides k_inf when set)
};

EvalSetup resolve_setup(const SetupRequest& req, const SystemMoments& moments);

struct EvalResult
{
    std::vector<double> values;
    StageTimings timings;
    KspaceDiagnostics diag;
};

// Composed evaluation: real-space sum at r_c plus the k-space pipeline. The
// self correction for targets coinciding with a source is part of the
// real-space sum.
EvalResult ewald_eval(const PointCloud& sources, const std::vector<Vec2>& targets,
                      const EvalSetup& setup, Kernel kernel);

// Same composition with the K x K lattice targets of make_grid_targets and
// the on-grid k-space path.
EvalResult ewald_eval_ongrid(const PointCloud& sources, int K, const EvalSetup& setup,
                             Kernel kernel);

}  // namespace yukawa
