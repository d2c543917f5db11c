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

#include "yukawa/geometry.hpp"
#include "yukawa/kernels.hpp"
#include "yukawa/util.hpp"

namespace yukawa
{

struct RealSumConfig
{
    double r_c;                // cutoff radius
    bool include_self = true;  // add the self term when a target coincides with a source
};

// Truncated short-range sums over neighbours within r_c. Targets coinciding
// with a source get the self correction (scalar kernel only; the vector
// kernel's self term vanishes). Two coincident distinct sources at a target
// raise a domain error.
std::vector<double> real_sum_g(const PointCloud& sources, const std::vector<Vec2>& targets,
                               const KernelParams& params, const RealSumConfig& cfg,
                               bool periodic);
std::vector<double> real_sum_h(const PointCloud& sources, const std::vector<Vec2>& targets,
                               const KernelParams& params, const RealSumConfig& cfg,
                               bool periodic);

struct DirectMode
{
    bool periodic = false;
    // number of image shells per direction; negative selects automatic
    // expansion until successive shells change the result by < 1e-14
    int images = -1;
};

// O(N^2) reference sums of the unsplit kernels.
std::vector<double> direct_sum(const PointCloud& sources, const std::vector<Vec2>& targets,
                               const KernelParams& params, const DirectMode& mode,
                               Kernel kernel);

// Plain-kernel sum truncated at the radius where the kernel envelope
// sqrt(pi/(2 alpha r)) e^{-alpha r} falls below eps. Falls back to direct_sum
// with a warning when that radius does not fit the domain.
std::vector<double> truncated_direct_sum(const PointCloud& sources,
                                         const std::vector<Vec2>& targets,
                                         const KernelParams& params, double eps, Kernel kernel,
                                         bool periodic);

// Radius solving sqrt(pi/(2 alpha r)) e^{-alpha r} = eps (exposed for tests).
double truncation_radius(double alpha, double eps);

}  // namespace yukawa
