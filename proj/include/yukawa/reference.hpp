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

#include <string>
#include <vector>

#include "yukawa/geometry.hpp"
#include "yukawa/kernels.hpp"

namespace yukawa
{

// Testing oracles. These deliberately avoid the production evaluation
// strategies: the quadrature is adaptive Simpson (the library uses
// Gauss-Legendre panels) and the k-space sums are plain mode loops without
// any gridding.

struct OracleReport
{
    double value = 0.0;
    double accuracy = 0.0;  // estimated absolute accuracy of the oracle itself
    std::string config;
};

// Defining integral of the incomplete modified Bessel function, integrated
// as int_0^1 exp(-z/u - omega u) u^(nu-1) du by adaptive Simpson with
// Richardson acceptance. Throws on nonconvergence.
OracleReport quad_inc_bessel(int nu, double z, double omega, double tol);

// Gridding-free k-space sums with locally written multiplier formulas.
// Periodic: all modes kappa in [-M/2, M/2-1]^2 with M = 2 ceil(k_inf L / 2pi),
// matching the spectral engine's mode set for that grid size. Free space:
// trapezoidal quadrature of the k-plane integral of the mollified multiplier
// with spacing 2pi / (quad_refine moll.L_tilde).
std::vector<double> direct_ksum(const PointCloud& sources, const std::vector<Vec2>& targets,
                                const KernelParams& params, double k_inf, Kernel kernel,
                                bool periodic,
                                const FreeSpaceMollification* moll = nullptr,
                                int quad_refine = 4);

// Full-pipeline consistency harness: evaluates the total sum at two xi values,
// each with its own cutoff and mode limit solved from the tolerance, and
// returns the max absolute deviation over targets.
double cross_xi_check(const PointCloud& sources, const std::vector<Vec2>& targets,
                      double alpha, double box_length, double xi1, double xi2,
                      double tolerance, Kernel kernel, bool periodic);

}  // namespace yukawa
