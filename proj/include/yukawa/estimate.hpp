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

#include "yukawa/geometry.hpp"
#include "yukawa/kernels.hpp"

namespace yukawa
{

// Strength moments entering the RMS truncation-error estimates.
struct SystemMoments
{
    double Q_G = 0.0;    // sum of squared scalar strengths
    double Q_H = 0.0;    // sum of squared vector strength components
    std::size_t N = 0;
    double L = 0.0;      // domain side
};

SystemMoments compute_moments(const PointCloud& cloud, double box_length);

// RMS truncation-error estimates. The xi argument is used in place of
// params.xi so the tuner can probe trial values. Estimates are not sharp
// below r_c xi = 1 (real space) or k_inf = 2 xi (k-space); see the regime
// helpers below.
double est_real_g(double r_c, double xi, const KernelParams& params, const SystemMoments& m);
double est_real_h(double r_c, double xi, const KernelParams& params, const SystemMoments& m);
double est_k_g(double k_inf, double xi, const KernelParams& params, const SystemMoments& m);
double est_k_h(double k_inf, double xi, const KernelParams& params, const SystemMoments& m);
double est_k_g_freespace(double k_inf, double xi, const KernelParams& params,
                         const FreeSpaceMollification& moll, const SystemMoments& m);
double est_k_h_freespace(double k_inf, double xi, const KernelParams& params,
                         const FreeSpaceMollification& moll, const SystemMoments& m);

bool realspace_estimate_in_regime(double r_c, double xi);
bool kspace_estimate_in_regime(double k_inf, double xi);

// Smallest cutoff (resp. mode limit) whose estimates meet the tolerance at a
// fixed xi. Both are monotone in their argument, solved by bisection.
double rc_for_tolerance(double tolerance, double xi, const KernelParams& params,
                        const SystemMoments& moments);
double kinf_for_tolerance(double tolerance, double xi, const KernelParams& params,
                          const SystemMoments& moments, bool periodic);

// Parameters selected for a target RMS tolerance at a given real-space cutoff:
// the smallest xi whose real-space estimates meet the tolerance, then the
// smallest k_inf whose k-space estimates do. M is the periodic grid size for
// that k_inf; free-space runs derive their grids from k_inf directly.
struct TuneResult
{
    double xi = 0.0;
    double k_inf = 0.0;
    int M = 0;
    bool real_in_regime = true;
    bool k_in_regime = true;
};

TuneResult tune(double tolerance, double r_c, const KernelParams& params,
                const SystemMoments& moments, bool periodic);

}  // namespace yukawa
