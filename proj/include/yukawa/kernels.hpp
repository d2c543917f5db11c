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

#include "yukawa/util.hpp"

namespace yukawa
{

struct KernelParams
{
    double alpha;       // inverse screening length of the kernel
    double xi;          // split parameter balancing real and Fourier work
    double box_length;  // side L of the (square) source domain
};

void validate(const KernelParams& p);

// Truncation geometry of the free-space kernel: the kernel is cut at radius R,
// strictly beyond every point-to-point distance in the extended domain of
// side L_tilde, so its Fourier transform is smooth and finite.
struct FreeSpaceMollification
{
    double R;        // = sqrt(2) * L_tilde
    double L_tilde;  // extended domain side
};

// Unsplit kernels.
double g_direct(double r, const KernelParams& p);
Vec2 h_direct(const Vec2& rvec, const KernelParams& p);

// Real-space parts of the split; decay like exp(-r^2 xi^2).
double g_real(double r, const KernelParams& p);
Vec2 h_real(const Vec2& rvec, const KernelParams& p);

// Fourier multipliers of the smooth parts, periodic setting. The vector
// multiplier is purely imaginary and odd; its imaginary components are
// returned as a real 2-vector.
double g_fourier_periodic(double k, const KernelParams& p);
Vec2 h_fourier_periodic(const Vec2& kvec, const KernelParams& p);

// Correction added when a target coincides with a source, so that the split
// reproduces the sum that excludes the singular self pair.
double g_self(const KernelParams& p);
Vec2 h_self(const KernelParams& p);

// Free-space multipliers with the kernel truncated at radius moll.R. Finite
// at k = 0 for every alpha > 0; evaluated by series for k*R < 1e-4 to avoid
// cancellation between the near-equal bracket terms.
double g_fourier_freespace(double k, const KernelParams& p, const FreeSpaceMollification& moll);
Vec2 h_fourier_freespace(const Vec2& kvec, const KernelParams& p, const FreeSpaceMollification& moll);

}  // namespace yukawa
