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

namespace yukawa
{

// Modified Bessel function of the second kind K0 or K1.
// x > 0 required; underflows to 0 for large x instead of throwing.
double bessel_k(int order, double x);

// Bessel function of the first kind J0 or J1, x >= 0.
double bessel_j(int order, double x);

// J0 and J1 at the same argument, sharing the expensive intermediate work.
void bessel_j01(double x, double& j0, double& j1);

// Exponential integral E_n(x) = int_1^inf e^{-x t} / t^n dt, n >= 1, x > 0.
double expint_en(int n, double x);

// Arguments of the incomplete modified Bessel function of the second kind
//   K_nu(z, omega) = int_1^inf e^{-z t - omega / t} / t^{nu+1} dt.
// The integral diverges for z = 0 when nu <= 0, for any omega.
struct IncompleteBesselArgs
{
    int nu;        // in {-1, 0, 1}
    double z;      // >= 0
    double omega;  // >= 0
};

double inc_bessel_k(const IncompleteBesselArgs& args);
double inc_bessel_k(int nu, double z, double omega);

}  // namespace yukawa
