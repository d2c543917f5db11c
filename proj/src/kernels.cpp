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

#include "yukawa/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "yukawa/specfun.hpp"

namespace yukawa
{

void validate(const KernelParams& p)
{
    if (!(p.alpha > 0.0) || !std::isfinite(p.alpha))
        throw std::invalid_argument("KernelParams: alpha must be positive");
    if (!(p.xi > 0.0) || !std::isfinite(p.xi))
        throw std::invalid_argument("KernelParams: xi must be positive");
    if (!(p.box_length > 0.0) || !std::isfinite(p.box_length))
        throw std::invalid_argument("KernelParams: box_length must be positive");
}

double g_direct(double r, const KernelParams& p)
{
    if (!(r > 0.0)) throw std::domain_error("g_direct: kernel is singular at r = 0");
    return bessel_k(0, p.alpha * r);
}

Vec2 h_direct(const Vec2& rvec, const KernelParams& p)
{
    double r = rvec.norm();
    if (!(r > 0.0)) throw std::domain_error("h_direct: kernel is singular at r = 0");
    return bessel_k(1, p.alpha * r) / r * rvec;
}

double g_real(double r, const KernelParams& p)
{
    if (!(r > 0.0)) throw std::domain_error("g_real: singular at r = 0");
    double xi2 = p.xi * p.xi;
    return 0.5 * inc_bessel_k(0, r * r * xi2, p.alpha * p.alpha / (4.0 * xi2));
}

Vec2 h_real(const Vec2& rvec, const KernelParams& p)
{
    double r2 = rvec.squaredNorm();
    if (!(r2 > 0.0)) throw std::domain_error("h_real: singular at r = 0");
    double xi2 = p.xi * p.xi;
    double k = inc_bessel_k(-1, r2 * xi2, p.alpha * p.alpha / (4.0 * xi2));
    return (xi2 / p.alpha) * k * rvec;
}

double g_fourier_periodic(double k, const KernelParams& p)
{
    double a2k2 = p.alpha * p.alpha + k * k;
    return 2.0 * M_PI / a2k2 * std::exp(-a2k2 / (4.0 * p.xi * p.xi));
}

Vec2 h_fourier_periodic(const Vec2& kvec, const KernelParams& p)
{
    return (-1.0 / p.alpha) * g_fourier_periodic(kvec.norm(), p) * kvec;
}

double g_self(const KernelParams& p)
{
    return -0.5 * expint_en(1, p.alpha * p.alpha / (4.0 * p.xi * p.xi));
}

Vec2 h_self(const KernelParams&)
{
    return Vec2::Zero();
}

double g_fourier_freespace(double k, const KernelParams& p, const FreeSpaceMollification& moll)
{
    double a = p.alpha, R = moll.R;
    double a2k2 = a * a + k * k;
    double screen = std::exp(-a2k2 / (4.0 * p.xi * p.xi));
    double kR = k * R;
    double bracket;
    if (kR < 1e-4)
    {
        // small-k series of the Bessel-J factors; the k-independent part is
        // grouped so the alpha*R*K1 cancellation happens once
        double k0 = bessel_k(0, a * R);
        double k1 = bessel_k(1, a * R);
        bracket = (1.0 - a * R * k1) + k * k * (0.5 * R * R * k0 + 0.25 * a * R * R * R * k1);
    }
    else
    {
        double j0, j1;
        bessel_j01(kR, j0, j1);
        bracket = 1.0 + kR * j1 * bessel_k(0, a * R) - a * R * j0 * bessel_k(1, a * R);
    }
    return 2.0 * M_PI / a2k2 * bracket * screen;
}

Vec2 h_fourier_freespace(const Vec2& kvec, const KernelParams& p, const FreeSpaceMollification& moll)
{
    return (-1.0 / p.alpha) * g_fourier_freespace(kvec.norm(), p, moll) * kvec;
}

}  // namespace yukawa
