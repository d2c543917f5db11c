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

#include "yukawa/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "yukawa/fourier.hpp"
#include "yukawa/specfun.hpp"

namespace yukawa
{
namespace
{

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

SystemMoments compute_moments(const PointCloud& cloud, double box_length)
{
    SystemMoments m;
    m.N = cloud.positions.size();
    m.L = box_length;
    for (double f : cloud.strengths_scalar) m.Q_G += f * f;
    for (const Vec2& f : cloud.strengths_vector) m.Q_H += f.squaredNorm();
    return m;
}

double est_real_g(double r_c, double xi, const KernelParams&, const SystemMoments& m)
{
    const double L = m.L;
    const double x2 = xi * xi;
    const double sq = kPi * m.Q_G * std::exp(-2.0 * r_c * r_c * x2) /
                      (4.0 * L * L * x2 * x2 * x2 * r_c * r_c * r_c * r_c);
    return std::sqrt(sq);
}

double est_real_h(double r_c, double xi, const KernelParams& params, const SystemMoments& m)
{
    const double L = m.L;
    const double sq = kPi * m.Q_H * std::exp(-2.0 * r_c * r_c * xi * xi) /
                      (L * L * params.alpha * params.alpha * r_c * r_c * xi * xi);
    return std::sqrt(sq);
}

double est_k_g(double k_inf, double xi, const KernelParams& params, const SystemMoments& m)
{
    const double L = m.L;
    const double s = params.alpha * params.alpha + k_inf * k_inf;
    const double sq = 512.0 * m.Q_G * kPi * kPi * kPi * xi * xi * xi * xi *
                      std::exp(-0.5 * s / (xi * xi)) /
                      (L * L * L * L * L * s * s * k_inf);
    return std::sqrt(sq);
}

double est_k_h(double k_inf, double xi, const KernelParams& params, const SystemMoments& m)
{
    const double L = m.L;
    const double s = params.alpha * params.alpha + k_inf * k_inf;
    const double sq = 128.0 * kPi * m.Q_H * k_inf * xi * xi * xi * xi *
                      std::exp(-0.5 * s / (xi * xi)) /
                      (L * L * L * L * L * params.alpha * params.alpha * s * s);
    return std::sqrt(sq);
}

double est_k_g_freespace(double k_inf, double xi, const KernelParams& params,
                         const FreeSpaceMollification& moll, const SystemMoments& m)
{
    const double a = params.alpha;
    const double R = moll.R;
    const double s = a * a + k_inf * k_inf;
    const double br = 1.0 / std::sqrt(2.0 * kPi * k_inf) -
                      a * bessel_k(0, a * R) / (std::sqrt(R) * kPi) -
                      a * std::sqrt(R) * bessel_k(1, a * R) / (kPi * k_inf);
    const double sq = 64.0 * m.Q_G * xi * xi * xi * xi * std::exp(-0.5 * s / (xi * xi)) /
                      (m.L * s * s) * br * br;
    return std::sqrt(sq);
}

double est_k_h_freespace(double k_inf, double xi, const KernelParams& params,
                         const FreeSpaceMollification& moll, const SystemMoments& m)
{
    const double a = params.alpha;
    const double R = moll.R;
    const double s = a * a + k_inf * k_inf;
    const double br = std::sqrt(2.0 * kPi * k_inf) -
                      8.0 * a * bessel_k(0, a * R) * k_inf / std::sqrt(R) -
                      2.0 * a * std::sqrt(R) * bessel_k(1, a * R);
    const double sq = 8.0 * m.Q_H * xi * xi * std::exp(-0.5 * s / (xi * xi)) /
                      (m.L * kPi * kPi * a * a * s * s) * br * br;
    return std::sqrt(sq);
}

bool realspace_estimate_in_regime(double r_c, double xi) { return r_c * xi >= 1.0; }

bool kspace_estimate_in_regime(double k_inf, double xi) { return k_inf >= 2.0 * xi; }

double rc_for_tolerance(double tolerance, double xi, const KernelParams& params,
                        const SystemMoments& moments)
{
    if (!(tolerance > 1e-14) || !(tolerance < 1e-1))
        throw std::invalid_argument("tolerance must lie in (1e-14, 1e-1)");
    if (!(xi > 0.0) || !std::isfinite(xi))
        throw std::invalid_argument("xi must be positive and finite");
    const auto est = [&](double r) {
        return std::max(est_real_g(r, xi, params, moments),
                        est_real_h(r, xi, params, moments));
    };
    double r = 0.5 / xi;
    if (est(r) > tolerance) {
        int doublings = 0;
        do {
            r *= 2.0;
            if (++doublings > 60)
                throw std::invalid_argument(
                    "tolerance unreachable: real-space estimate stays above it");
        } while (est(r) > tolerance);
        double rlo = 0.5 * r;
        double rhi = r;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (rlo + rhi);
            if (est(mid) <= tolerance)
                rhi = mid;
            else
                rlo = mid;
        }
        r = rhi;
    }
    return r;
}

double kinf_for_tolerance(double tolerance, double xi, const KernelParams& params,
                          const SystemMoments& moments, bool periodic)
{
    if (!(tolerance > 1e-14) || !(tolerance < 1e-1))
        throw std::invalid_argument("tolerance must lie in (1e-14, 1e-1)");
    if (!(xi > 0.0) || !std::isfinite(xi))
        throw std::invalid_argument("xi must be positive and finite");
    // The free-space radius is provisional here; the final plan only enlarges
    // it, which lowers the realized truncation error.
    FreeSpaceMollification moll;
    if (!periodic) {
        const double lt = params.box_length + pad_delta1(params.alpha, xi, tolerance);
        moll = FreeSpaceMollification{std::sqrt(2.0) * lt, lt};
    }
    const auto est = [&](double k) {
        return periodic ? std::max(est_k_g(k, xi, params, moments),
                                   est_k_h(k, xi, params, moments))
                        : std::max(est_k_g_freespace(k, xi, params, moll, moments),
                                   est_k_h_freespace(k, xi, params, moll, moments));
    };
    // The free-space brackets can cross zero, so a candidate only counts when
    // a margin above it also meets the tolerance.
    const auto accept = [&](double k) {
        return est(k) <= tolerance && est(1.5 * k) <= tolerance;
    };
    double k = 2.0 * kPi / params.box_length;
    int doublings = 0;
    while (!accept(k)) {
        k *= 2.0;
        if (++doublings > 60)
            throw std::invalid_argument("tolerance unreachable: k-space estimate stays above it");
    }
    double klo = 0.5 * k;
    double khi = k;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (klo + khi);
        if (accept(mid))
            khi = mid;
        else
            klo = mid;
    }
    return khi;
}

TuneResult tune(double tolerance, double r_c, const KernelParams& params,
                const SystemMoments& moments, bool periodic)
{
    if (!(tolerance > 1e-14) || !(tolerance < 1e-1))
        throw std::invalid_argument("tolerance must lie in (1e-14, 1e-1)");
    if (!(r_c > 0.0) || !std::isfinite(r_c))
        throw std::invalid_argument("cutoff radius must be positive and finite");
    if (!(params.alpha > 0.0) || !(params.box_length > 0.0))
        throw std::invalid_argument("alpha and box length must be positive");
    const auto real_est = [&](double xi) {
        return std::max(est_real_g(r_c, xi, params, moments),
                        est_real_h(r_c, xi, params, moments));
    };
    double lo = 0.1 / r_c;
    double hi = 100.0 / r_c;
    double xi = lo;
    if (real_est(lo) > tolerance) {
        if (real_est(hi) > tolerance)
            throw std::invalid_argument(
                "tolerance unreachable: real-space estimate stays above it over the xi bracket");
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (real_est(mid) <= tolerance)
                hi = mid;
            else
                lo = mid;
        }
        xi = hi;
    }
    TuneResult out;
    out.xi = xi;
    out.k_inf = kinf_for_tolerance(tolerance, xi, params, moments, periodic);
    out.M = std::max(4, next_fast_size(2 * static_cast<int>(std::ceil(
                            out.k_inf * params.box_length / (2.0 * kPi)))));
    out.real_in_regime = realspace_estimate_in_regime(r_c, xi);
    out.k_in_regime = kspace_estimate_in_regime(out.k_inf, xi);
    return out;
}

}  // namespace yukawa
