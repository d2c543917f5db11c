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

#include "yukawa/reference.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "yukawa/ewald.hpp"
#include "yukawa/specfun.hpp"

namespace yukawa
{
namespace
{

constexpr double kPi = 3.141592653589793238462643383279502884;

struct SimpsonState
{
    double acc = 0.0;
    double err = 0.0;
};

void adapt_simpson(const std::function<double(double)>& f, double a, double m, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth,
                   SimpsonState& st)
{
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Past the roundoff floor of the local mass the delta is noise and
    // splitting cannot improve it, so accept even if tol keeps shrinking.
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() *
                         (std::abs(left) + std::abs(right) + std::abs(whole));
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol || std::abs(delta) <= floor) {
        st.acc += left + right + delta / 15.0;
        st.err += std::abs(delta) / 15.0;
        return;
    }
    adapt_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1, st);
    adapt_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1, st);
}

}  // namespace

OracleReport quad_inc_bessel(int nu, double z, double omega, double tol)
{
    if (nu < -1 || nu > 1) throw std::domain_error("order must be -1, 0 or 1");
    if (!(z >= 0.0) || !(omega >= 0.0) || !std::isfinite(z) || !std::isfinite(omega))
        throw std::domain_error("arguments must be nonnegative and finite");
    if (z == 0.0 && nu <= 0) throw std::domain_error("integral diverges at z = 0 for nu <= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const auto f = [&](double u) -> double {
        if (u <= 0.0) return z > 0.0 ? 0.0 : 1.0;  // z = 0 only reaches here with nu = 1
        if (z > 0.0 && u < z / 1500.0) return 0.0;
        const double e = -z / u - omega * u + (nu - 1) * std::log(u);
        return e < -745.0 ? 0.0 : std::exp(e);
    };
    SimpsonState st;
    const double fa = f(0.0);
    const double fm = f(0.5);
    const double fb = f(1.0);
    const double whole = (1.0 / 6.0) * (fa + 4.0 * fm + fb);
    adapt_simpson(f, 0.0, 0.5, 1.0, fa, fm, fb, whole, tol, 48, st);
    if (st.err > 10.0 * tol)
        throw std::runtime_error("oracle quadrature did not converge to the requested tol");
    OracleReport report;
    report.value = st.acc;
    report.accuracy = st.err;
    std::ostringstream os;
    os << "quad_inc_bessel nu=" << nu << " z=" << z << " omega=" << omega << " tol=" << tol;
    report.config = os.str();
    return report;
}

std::vector<double> direct_ksum(const PointCloud& sources, const std::vector<Vec2>& targets,
                                const KernelParams& params, double k_inf, Kernel kernel,
                                bool periodic, const FreeSpaceMollification* moll,
                                int quad_refine)
{
    validate(params);
    if (!(k_inf > 0.0) || !std::isfinite(k_inf))
        throw std::invalid_argument("k_inf must be positive and finite");
    const std::size_t N = sources.positions.size();
    if (kernel == Kernel::G && sources.strengths_scalar.size() != N)
        throw std::invalid_argument("scalar kernel requires scalar strengths");
    if (kernel == Kernel::H && sources.strengths_vector.size() != N)
        throw std::invalid_argument("vector kernel requires vector strengths");
    const double a = params.alpha;
    const double x2 = params.xi * params.xi;

    // Mode geometry: periodic sums run over the engine's mode set for the
    // grid implied by k_inf; free space uses a trapezoid of the k-integral.
    double dk = 0.0;
    int lo = 0, hi = 0;
    double prefactor = 0.0;
    double K0R = 0.0, K1R = 0.0;
    if (periodic) {
        const double L = params.box_length;
        const int M = 2 * static_cast<int>(std::ceil(k_inf * L / (2.0 * kPi)));
        dk = 2.0 * kPi / L;
        lo = -M / 2;
        hi = M / 2 - 1;
        prefactor = 1.0 / (L * L);
    } else {
        if (moll == nullptr)
            throw std::invalid_argument("free-space oracle needs the mollification radius");
        if (quad_refine < 2) throw std::invalid_argument("quadrature refinement must be >= 2");
        dk = 2.0 * kPi / (quad_refine * moll->L_tilde);
        const double k_cut = 2.0 * params.xi * std::sqrt(std::log(1e18));
        const int n = static_cast<int>(std::ceil(k_cut / dk));
        lo = -n;
        hi = n;
        prefactor = dk * dk / (4.0 * kPi * kPi);
        const double aR = a * moll->R;
        K0R = bessel_k(0, aR);
        K1R = bessel_k(1, aR);
    }
    const auto multiplier = [&](double kmag) -> double {
        const double s = a * a + kmag * kmag;
        const double damp = std::exp(-s / (4.0 * x2));
        if (periodic) return 2.0 * kPi * damp / s;
        double br;
        if (kmag * moll->R < 1e-8)
            br = 1.0 - a * moll->R * K1R;
        else
            br = 1.0 + kmag * moll->R * bessel_j(1, kmag * moll->R) * K0R -
                 a * moll->R * bessel_j(0, kmag * moll->R) * K1R;
        return 2.0 * kPi * br * damp / s;
    };

    // Per-mode coefficients from the source sums, then one sweep per target.
    const int span = hi - lo + 1;
    std::vector<std::complex<double>> coeff(static_cast<std::size_t>(span) * span);
    std::vector<double> kv(span);
    for (int i = 0; i < span; ++i) kv[i] = dk * (lo + i);
    for (int i2 = 0; i2 < span; ++i2) {
        for (int i1 = 0; i1 < span; ++i1) {
            const double kx = kv[i1];
            const double ky = kv[i2];
            const double kmag = std::hypot(kx, ky);
            std::complex<double> rho(0.0, 0.0);
            if (kernel == Kernel::G) {
                for (std::size_t n = 0; n < N; ++n) {
                    const double phase = -(kx * sources.positions[n].x() +
                                           ky * sources.positions[n].y());
                    rho += sources.strengths_scalar[n] *
                           std::complex<double>(std::cos(phase), std::sin(phase));
                }
                coeff[static_cast<std::size_t>(i2) * span + i1] = multiplier(kmag) * rho;
            } else {
                for (std::size_t n = 0; n < N; ++n) {
                    const double phase = -(kx * sources.positions[n].x() +
                                           ky * sources.positions[n].y());
                    const double proj = kx * sources.strengths_vector[n].x() +
                                        ky * sources.strengths_vector[n].y();
                    rho += proj * std::complex<double>(std::cos(phase), std::sin(phase));
                }
                coeff[static_cast<std::size_t>(i2) * span + i1] =
                    std::complex<double>(0.0, -multiplier(kmag) / a) * rho;
            }
        }
    }
    std::vector<double> out(targets.size(), 0.0);
    for (std::size_t t = 0; t < targets.size(); ++t) {
        std::complex<double> acc(0.0, 0.0);
        for (int i2 = 0; i2 < span; ++i2) {
            for (int i1 = 0; i1 < span; ++i1) {
                const double phase = kv[i1] * targets[t].x() + kv[i2] * targets[t].y();
                acc += coeff[static_cast<std::size_t>(i2) * span + i1] *
                       std::complex<double>(std::cos(phase), std::sin(phase));
            }
        }
        out[t] = prefactor * acc.real();
    }
    return out;
}

double cross_xi_check(const PointCloud& sources, const std::vector<Vec2>& targets,
                      double alpha, double box_length, double xi1, double xi2,
                      double tolerance, Kernel kernel, bool periodic)
{
    const SystemMoments moments = compute_moments(sources, box_length);
    const auto eval_at = [&](double xi) {
        SetupRequest req;
        req.alpha = alpha;
        req.box_length = box_length;
        req.tol = tolerance;
        req.periodic = periodic;
        req.xi = xi;
        const EvalSetup setup = resolve_setup(req, moments);
        return ewald_eval(sources, targets, setup, kernel).values;
    };
    const std::vector<double> v1 = eval_at(xi1);
    const std::vector<double> v2 = eval_at(xi2);
    double dev = 0.0;
    for (std::size_t i = 0; i < v1.size(); ++i) dev = std::max(dev, std::abs(v1[i] - v2[i]));
    return dev;
}

}  // namespace yukawa
