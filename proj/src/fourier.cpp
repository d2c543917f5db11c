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

#include "yukawa/fourier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace yukawa
{
namespace
{

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kMaxWindow = 64;

struct Stopwatch
{
    std::chrono::steady_clock::time_point mark = std::chrono::steady_clock::now();
    double lap()
    {
        const auto t = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(t - mark).count();
        mark = t;
        return s;
    }
};

int wrap_index(int j, int M)
{
    int r = j % M;
    if (r < 0) r += M;
    return r;
}

Eigen::FFT<double>& fft_engine()
{
    static thread_local Eigen::FFT<double> engine;
    return engine;
}

// kissfft cannot transform in place; columns go through a scratch copy.
void dft_cols(Eigen::MatrixXcd& a, bool inverse)
{
    auto& fft = fft_engine();
    const int n = static_cast<int>(a.rows());
    std::vector<std::complex<double>> tmp(n);
    for (int j = 0; j < a.cols(); ++j) {
        std::complex<double>* col = a.col(j).data();
        std::copy(col, col + n, tmp.begin());
        if (inverse)
            fft.inv(col, tmp.data(), n);
        else
            fft.fwd(col, tmp.data(), n);
    }
}

void dft_rows(Eigen::MatrixXcd& a, bool inverse)
{
    auto& fft = fft_engine();
    const int n = static_cast<int>(a.cols());
    std::vector<std::complex<double>> tmp(n), out(n);
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < n; ++j) tmp[j] = a(i, j);
        if (inverse)
            fft.inv(out.data(), tmp.data(), n);
        else
            fft.fwd(out.data(), tmp.data(), n);
        for (int j = 0; j < n; ++j) a(i, j) = out[j];
    }
}

void record_diag(const Eigen::MatrixXcd& v, KspaceDiagnostics* diag)
{
    if (!diag) return;
    double mi = 0.0, mr = 0.0;
    for (int j = 0; j < v.cols(); ++j)
        for (int i = 0; i < v.rows(); ++i) {
            mi = std::max(mi, std::abs(v(i, j).imag()));
            mr = std::max(mr, std::abs(v(i, j).real()));
        }
    diag->imag_residue_rel = mi / std::max(mr, 1e-300);
}

std::vector<double> vector_component(const std::vector<Vec2>& v, int c)
{
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i][c];
    return out;
}

void require_scalar_strengths(const PointCloud& cloud)
{
    if (cloud.strengths_scalar.size() != cloud.positions.size())
        throw std::invalid_argument("scalar kernel requires one scalar strength per source");
}

void require_vector_strengths(const PointCloud& cloud)
{
    if (cloud.strengths_vector.size() != cloud.positions.size())
        throw std::invalid_argument("vector kernel requires one vector strength per source");
}

void check_window_grid(const WindowConfig& cfg, const SpectralGrid& grid)
{
    if (std::abs(cfg.h - grid.h) > 1e-12 * std::max(cfg.h, grid.h))
        throw std::invalid_argument("window spacing differs from grid spacing");
}

}  // namespace

WindowConfig make_window(int p, double h, double eta)
{
    if (p < 2 || p % 2 != 0 || p > kMaxWindow)
        throw std::invalid_argument("window support p must be even with 2 <= p <= 64");
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("window spacing must be positive and finite");
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::invalid_argument("window shape eta must be positive and finite");
    return WindowConfig{p, eta, h, 0.5 * p * h};
}

WindowConfig make_window(int p, double h)
{
    return make_window(p, h, 0.95 * 0.95 * kPi * 0.5 * static_cast<double>(p));
}

double window_eval(const Vec2& x, const WindowConfig& cfg)
{
    double w = 1.0;
    for (int d = 0; d < 2; ++d) {
        if (std::abs(x[d]) > cfg.omega) return 0.0;
        w *= std::exp(-cfg.eta * x[d] * x[d] / (cfg.omega * cfg.omega));
    }
    return w;
}

double window_hat(double k, const WindowConfig& cfg)
{
    return std::sqrt(kPi * cfg.omega * cfg.omega / cfg.eta) *
           std::exp(-cfg.omega * cfg.omega * k * k / (4.0 * cfg.eta));
}

SpectralGrid make_grid(int M, double h, double origin)
{
    if (M < 2) throw std::invalid_argument("grid size must be at least 2");
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("grid spacing must be positive and finite");
    SpectralGrid g;
    g.M = M;
    g.h = h;
    g.side = M * h;
    g.origin = origin;
    g.values = Eigen::MatrixXcd::Zero(M, M);
    return g;
}

void dft2_forward(Eigen::MatrixXcd& a)
{
    dft_cols(a, false);
    dft_rows(a, false);
}

void dft2_inverse(Eigen::MatrixXcd& a)
{
    dft_cols(a, true);
    dft_rows(a, true);
}

void spread(const std::vector<Vec2>& positions, const std::vector<double>& strengths,
            SpectralGrid& grid, const WindowConfig& cfg, bool wrap)
{
    if (positions.size() != strengths.size())
        throw std::invalid_argument("positions and strengths must have matching lengths");
    check_window_grid(cfg, grid);
    const int M = grid.M;
    const int p = cfg.p;
    const int half = p / 2;
    // Grid-unit distances keep the weight h-free: exp(-4 eta d^2 / p^2).
    const double c = 4.0 * cfg.eta / (static_cast<double>(p) * p);
    double wx[kMaxWindow], wy[kMaxWindow];
    int ixs[kMaxWindow], iys[kMaxWindow];
    for (std::size_t s = 0; s < positions.size(); ++s) {
        const double rx = (positions[s].x() - grid.origin) / grid.h;
        const double ry = (positions[s].y() - grid.origin) / grid.h;
        if (!std::isfinite(rx) || !std::isfinite(ry))
            throw std::invalid_argument("point coordinates must be finite");
        const int ix0 = static_cast<int>(std::floor(rx)) - half + 1;
        const int iy0 = static_cast<int>(std::floor(ry)) - half + 1;
        if (!wrap && (ix0 < 0 || iy0 < 0 || ix0 + p > M || iy0 + p > M))
            throw std::domain_error("point support leaves the padded grid");
        for (int a = 0; a < p; ++a) {
            const double dx = (ix0 + a) - rx;
            const double dy = (iy0 + a) - ry;
            wx[a] = std::exp(-c * dx * dx);
            wy[a] = std::exp(-c * dy * dy);
            ixs[a] = wrap ? wrap_index(ix0 + a, M) : ix0 + a;
            iys[a] = wrap ? wrap_index(iy0 + a, M) : iy0 + a;
        }
        const double f = strengths[s];
        for (int b = 0; b < p; ++b) {
            const double fy = f * wy[b];
            auto* colv = grid.values.col(iys[b]).data();
            for (int a = 0; a < p; ++a) colv[ixs[a]] += fy * wx[a];
        }
    }
}

std::vector<double> gather(const SpectralGrid& grid, const std::vector<Vec2>& targets,
                           const WindowConfig& cfg, bool wrap)
{
    check_window_grid(cfg, grid);
    const int M = grid.M;
    const int p = cfg.p;
    const int half = p / 2;
    const double c = 4.0 * cfg.eta / (static_cast<double>(p) * p);
    const double h2 = grid.h * grid.h;
    std::vector<double> out(targets.size(), 0.0);
    parallel_for(targets.size(), [&](std::size_t lo, std::size_t hi) {
        double wx[kMaxWindow], wy[kMaxWindow];
        int ixs[kMaxWindow], iys[kMaxWindow];
        for (std::size_t t = lo; t < hi; ++t) {
            const double rx = (targets[t].x() - grid.origin) / grid.h;
            const double ry = (targets[t].y() - grid.origin) / grid.h;
            if (!std::isfinite(rx) || !std::isfinite(ry))
                throw std::invalid_argument("point coordinates must be finite");
            const int ix0 = static_cast<int>(std::floor(rx)) - half + 1;
            const int iy0 = static_cast<int>(std::floor(ry)) - half + 1;
            if (!wrap && (ix0 < 0 || iy0 < 0 || ix0 + p > M || iy0 + p > M))
                throw std::domain_error("point support leaves the padded grid");
            for (int a = 0; a < p; ++a) {
                const double dx = (ix0 + a) - rx;
                const double dy = (iy0 + a) - ry;
                wx[a] = std::exp(-c * dx * dx);
                wy[a] = std::exp(-c * dy * dy);
                ixs[a] = wrap ? wrap_index(ix0 + a, M) : ix0 + a;
                iys[a] = wrap ? wrap_index(iy0 + a, M) : iy0 + a;
            }
            double acc = 0.0;
            for (int b = 0; b < p; ++b) {
                const auto* colv = grid.values.col(iys[b]).data();
                double row = 0.0;
                for (int a = 0; a < p; ++a) row += colv[ixs[a]].real() * wx[a];
                acc += row * wy[b];
            }
            out[t] = acc * h2;
        }
    });
    return out;
}

Eigen::MatrixXcd multiplier_g_periodic(const KernelParams& params, const SpectralGrid& grid)
{
    const int M = grid.M;
    const double kfac = 2.0 * kPi / grid.side;
    std::vector<double> kv(M);
    for (int i = 0; i < M; ++i) kv[i] = kfac * signed_mode(i, M);
    Eigen::MatrixXcd m(M, M);
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j < hi; ++j)
            for (int i = 0; i < M; ++i)
                m(i, j) = g_fourier_periodic(std::hypot(kv[i], kv[j]), params);
    });
    return m;
}

void multiplier_h_periodic(const KernelParams& params, const SpectralGrid& grid,
                           Eigen::MatrixXcd& m1, Eigen::MatrixXcd& m2)
{
    const int M = grid.M;
    const double kfac = 2.0 * kPi / grid.side;
    std::vector<double> kv(M);
    for (int i = 0; i < M; ++i) kv[i] = kfac * signed_mode(i, M);
    m1.resize(M, M);
    m2.resize(M, M);
    // The unpaired Nyquist row cannot carry the odd i k factor on an even
    // grid; its screened weight is negligible, so those entries are zeroed.
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j < hi; ++j)
            for (int i = 0; i < M; ++i) {
                const Vec2 hv = h_fourier_periodic(Vec2(kv[i], kv[j]), params);
                m1(i, j) = i == M / 2 ? 0.0 : std::complex<double>(0.0, hv.x());
                m2(i, j) = static_cast<int>(j) == M / 2 ? 0.0
                                                        : std::complex<double>(0.0, hv.y());
            }
    });
}

void kspace_scale(Eigen::MatrixXcd& grid_hat, const Eigen::MatrixXcd& multiplier,
                  const SpectralGrid& grid, const WindowConfig& cfg, int window_power)
{
    if (window_power != 1 && window_power != 2)
        throw std::invalid_argument("window power must be 1 or 2");
    const int M = grid.M;
    if (grid_hat.rows() != M || grid_hat.cols() != M || multiplier.rows() != M ||
        multiplier.cols() != M)
        throw std::invalid_argument("scaling arrays must match the grid size");
    const double kfac = 2.0 * kPi / grid.side;
    std::vector<double> winv(M);
    for (int i = 0; i < M; ++i) winv[i] = 1.0 / window_hat(kfac * signed_mode(i, M), cfg);
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j < hi; ++j)
            for (int i = 0; i < M; ++i) {
                double wf = winv[i] * winv[j];
                if (window_power == 2) wf *= wf;
                grid_hat(i, j) *= multiplier(i, j) * wf;
            }
    });
}

void kspace_scale_vec(const Eigen::MatrixXcd& grid1_hat, const Eigen::MatrixXcd& grid2_hat,
                      const Eigen::MatrixXcd& m1, const Eigen::MatrixXcd& m2,
                      const SpectralGrid& grid, const WindowConfig& cfg, int window_power,
                      Eigen::MatrixXcd& out)
{
    if (window_power != 1 && window_power != 2)
        throw std::invalid_argument("window power must be 1 or 2");
    const int M = grid.M;
    if (grid1_hat.rows() != M || grid2_hat.rows() != M || m1.rows() != M || m2.rows() != M)
        throw std::invalid_argument("scaling arrays must match the grid size");
    const double kfac = 2.0 * kPi / grid.side;
    std::vector<double> winv(M);
    for (int i = 0; i < M; ++i) winv[i] = 1.0 / window_hat(kfac * signed_mode(i, M), cfg);
    out.resize(M, M);
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j < hi; ++j)
            for (int i = 0; i < M; ++i) {
                double wf = winv[i] * winv[j];
                if (window_power == 2) wf *= wf;
                out(i, j) = (grid1_hat(i, j) * m1(i, j) + grid2_hat(i, j) * m2(i, j)) * wf;
            }
    });
}

std::vector<double> kspace_sum_periodic(const PointCloud& sources,
                                        const std::vector<Vec2>& targets,
                                        const KernelParams& params, int M,
                                        const WindowConfig& cfg, Kernel kernel,
                                        StageTimings* timings, KspaceDiagnostics* diag)
{
    validate(params);
    if (M < 4 || M % 2 != 0) throw std::invalid_argument("grid size must be even and at least 4");
    if (std::abs(cfg.h * M - params.box_length) > 1e-9 * params.box_length)
        throw std::invalid_argument("window spacing must equal box_length / M");
    Stopwatch sw;
    SpectralGrid grid = make_grid(M, params.box_length / M, 0.0);
    if (kernel == Kernel::G) {
        require_scalar_strengths(sources);
        spread(sources.positions, sources.strengths_scalar, grid, cfg, true);
        if (timings) timings->spread += sw.lap();
        dft2_forward(grid.values);
        if (timings) timings->fft += sw.lap();
        const Eigen::MatrixXcd m = multiplier_g_periodic(params, grid);
        kspace_scale(grid.values, m, grid, cfg, 2);
        if (timings) timings->scale += sw.lap();
        dft2_inverse(grid.values);
        if (timings) timings->ifft += sw.lap();
        record_diag(grid.values, diag);
        auto u = gather(grid, targets, cfg, true);
        if (timings) timings->gather += sw.lap();
        return u;
    }
    require_vector_strengths(sources);
    SpectralGrid grid2 = make_grid(M, params.box_length / M, 0.0);
    spread(sources.positions, vector_component(sources.strengths_vector, 0), grid, cfg, true);
    spread(sources.positions, vector_component(sources.strengths_vector, 1), grid2, cfg, true);
    if (timings) timings->spread += sw.lap();
    dft2_forward(grid.values);
    dft2_forward(grid2.values);
    if (timings) timings->fft += sw.lap();
    Eigen::MatrixXcd m1, m2, scaled;
    multiplier_h_periodic(params, grid, m1, m2);
    kspace_scale_vec(grid.values, grid2.values, m1, m2, grid, cfg, 2, scaled);
    grid.values = std::move(scaled);
    if (timings) timings->scale += sw.lap();
    dft2_inverse(grid.values);
    if (timings) timings->ifft += sw.lap();
    record_diag(grid.values, diag);
    auto u = gather(grid, targets, cfg, true);
    if (timings) timings->gather += sw.lap();
    return u;
}

double pad_delta1(double alpha, double xi, double eps)
{
    // Log form avoids overflow of exp(alpha^2 / 4 xi^2) at strong screening.
    const double log_arg =
        2.0 * std::log(xi) - std::log(kPi) - std::log(eps) - alpha * alpha / (4.0 * xi * xi);
    return log_arg > 0.0 ? 2.0 * std::sqrt(log_arg) / xi : 0.0;
}

FreeSpacePlan make_freespace_plan(const KernelParams& params, double k_inf, int p, double eps)
{
    validate(params);
    if (!(k_inf > 0.0) || !std::isfinite(k_inf))
        throw std::invalid_argument("k_inf must be positive and finite");
    if (p < 2 || p % 2 != 0 || p > kMaxWindow)
        throw std::invalid_argument("window support p must be even with 2 <= p <= 64");
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("pad truncation level must lie in (0, 1)");
    FreeSpacePlan plan;
    plan.params = params;
    plan.eps = eps;
    plan.p = p;
    plan.k_inf = k_inf;
    const double L = params.box_length;
    plan.M_box = 2 * static_cast<int>(std::ceil(k_inf * L / (2.0 * kPi)));
    plan.h = L / plan.M_box;
    plan.delta1 = pad_delta1(params.alpha, params.xi, eps);
    // Pad per side by the larger of the screening reach and the full window
    // support radius, in whole grid steps, so no spread block leaves the grid.
    const double omega = 0.5 * p * plan.h;
    plan.n_pad = static_cast<int>(std::ceil(std::max(0.5 * plan.delta1, omega) / plan.h - 1e-12));
    if (plan.n_pad < p / 2) plan.n_pad = p / 2;
    plan.M_tilde = plan.M_box + 2 * plan.n_pad;
    plan.L_tilde = plan.M_tilde * plan.h;
    // Period large enough that the truncated kernel's wrapped images (reach
    // sqrt(2) L_tilde plus the screening tail) vanish at every difference a
    // window-smeared pair can produce (L + 2 omega); the 1 + sqrt(2) ratio is
    // the classical sufficient form of the same condition.
    const double reach = L + 2.0 * omega + std::sqrt(2.0) * plan.L_tilde + 0.5 * plan.delta1;
    const int m_ratio = static_cast<int>(std::ceil((1.0 + std::sqrt(2.0)) * plan.M_tilde));
    const int m_reach = static_cast<int>(std::ceil(reach / plan.h));
    plan.M_fft = next_fast_size(std::max(m_ratio, m_reach));
    plan.grid_origin = -plan.n_pad * plan.h;
    plan.moll = FreeSpaceMollification{std::sqrt(2.0) * plan.L_tilde, plan.L_tilde};
    return plan;
}

FreeSpaceKernelTables precompute_mollified(const FreeSpacePlan& plan, Kernel kernel,
                                           double s_f_request, StageTimings* timings)
{
    if (!(s_f_request >= 1.0 + std::sqrt(2.0) - 1e-9))
        throw std::invalid_argument("transform upsampling factor must be at least 1 + sqrt(2)");
    Stopwatch sw;
    const int M = plan.M_fft;
    const double kfac = 2.0 * kPi / (M * plan.h);
    std::vector<double> kv(M);
    for (int i = 0; i < M; ++i) kv[i] = kfac * signed_mode(i, M);
    FreeSpaceKernelTables tables;
    tables.kernel = kernel;
    tables.mollified = true;
    const int n_tables = kernel == Kernel::G ? 1 : 2;
    for (int c = 0; c < n_tables; ++c) {
        // Sampling the transform at the grid spacing periodizes the kernel
        // with the plan period: smooth, and exact on every touched difference
        // because the wrapped images land beyond the truncation radius. The
        // unpaired Nyquist row cannot carry the odd vector factor; its true
        // weight is below the screening floor, so it is dropped.
        Eigen::MatrixXcd m(M, M);
        parallel_for(static_cast<std::size_t>(M), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t j = lo; j < hi; ++j)
                for (int i = 0; i < M; ++i) {
                    if (kernel == Kernel::G) {
                        m(i, j) =
                            g_fourier_freespace(std::hypot(kv[i], kv[j]), plan.params, plan.moll);
                    } else if ((c == 0 ? static_cast<int>(i) : static_cast<int>(j)) == M / 2) {
                        m(i, j) = 0.0;
                    } else {
                        const Vec2 hv =
                            h_fourier_freespace(Vec2(kv[i], kv[j]), plan.params, plan.moll);
                        m(i, j) = std::complex<double>(0.0, hv[c]);
                    }
                }
        });
        (c == 0 ? tables.a : tables.b) = std::move(m);
    }
    if (timings) timings->precompute += sw.lap();
    return tables;
}

FreeSpaceKernelTables plain_multiplier_tables(const FreeSpacePlan& plan, Kernel kernel)
{
    const int M = plan.M_fft;
    const double kfac = 2.0 * kPi / (M * plan.h);
    std::vector<double> kv(M);
    for (int i = 0; i < M; ++i) kv[i] = kfac * signed_mode(i, M);
    FreeSpaceKernelTables tables;
    tables.kernel = kernel;
    tables.mollified = false;
    const int n_tables = kernel == Kernel::G ? 1 : 2;
    for (int c = 0; c < n_tables; ++c) {
        Eigen::MatrixXcd m(M, M);
        parallel_for(static_cast<std::size_t>(M), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t j = lo; j < hi; ++j)
                for (int i = 0; i < M; ++i) {
                    if (kernel == Kernel::G) {
                        m(i, j) = g_fourier_periodic(std::hypot(kv[i], kv[j]), plan.params);
                    } else if ((c == 0 ? static_cast<int>(i) : static_cast<int>(j)) == M / 2) {
                        m(i, j) = 0.0;
                    } else {
                        const Vec2 hv = h_fourier_periodic(Vec2(kv[i], kv[j]), plan.params);
                        m(i, j) = std::complex<double>(0.0, hv[c]);
                    }
                }
        });
        (c == 0 ? tables.a : tables.b) = std::move(m);
    }
    return tables;
}

std::vector<double> kspace_sum_freespace(const PointCloud& sources,
                                         const std::vector<Vec2>& targets,
                                         const FreeSpacePlan& plan, const WindowConfig& cfg,
                                         const FreeSpaceKernelTables& tables,
                                         StageTimings* timings, KspaceDiagnostics* diag)
{
    if (cfg.p != plan.p) throw std::invalid_argument("window support differs from the plan");
    if (std::abs(cfg.h - plan.h) > 1e-12 * plan.h)
        throw std::invalid_argument("window spacing differs from the plan");
    Stopwatch sw;
    SpectralGrid grid = make_grid(plan.M_fft, plan.h, plan.grid_origin);
    if (tables.kernel == Kernel::G) {
        require_scalar_strengths(sources);
        spread(sources.positions, sources.strengths_scalar, grid, cfg, false);
        if (timings) timings->spread += sw.lap();
        dft2_forward(grid.values);
        if (timings) timings->fft += sw.lap();
        kspace_scale(grid.values, tables.a, grid, cfg, 2);
        if (timings) timings->scale += sw.lap();
        dft2_inverse(grid.values);
        if (timings) timings->ifft += sw.lap();
        record_diag(grid.values, diag);
        auto u = gather(grid, targets, cfg, false);
        if (timings) timings->gather += sw.lap();
        return u;
    }
    require_vector_strengths(sources);
    SpectralGrid grid2 = make_grid(plan.M_fft, plan.h, plan.grid_origin);
    spread(sources.positions, vector_component(sources.strengths_vector, 0), grid, cfg, false);
    spread(sources.positions, vector_component(sources.strengths_vector, 1), grid2, cfg, false);
    if (timings) timings->spread += sw.lap();
    dft2_forward(grid.values);
    dft2_forward(grid2.values);
    if (timings) timings->fft += sw.lap();
    Eigen::MatrixXcd scaled;
    kspace_scale_vec(grid.values, grid2.values, tables.a, tables.b, grid, cfg, 2, scaled);
    grid.values = std::move(scaled);
    if (timings) timings->scale += sw.lap();
    dft2_inverse(grid.values);
    if (timings) timings->ifft += sw.lap();
    record_diag(grid.values, diag);
    auto u = gather(grid, targets, cfg, false);
    if (timings) timings->gather += sw.lap();
    return u;
}

namespace
{

// Shared tail of the on-grid paths: the grid holds the scaled spectrum (one
// window power divided out); evaluate on the K x K lattice whose node (jx, jy)
// sits at grid index (node0 + jx stride, node0 + jy stride) after an optional
// spectral refinement by the integer factor `refine`.
std::vector<double> ongrid_evaluate(Eigen::MatrixXcd& spectrum, int M, int K, int node0,
                                    int stride, int refine, StageTimings* timings,
                                    Stopwatch& sw)
{
    if (refine > 1) {
        const int Mf = M * refine;
        Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(Mf, Mf);
        for (int j = 0; j < M; ++j) {
            const int jf = wrap_index(signed_mode(j, M), Mf);
            for (int i = 0; i < M; ++i)
                padded(wrap_index(signed_mode(i, M), Mf), jf) = spectrum(i, j);
        }
        spectrum = std::move(padded);
    }
    dft2_inverse(spectrum);
    if (timings) timings->ifft += sw.lap();
    const double scale = static_cast<double>(refine) * refine;
    std::vector<double> out(static_cast<std::size_t>(K) * K);
    for (int jy = 0; jy < K; ++jy)
        for (int jx = 0; jx < K; ++jx)
            out[static_cast<std::size_t>(jy) * K + jx] =
                scale * spectrum(node0 + jx * stride, node0 + jy * stride).real();
    if (timings) timings->gather += sw.lap();
    return out;
}

}  // namespace

std::vector<double> kspace_sum_ongrid_periodic(const PointCloud& sources, int K,
                                               const KernelParams& params, int M,
                                               const WindowConfig& cfg, Kernel kernel,
                                               StageTimings* timings)
{
    validate(params);
    if (K < 1) throw std::invalid_argument("target lattice size must be positive");
    if (M < 4 || M % 2 != 0) throw std::invalid_argument("grid size must be even and at least 4");
    if (std::abs(cfg.h * M - params.box_length) > 1e-9 * params.box_length)
        throw std::invalid_argument("window spacing must equal box_length / M");
    int stride = 0, refine = 1;
    if (M % K == 0) {
        stride = M / K;
    } else if (K % M == 0) {
        refine = K / M;
        stride = 1;
    } else {
        throw std::invalid_argument("target lattice is not commensurate with the grid");
    }
    Stopwatch sw;
    SpectralGrid grid = make_grid(M, params.box_length / M, 0.0);
    if (kernel == Kernel::G) {
        require_scalar_strengths(sources);
        spread(sources.positions, sources.strengths_scalar, grid, cfg, true);
        if (timings) timings->spread += sw.lap();
        dft2_forward(grid.values);
        if (timings) timings->fft += sw.lap();
        const Eigen::MatrixXcd m = multiplier_g_periodic(params, grid);
        kspace_scale(grid.values, m, grid, cfg, 1);
        if (timings) timings->scale += sw.lap();
    } else {
        require_vector_strengths(sources);
        SpectralGrid grid2 = make_grid(M, params.box_length / M, 0.0);
        spread(sources.positions, vector_component(sources.strengths_vector, 0), grid, cfg, true);
        spread(sources.positions, vector_component(sources.strengths_vector, 1), grid2, cfg,
               true);
        if (timings) timings->spread += sw.lap();
        dft2_forward(grid.values);
        dft2_forward(grid2.values);
        if (timings) timings->fft += sw.lap();
        Eigen::MatrixXcd m1, m2, scaled;
        multiplier_h_periodic(params, grid, m1, m2);
        kspace_scale_vec(grid.values, grid2.values, m1, m2, grid, cfg, 1, scaled);
        grid.values = std::move(scaled);
        if (timings) timings->scale += sw.lap();
    }
    return ongrid_evaluate(grid.values, M, K, 0, stride, refine, timings, sw);
}

std::vector<double> kspace_sum_ongrid_freespace(const PointCloud& sources, int K,
                                                const FreeSpacePlan& plan,
                                                const WindowConfig& cfg,
                                                const FreeSpaceKernelTables& tables,
                                                StageTimings* timings)
{
    if (K < 1) throw std::invalid_argument("target lattice size must be positive");
    if (cfg.p != plan.p) throw std::invalid_argument("window support differs from the plan");
    if (std::abs(cfg.h - plan.h) > 1e-12 * plan.h)
        throw std::invalid_argument("window spacing differs from the plan");
    int stride = 0, refine = 1;
    if (plan.M_box % K == 0) {
        stride = plan.M_box / K;
    } else if (K % plan.M_box == 0) {
        refine = K / plan.M_box;
        stride = 1;
    } else {
        throw std::invalid_argument("target lattice is not commensurate with the grid");
    }
    Stopwatch sw;
    SpectralGrid grid = make_grid(plan.M_fft, plan.h, plan.grid_origin);
    if (tables.kernel == Kernel::G) {
        require_scalar_strengths(sources);
        spread(sources.positions, sources.strengths_scalar, grid, cfg, false);
        if (timings) timings->spread += sw.lap();
        dft2_forward(grid.values);
        if (timings) timings->fft += sw.lap();
        kspace_scale(grid.values, tables.a, grid, cfg, 1);
        if (timings) timings->scale += sw.lap();
    } else {
        require_vector_strengths(sources);
        SpectralGrid grid2 = make_grid(plan.M_fft, plan.h, plan.grid_origin);
        spread(sources.positions, vector_component(sources.strengths_vector, 0), grid, cfg,
               false);
        spread(sources.positions, vector_component(sources.strengths_vector, 1), grid2, cfg,
               false);
        if (timings) timings->spread += sw.lap();
        dft2_forward(grid.values);
        dft2_forward(grid2.values);
        if (timings) timings->fft += sw.lap();
        Eigen::MatrixXcd scaled;
        kspace_scale_vec(grid.values, grid2.values, tables.a, tables.b, grid, cfg, 1, scaled);
        grid.values = std::move(scaled);
        if (timings) timings->scale += sw.lap();
    }
    return ongrid_evaluate(grid.values, plan.M_fft, K, plan.n_pad * refine, stride, refine,
                           timings, sw);
}

std::vector<Vec2> make_grid_targets(int K, double L)
{
    if (K < 1) throw std::invalid_argument("target lattice size must be positive");
    if (!(L > 0.0) || !std::isfinite(L))
        throw std::invalid_argument("box length must be positive and finite");
    std::vector<Vec2> targets;
    targets.reserve(static_cast<std::size_t>(K) * K);
    const double s = L / K;
    for (int jy = 0; jy < K; ++jy)
        for (int jx = 0; jx < K; ++jx) targets.emplace_back(jx * s, jy * s);
    return targets;
}

}  // namespace yukawa
