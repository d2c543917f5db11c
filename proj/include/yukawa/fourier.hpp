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

// Truncated Gaussian window of support p grid points per dimension:
// w1(x) = exp(-eta x^2 / omega^2) for |x| <= omega = p h / 2, else 0.
struct WindowConfig
{
    int p;
    double eta;
    double h;
    double omega;
};

WindowConfig make_window(int p, double h);              // eta = (0.95)^2 pi p / 2
WindowConfig make_window(int p, double h, double eta);

double window_eval(const Vec2& x, const WindowConfig& cfg);

// Per-dimension transform of the untruncated Gaussian factor,
// sqrt(pi omega^2 / eta) exp(-omega^2 k^2 / (4 eta)). The truncation's effect
// is part of the p-controlled approximation error.
double window_hat(double k, const WindowConfig& cfg);

// Uniform M x M grid with period `side` = M h per dimension; node (i, j) sits
// at (origin + i h, origin + j h). Wavenumbers are k = 2 pi kappa / side with
// kappa in [-M/2, M/2-1].
struct SpectralGrid
{
    int M = 0;
    double h = 0.0;
    double side = 0.0;
    double origin = 0.0;
    Eigen::MatrixXcd values;
};

SpectralGrid make_grid(int M, double h, double origin);

inline int signed_mode(int i, int M) { return i < M / 2 ? i : i - M; }

// DFT service. Forward applies e^{-i k x} (unnormalized); inverse carries the
// 1/M^2. Sizes restricted to small-prime products keep this fast.
void dft2_forward(Eigen::MatrixXcd& a);
void dft2_inverse(Eigen::MatrixXcd& a);

// Wall-clock seconds per pipeline stage, accumulated when a pointer is given.
struct StageTimings
{
    double realspace = 0.0;
    double spread = 0.0;
    double fft = 0.0;
    double scale = 0.0;
    double ifft = 0.0;
    double gather = 0.0;
    double precompute = 0.0;
    double total = 0.0;
};

struct KspaceDiagnostics
{
    // max |imag| / max |real| of the grid after the inverse transform
    double imag_residue_rel = 0.0;
};

// Accumulates sum_n f_n w(x - y_n) on grid nodes. wrap=true folds the support
// block periodically; wrap=false requires the block inside the grid and
// throws a domain error ("domain pad") otherwise.
void spread(const std::vector<Vec2>& positions, const std::vector<double>& strengths,
            SpectralGrid& grid, const WindowConfig& cfg, bool wrap);

// Trapezoidal evaluation h^2 sum_i Re(grid_i) w(x_t - x_i) per target.
std::vector<double> gather(const SpectralGrid& grid, const std::vector<Vec2>& targets,
                           const WindowConfig& cfg, bool wrap);

// Multiplier tables aligned with the grid's signed modes, ready for the
// scaling step (entry (i,j) multiplies mode (kappa_i, kappa_j)). The vector
// kernel's tables carry the i k_j / alpha factor, so they are complex.
Eigen::MatrixXcd multiplier_g_periodic(const KernelParams& params, const SpectralGrid& grid);
void multiplier_h_periodic(const KernelParams& params, const SpectralGrid& grid,
                           Eigen::MatrixXcd& m1, Eigen::MatrixXcd& m2);

// Scaling: grid_hat *= multiplier / window_hat^window_power (2 for the gather
// pipeline, 1 for on-grid evaluation).
void kspace_scale(Eigen::MatrixXcd& grid_hat, const Eigen::MatrixXcd& multiplier,
                  const SpectralGrid& grid, const WindowConfig& cfg, int window_power);
// Vector-kernel variant: contracts the two strength grids into `out`.
void kspace_scale_vec(const Eigen::MatrixXcd& grid1_hat, const Eigen::MatrixXcd& grid2_hat,
                      const Eigen::MatrixXcd& m1, const Eigen::MatrixXcd& m2,
                      const SpectralGrid& grid, const WindowConfig& cfg, int window_power,
                      Eigen::MatrixXcd& out);

// Full periodic k-space pipeline: spread, DFT, scale, inverse DFT, gather.
std::vector<double> kspace_sum_periodic(const PointCloud& sources,
                                        const std::vector<Vec2>& targets,
                                        const KernelParams& params, int M,
                                        const WindowConfig& cfg, Kernel kernel,
                                        StageTimings* timings = nullptr,
                                        KspaceDiagnostics* diag = nullptr);

// Geometry of the free-space evaluation: the box [0, L]^2 padded so the
// screening tail (delta1/2) and the window support (p h / 2) stay inside,
// then enlarged for aperiodic convolution. The box corner lies on a grid node
// so commensurate target grids stay aligned.
struct FreeSpacePlan
{
    KernelParams params;
    double eps = 0.0;    // truncation level of the pads
    int p = 0;
    double k_inf = 0.0;
    int M_box = 0;       // grid intervals across [0, L]
    int n_pad = 0;       // pad nodes per side
    int M_tilde = 0;     // M_box + 2 n_pad
    int M_fft = 0;       // FFT size, small-prime; see make_freespace_plan
    double h = 0.0;      // = L / M_box
    double delta1 = 0.0;
    double L_tilde = 0.0;  // M_tilde h
    double grid_origin = 0.0;  // -n_pad h
    FreeSpaceMollification moll;  // R = sqrt(2) L_tilde
};

// The FFT period M_fft h must exceed the largest window-smeared pair distance
// (L + p h) plus the truncated kernel's reach (R plus the screening tail), so
// every wrapped kernel image lands on zero kernel and the circular convolution
// is exactly aperiodic. The factor 1 + sqrt(2) over L_tilde is the classical
// sufficient form of that bound; both are enforced.

FreeSpacePlan make_freespace_plan(const KernelParams& params, double k_inf, int p, double eps);

// Screening reach: smallest delta such that the screening function drops
// below eps outside |x| = delta / 2. Zero when even the peak is below eps.
double pad_delta1(double alpha, double xi, double eps);

struct FreeSpaceKernelTables
{
    Kernel kernel = Kernel::G;
    bool mollified = true;
    Eigen::MatrixXcd a;  // scalar table, or first vector component
    Eigen::MatrixXcd b;  // second vector component (vector kernel only)
};

// Effective multiplier of the radius-R truncated kernel: the mollified
// transform sampled on the plan's FFT grid. Sampling at spacing 2 pi / (M_fft
// h) periodizes the real-space kernel with the plan period, which is smooth
// (the overlapping tails add instead of being cut) and exact at every pair
// distance the evaluation can touch. Requests below the 1 + sqrt(2)
// upsampling floor are rejected; above it the grid is already past the
// pollution threshold and the tables do not depend on the request.
FreeSpaceKernelTables precompute_mollified(const FreeSpacePlan& plan, Kernel kernel,
                                           double s_f_request = 2.414213562373095,
                                           StageTimings* timings = nullptr);

// Untruncated multiplier sampled directly on the plan's FFT grid; accurate
// only for alpha L / (2 pi) above roughly 1.5, kept for comparison studies.
FreeSpaceKernelTables plain_multiplier_tables(const FreeSpacePlan& plan, Kernel kernel);

std::vector<double> kspace_sum_freespace(const PointCloud& sources,
                                         const std::vector<Vec2>& targets,
                                         const FreeSpacePlan& plan, const WindowConfig& cfg,
                                         const FreeSpaceKernelTables& tables,
                                         StageTimings* timings = nullptr,
                                         KspaceDiagnostics* diag = nullptr);

// On-grid fast path: targets are the K x K lattice (i L/K, j L/K) in row-major
// order (index j_y K + j_x). The lattice must be commensurate with the
// evaluation grid (K divides M, or M divides K); only one power of the window
// is divided out and the gather quadrature is skipped.
std::vector<double> kspace_sum_ongrid_periodic(const PointCloud& sources, int K,
                                               const KernelParams& params, int M,
                                               const WindowConfig& cfg, Kernel kernel,
                                               StageTimings* timings = nullptr);
std::vector<double> kspace_sum_ongrid_freespace(const PointCloud& sources, int K,
                                                const FreeSpacePlan& plan,
                                                const WindowConfig& cfg,
                                                const FreeSpaceKernelTables& tables,
                                                StageTimings* timings = nullptr);

// Row-major K x K lattice of targets over [0, L)^2, matching the on-grid path.
std::vector<Vec2> make_grid_targets(int K, double L);

}  // namespace yukawa
