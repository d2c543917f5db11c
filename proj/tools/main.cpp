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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "yukawa/ewald.hpp"
#include "yukawa/reference.hpp"
#include "yukawa/specfun.hpp"

namespace
{

using namespace yukawa;

constexpr double kPi = 3.141592653589793238462643383279502884;

struct CommonOpts
{
    std::string kernel = "g";
    std::string setting = "per";
    double alpha = 1.0;
    double box = 2.0 * kPi;
    double tol = 1e-10;
    int n = 100;
    std::uint64_t seed = 0;
    double rc = 0.0;
    double xi = 0.0;
    int grid_size = 0;
    int window_p = 24;
    std::string targets = "random";
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_targets)
{
    cmd->add_option("--kernel", o.kernel, "kernel: g (scalar) or h (vector)")
        ->check(CLI::IsMember({"g", "h"}));
    cmd->add_option("--setting", o.setting, "boundary setting: per or free")
        ->check(CLI::IsMember({"per", "free"}));
    cmd->add_option("--alpha", o.alpha, "decay parameter alpha");
    cmd->add_option("--box", o.box, "box side length L");
    cmd->add_option("--tol", o.tol, "RMS error tolerance for tuning");
    cmd->add_option("--seed", o.seed, "RNG seed for synthetic data")->required();
    cmd->add_option("--rc", o.rc, "real-space cutoff (0 = auto)");
    cmd->add_option("--xi", o.xi, "Ewald split parameter (0 = auto)");
    cmd->add_option("--grid-size", o.grid_size, "k-space grid size M (0 = auto)");
    cmd->add_option("--window-p", o.window_p, "window support points per dimension");
    if (with_targets)
        cmd->add_option("--targets", o.targets, "targets: random, grid:KxK or file:PATH");
    cmd->add_option("--out", o.out, "output CSV path (default stdout)");
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Kernel parse_kernel(const CommonOpts& o) { return o.kernel == "g" ? Kernel::G : Kernel::H; }

// Synthetic data streams (counter-based, reproducible across runs):
// positions use counters 0 .. 2N-1, strengths follow at 2N (one counter per
// scalar, two per vector component pair), targets start at counter 2^40.
PointCloud synth_sources(const CommonOpts& o, Kernel kernel)
{
    const SplitMix64 rng{o.seed};
    const std::uint64_t n = static_cast<std::uint64_t>(o.n);
    PointCloud c;
    c.positions.reserve(o.n);
    for (std::uint64_t i = 0; i < n; ++i)
        c.positions.emplace_back(rng.uniform(2 * i) * o.box, rng.uniform(2 * i + 1) * o.box);
    if (kernel == Kernel::G) {
        c.strengths_scalar.reserve(o.n);
        for (std::uint64_t i = 0; i < n; ++i) c.strengths_scalar.push_back(rng.uniform(2 * n + i));
    } else {
        c.strengths_vector.reserve(o.n);
        for (std::uint64_t i = 0; i < n; ++i)
            c.strengths_vector.emplace_back(rng.uniform(2 * n + 2 * i),
                                            rng.uniform(2 * n + 2 * i + 1));
    }
    return c;
}

std::vector<Vec2> synth_targets(const CommonOpts& o, int count)
{
    const SplitMix64 rng{o.seed};
    const std::uint64_t base = std::uint64_t{1} << 40;
    std::vector<Vec2> t;
    t.reserve(count);
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(count); ++i)
        t.emplace_back(rng.uniform(base + 2 * i) * o.box, rng.uniform(base + 2 * i + 1) * o.box);
    return t;
}

struct TargetSpec
{
    enum Kind { Random, Grid, File } kind = Random;
    int K = 0;
    std::string path;
};

TargetSpec parse_targets(const std::string& s)
{
    TargetSpec spec;
    if (s == "random") return spec;
    if (s.rfind("grid:", 0) == 0) {
        const std::string dims = s.substr(5);
        const std::size_t x = dims.find('x');
        if (x == std::string::npos)
            throw std::invalid_argument("--targets grid spec must look like grid:KxK");
        int a = 0, b = 0;
        try {
            a = std::stoi(dims.substr(0, x));
            b = std::stoi(dims.substr(x + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("--targets grid spec must look like grid:KxK");
        }
        if (a != b || a < 1)
            throw std::invalid_argument("--targets grid must be square, grid:KxK with K >= 1");
        spec.kind = TargetSpec::Grid;
        spec.K = a;
        return spec;
    }
    if (s.rfind("file:", 0) == 0) {
        spec.kind = TargetSpec::File;
        spec.path = s.substr(5);
        return spec;
    }
    throw std::invalid_argument("--targets must be random, grid:KxK or file:PATH");
}

template <typename Fn>
void with_output(const std::string& path, Fn fn)
{
    if (path.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream f(path);
    if (!f) throw ParseError("cannot open output file: " + path);
    fn(f);
}

void echo_config(std::ostream& os, const char* command, const CommonOpts& o,
                 const EvalSetup& s)
{
    os << "# command=" << command << " kernel=" << o.kernel << " setting=" << o.setting
       << " alpha=" << fmt(s.params.alpha) << " box=" << fmt(s.params.box_length)
       << " tol=" << fmt(s.tol) << " n=" << o.n << " seed=" << o.seed << "\n";
    os << "# rc=" << fmt(s.r_c) << " xi=" << fmt(s.params.xi) << " k_inf=" << fmt(s.k_inf)
       << " grid=" << s.M << " window_p=" << s.p << "\n";
}

void report_timings(const StageTimings& t)
{
    std::cerr << "# timing realspace=" << fmt(t.realspace) << " spread=" << fmt(t.spread)
              << " fft=" << fmt(t.fft) << " scale=" << fmt(t.scale) << " ifft=" << fmt(t.ifft)
              << " gather=" << fmt(t.gather) << " precompute=" << fmt(t.precompute)
              << " total=" << fmt(t.total) << "\n";
}

SetupRequest request_from(const CommonOpts& o)
{
    SetupRequest req;
    req.alpha = o.alpha;
    req.box_length = o.box;
    req.tol = o.tol;
    req.periodic = o.setting == "per";
    req.p = o.window_p;
    req.r_c = o.rc;
    req.xi = o.xi;
    req.M = o.grid_size;
    return req;
}

int run_eval(const CommonOpts& o)
{
    const Kernel kernel = parse_kernel(o);
    const bool periodic = o.setting == "per";
    const PointCloud sources = synth_sources(o, kernel);
    const SystemMoments moments = compute_moments(sources, o.box);
    const EvalSetup setup = resolve_setup(request_from(o), moments);
    const TargetSpec ts = parse_targets(o.targets);
    std::vector<Vec2> targets;
    bool ongrid = false;
    if (ts.kind == TargetSpec::Grid) {
        targets = make_grid_targets(ts.K, o.box);
        // The on-grid fast path is taken only when the user pinned the grid
        // size and the lattice is commensurate; otherwise fall back to gather.
        if (o.grid_size > 0) {
            const int Mb = periodic ? setup.M
                                    : 2 * static_cast<int>(std::ceil(
                                              setup.k_inf * o.box / (2.0 * kPi)));
            ongrid = Mb % ts.K == 0 || ts.K % Mb == 0;
        }
    } else if (ts.kind == TargetSpec::File) {
        targets = read_point_csv(ts.path).positions;
    } else {
        targets = synth_targets(o, o.n);
    }
    const EvalResult res = ongrid ? ewald_eval_ongrid(sources, ts.K, setup, kernel)
                                  : ewald_eval(sources, targets, setup, kernel);
    with_output(o.out, [&](std::ostream& os) {
        os << "x,y,u\n";
        for (std::size_t i = 0; i < targets.size(); ++i)
            os << fmt(targets[i].x()) << "," << fmt(targets[i].y()) << ","
               << fmt(res.values[i]) << "\n";
        echo_config(os, "eval", o, setup);
        os << "# targets=" << o.targets << " path=" << (ongrid ? "ongrid" : "gather") << "\n";
    });
    report_timings(res.timings);
    return 0;
}

int run_sweep(const CommonOpts& o, const std::string& vary, const std::string& xi_set_str)
{
    const Kernel kernel = parse_kernel(o);
    const bool periodic = o.setting == "per";
    std::vector<double> xi_set;
    {
        std::stringstream ss(xi_set_str);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) xi_set.push_back(std::stod(item));
        if (xi_set.empty()) throw std::invalid_argument("--xi-set must list at least one xi");
    }
    const PointCloud sources = synth_sources(o, kernel);
    const std::vector<Vec2> targets = synth_targets(o, o.n);
    const SystemMoments moments = compute_moments(sources, o.box);
    const double L = o.box;
    const auto rms = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(s / a.size());
    };
    with_output(o.out, [&](std::ostream& os) {
        if (vary == "rc") {
            os << "xi,r_c,measured,estimate,in_regime\n";
            const int steps = 16;
            for (const double xi : xi_set) {
                const KernelParams params{o.alpha, xi, L};
                const RealSumConfig ref_cfg{0.5 * L, false};
                const std::vector<double> uref =
                    kernel == Kernel::G
                        ? real_sum_g(sources, targets, params, ref_cfg, periodic)
                        : real_sum_h(sources, targets, params, ref_cfg, periodic);
                for (int j = 1; j <= steps; ++j) {
                    const double r = 0.5 * L * j / steps;
                    const RealSumConfig cfg{r, false};
                    const std::vector<double> u =
                        kernel == Kernel::G
                            ? real_sum_g(sources, targets, params, cfg, periodic)
                            : real_sum_h(sources, targets, params, cfg, periodic);
                    const double est = kernel == Kernel::G
                                           ? est_real_g(r, xi, params, moments)
                                           : est_real_h(r, xi, params, moments);
                    os << fmt(xi) << "," << fmt(r) << "," << fmt(rms(u, uref)) << ","
                       << fmt(est) << "," << (realspace_estimate_in_regime(r, xi) ? 1 : 0)
                       << "\n";
                }
            }
        } else {
            os << "xi,k_inf,measured,estimate,in_regime\n";
            const DirectMode dmode{periodic, -1};
            const KernelParams dparams{o.alpha, 1.0, L};
            const std::vector<double> udirect =
                direct_sum(sources, targets, dparams, dmode, kernel);
            for (const double xi : xi_set) {
                const KernelParams params{o.alpha, xi, L};
                const RealSumConfig full_cfg{0.5 * L, true};
                const std::vector<double> ureal =
                    kernel == Kernel::G
                        ? real_sum_g(sources, targets, params, full_cfg, periodic)
                        : real_sum_h(sources, targets, params, full_cfg, periodic);
                int last_M = 0;
                for (int j = 0; j <= 16; ++j) {
                    const double k_want = xi * (0.5 + 3.5 * j / 16.0);
                    const int M = std::max(
                        4, 2 * static_cast<int>(std::ceil(k_want * L / (2.0 * kPi))));
                    if (M == last_M) continue;
                    last_M = M;
                    std::vector<double> ukspace;
                    double k_real = 0.0, est = 0.0;
                    if (periodic) {
                        k_real = kPi * M / L;
                        const WindowConfig wcfg = make_window(o.window_p, L / M);
                        ukspace = kspace_sum_periodic(sources, targets, params, M, wcfg,
                                                      kernel);
                        est = kernel == Kernel::G ? est_k_g(k_real, xi, params, moments)
                                                  : est_k_h(k_real, xi, params, moments);
                    } else {
                        const FreeSpacePlan plan =
                            make_freespace_plan(params, kPi * M / L, o.window_p, o.tol);
                        k_real = kPi * plan.M_box / L;
                        const FreeSpaceKernelTables tables =
                            precompute_mollified(plan, kernel);
                        const WindowConfig wcfg = make_window(o.window_p, plan.h);
                        ukspace = kspace_sum_freespace(sources, targets, plan, wcfg, tables);
                        est = kernel == Kernel::G
                                  ? est_k_g_freespace(k_real, xi, params, plan.moll, moments)
                                  : est_k_h_freespace(k_real, xi, params, plan.moll, moments);
                    }
                    std::vector<double> total(ureal);
                    for (std::size_t i = 0; i < total.size(); ++i) total[i] += ukspace[i];
                    os << fmt(xi) << "," << fmt(k_real) << "," << fmt(rms(total, udirect))
                       << "," << fmt(est) << ","
                       << (kspace_estimate_in_regime(k_real, xi) ? 1 : 0) << "\n";
                }
            }
        }
        os << "# command=sweep vary=" << vary << " xi_set=" << xi_set_str
           << " kernel=" << o.kernel << " setting=" << o.setting << " alpha=" << fmt(o.alpha)
           << " box=" << fmt(L) << " n=" << o.n << " seed=" << o.seed << "\n";
    });
    return 0;
}

int run_bench(const CommonOpts& o, const std::vector<int>& n_list)
{
    const Kernel kernel = parse_kernel(o);
    if (n_list.empty()) throw std::invalid_argument("--n must list at least one size");
    std::vector<double> log_n, log_t, log_nlogn;
    with_output(o.out, [&](std::ostream& os) {
        os << "N,r_c,xi,M,realspace,spread,fft,scale,ifft,gather,precompute,total\n";
        for (const int N : n_list) {
            if (N < 1) throw std::invalid_argument("bench sizes must be positive");
            CommonOpts oN = o;
            oN.n = N;
            const PointCloud sources = synth_sources(oN, kernel);
            const std::vector<Vec2> targets = synth_targets(oN, N);
            const SystemMoments moments = compute_moments(sources, o.box);
            SetupRequest req = request_from(oN);
            // Constant neighbor density: about 25 sources inside the cutoff
            // disc regardless of N, unless the cutoff was pinned by hand.
            if (req.r_c <= 0.0) req.r_c = o.box * std::sqrt(25.0 / (kPi * N));
            const EvalSetup setup = resolve_setup(req, moments);
            EvalResult best;
            for (int rep = 0; rep < 2; ++rep) {
                EvalResult r = ewald_eval(sources, targets, setup, kernel);
                if (rep == 0 || r.timings.total < best.timings.total) best = std::move(r);
            }
            const StageTimings& t = best.timings;
            os << N << "," << fmt(setup.r_c) << "," << fmt(setup.params.xi) << "," << setup.M
               << "," << fmt(t.realspace) << "," << fmt(t.spread) << "," << fmt(t.fft) << ","
               << fmt(t.scale) << "," << fmt(t.ifft) << "," << fmt(t.gather) << ","
               << fmt(t.precompute) << "," << fmt(t.total) << "\n";
            log_n.push_back(std::log(static_cast<double>(N)));
            log_nlogn.push_back(std::log(N * std::log(static_cast<double>(N))));
            log_t.push_back(std::log(t.total));
        }
        const auto slope = [](const std::vector<double>& x, const std::vector<double>& y) {
            const std::size_t n = x.size();
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t i = 0; i < n; ++i) {
                sx += x[i];
                sy += y[i];
                sxx += x[i] * x[i];
                sxy += x[i] * y[i];
            }
            return (n * sxy - sx * sy) / (n * sxx - sx * sx);
        };
        os << "# command=bench kernel=" << o.kernel << " setting=" << o.setting
           << " alpha=" << fmt(o.alpha) << " box=" << fmt(o.box) << " tol=" << fmt(o.tol)
           << " seed=" << o.seed << " window_p=" << o.window_p << "\n";
        if (n_list.size() >= 2) {
            os << "# fitted_exponent_N=" << fmt(slope(log_n, log_t)) << "\n";
            os << "# fitted_exponent_NlogN=" << fmt(slope(log_nlogn, log_t)) << "\n";
        }
    });
    return 0;
}

int run_alpha_study(const CommonOpts& o)
{
    if (o.setting != "free")
        throw std::invalid_argument("alpha-study requires --setting free");
    const Kernel kernel = parse_kernel(o);
    const double L = o.box;
    with_output(o.out, [&](std::ostream& os) {
        os << "alpha_L_over_2pi,err_plain,err_mollified,gap_at_zero\n";
        const int points = 25;
        double plain_ok_above = 0.0;
        for (int j = 0; j < points; ++j) {
            const double v = 0.05 * std::pow(100.0, j / static_cast<double>(points - 1));
            CommonOpts oj = o;
            oj.alpha = v * 2.0 * kPi / L;
            const PointCloud sources = synth_sources(oj, kernel);
            const std::vector<Vec2>& targets = sources.positions;
            const SystemMoments moments = compute_moments(sources, L);
            const EvalSetup setup = resolve_setup(request_from(oj), moments);
            const FreeSpacePlan plan =
                make_freespace_plan(setup.params, setup.k_inf, setup.p, setup.tol);
            const WindowConfig wcfg = make_window(setup.p, plan.h);
            const FreeSpaceKernelTables moll_tables = precompute_mollified(plan, kernel);
            const FreeSpaceKernelTables plain_tables = plain_multiplier_tables(plan, kernel);
            const RealSumConfig rcfg{setup.r_c, true};
            const std::vector<double> ureal =
                kernel == Kernel::G
                    ? real_sum_g(sources, targets, setup.params, rcfg, false)
                    : real_sum_h(sources, targets, setup.params, rcfg, false);
            const std::vector<double> uref =
                direct_sum(sources, targets, setup.params, DirectMode{false, -1}, kernel);
            const auto total_err = [&](const FreeSpaceKernelTables& tables) {
                const std::vector<double> uk =
                    kspace_sum_freespace(sources, targets, plan, wcfg, tables);
                double err = 0.0;
                for (std::size_t i = 0; i < uref.size(); ++i)
                    err = std::max(err, std::abs(ureal[i] + uk[i] - uref[i]));
                return err;
            };
            const double err_moll = total_err(moll_tables);
            const double err_plain = total_err(plain_tables);
            if (err_plain > 1e-8) plain_ok_above = v;
            const double a = setup.params.alpha;
            const double gap = 2.0 * kPi * plan.moll.R / a * bessel_k(1, a * plan.moll.R) *
                               std::exp(-a * a / (4.0 * setup.params.xi * setup.params.xi));
            os << fmt(v) << "," << fmt(err_plain) << "," << fmt(err_moll) << "," << fmt(gap)
               << "\n";
        }
        os << "# command=alpha-study kernel=" << o.kernel << " box=" << fmt(L)
           << " tol=" << fmt(o.tol) << " n=" << o.n << " seed=" << o.seed << "\n";
        os << "# plain_ok_above=" << fmt(plain_ok_above) << "\n";
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"2D Yukawa fast summation (K0 / K1 kernels, Ewald + spectral k-space)"};
    app.require_subcommand(1);

    CommonOpts eval_opts;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate the potential at targets");
    add_common(eval_cmd, eval_opts, true);
    eval_cmd->add_option("--n", eval_opts.n, "number of synthetic sources/targets");

    CommonOpts sweep_opts;
    std::string vary = "rc";
    std::string xi_set = "3,5,10,15";
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "measured error and estimate over a parameter sweep");
    add_common(sweep_cmd, sweep_opts, false);
    sweep_cmd->add_option("--n", sweep_opts.n, "number of synthetic sources/targets");
    sweep_cmd->add_option("--vary", vary, "swept parameter")
        ->check(CLI::IsMember({"rc", "kinf"}));
    sweep_cmd->add_option("--xi-set", xi_set, "comma-separated xi values");

    CommonOpts bench_opts;
    std::vector<int> bench_n;
    CLI::App* bench_cmd = app.add_subcommand("bench", "stage timings over problem sizes");
    add_common(bench_cmd, bench_opts, false);
    bench_cmd->add_option("--n", bench_n, "problem sizes (repeatable)");

    CommonOpts alpha_opts;
    CLI::App* alpha_cmd =
        app.add_subcommand("alpha-study", "plain vs mollified multiplier across alpha");
    add_common(alpha_cmd, alpha_opts, false);
    alpha_cmd->add_option("--n", alpha_opts.n, "number of synthetic sources/targets");
    alpha_opts.setting = "free";

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (eval_cmd->parsed()) return run_eval(eval_opts);
        if (sweep_cmd->parsed()) return run_sweep(sweep_opts, vary, xi_set);
        if (bench_cmd->parsed()) return run_bench(bench_opts, bench_n);
        if (alpha_cmd->parsed()) return run_alpha_study(alpha_opts);
    } catch (const yukawa::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
