#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "mcrt/errors.hpp"
#include "mcrt/rng.hpp"

namespace mcrt {

enum class PathKind : std::uint8_t { brownian, lattice };

// Correlation of the coordinate pair as a function of gamma in (0,2).
// Strictly increasing, -1 at 0+ and +1 at 2-.
inline double bm_correlation(double gamma) {
    if (!(gamma > 0.0 && gamma < 2.0))
        throw domain_error("bm_correlation: gamma must lie in (0,2)");
    return -std::cos(std::numbers::pi * gamma * gamma / 4.0);
}

// Named parameter values for the three standard map models.
inline constexpr double kGammaBipolar = 1.1547005383792515;    // sqrt(4/3)
inline constexpr double kGammaSpanningTree = 1.4142135623730951; // sqrt(2)
inline constexpr double kGammaUniform = 1.632993161855452;     // sqrt(8/3)

// A correlated coordinate pair sampled on the uniform grid 0, mesh, ..., horizon.
// Both sequences start at 0. For brownian kind the increments are i.i.d.
// bivariate Gaussian with per-coordinate variance `mesh` and correlation
// bm_correlation(gamma); for lattice kind they are uniform unit steps of Z^2.
struct PathPair {
    double gamma = kGammaSpanningTree;
    double correlation = 0.0;
    double mesh = 0.0;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    PathKind kind = PathKind::brownian;
    std::uint32_t refine_level = 0; // number of midpoint refinements applied
    std::vector<double> samples_l;
    std::vector<double> samples_r;

    std::size_t size() const { return samples_l.size(); }
    std::size_t step_count() const { return samples_l.empty() ? 0 : samples_l.size() - 1; }
};

namespace detail {

inline std::size_t checked_step_count(double horizon, double mesh, const char* who) {
    if (!(horizon > 0.0) || !(mesh > 0.0))
        throw domain_error(std::string(who) + ": horizon and mesh must be positive");
    const double ratio = horizon / mesh;
    const auto steps = static_cast<std::size_t>(std::llround(ratio));
    if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-6)
        throw domain_error(std::string(who) + ": mesh must divide horizon");
    return steps;
}

} // namespace detail

inline PathPair sample_brownian_pair(double gamma, double horizon, double mesh,
                                     std::uint64_t seed) {
    const double rho = bm_correlation(gamma); // validates gamma
    const std::size_t steps = detail::checked_step_count(horizon, mesh, "sample_brownian_pair");

    PathPair path;
    path.gamma = gamma;
    path.correlation = rho;
    path.mesh = mesh;
    path.horizon = horizon;
    path.seed = seed;
    path.kind = PathKind::brownian;
    path.samples_l.resize(steps + 1);
    path.samples_r.resize(steps + 1);
    path.samples_l[0] = 0.0;
    path.samples_r[0] = 0.0;

    Rng rng = Rng::stream(seed, 0x70617468ULL); // "path"
    const double scale = std::sqrt(mesh);
    double l = 0.0, r = 0.0;
    for (std::size_t i = 1; i <= steps; ++i) {
        double gx, gy;
        rng.gauss_pair(rho, gx, gy);
        l += scale * gx;
        r += scale * gy;
        path.samples_l[i] = l;
        path.samples_r[i] = r;
    }
    return path;
}

// Two-sided simple random walk analog on Z^2: each increment moves exactly one
// coordinate by +-1, uniformly over the four choices.
inline PathPair sample_lattice_walk(long n, std::uint64_t seed) {
    if (n < 1) throw domain_error("sample_lattice_walk: n must be >= 1");

    PathPair path;
    path.gamma = kGammaSpanningTree; // spanning-tree weighted model analog
    path.correlation = 0.0;
    path.mesh = 1.0;
    path.horizon = static_cast<double>(n);
    path.seed = seed;
    path.kind = PathKind::lattice;
    path.samples_l.resize(static_cast<std::size_t>(n) + 1);
    path.samples_r.resize(static_cast<std::size_t>(n) + 1);
    path.samples_l[0] = 0.0;
    path.samples_r[0] = 0.0;

    Rng rng = Rng::stream(seed, 0x77616c6bULL); // "walk"
    double l = 0.0, r = 0.0;
    for (long i = 1; i <= n; ++i) {
        switch (rng.uniform_below(4)) {
            case 0: l += 1.0; break;
            case 1: l -= 1.0; break;
            case 2: r += 1.0; break;
            default: r -= 1.0; break;
        }
        path.samples_l[static_cast<std::size_t>(i)] = l;
        path.samples_r[static_cast<std::size_t>(i)] = r;
    }
    return path;
}

// One midpoint (Levy) refinement step: the mesh halves, old samples are kept,
// and each new midpoint is the bridge average plus Gaussian noise with
// per-coordinate variance mesh/4 and the path's correlation. Noise streams are
// derived from (seed, level, segment), so refining the same path is
// deterministic and independent of evaluation order. Lattice paths refine by
// linear interpolation (their minima are exact already).
inline PathPair refine_midpoint(const PathPair& path) {
    if (path.step_count() < 1)
        throw domain_error("refine_midpoint: empty path");

    PathPair fine = path;
    fine.mesh = path.mesh / 2.0;
    fine.refine_level = path.refine_level + 1;
    const std::size_t steps = path.step_count();
    fine.samples_l.assign(2 * steps + 1, 0.0);
    fine.samples_r.assign(2 * steps + 1, 0.0);

    const double noise_scale = std::sqrt(path.mesh) / 2.0;
    for (std::size_t i = 0; i < steps; ++i) {
        fine.samples_l[2 * i] = path.samples_l[i];
        fine.samples_r[2 * i] = path.samples_r[i];
        double mid_l = 0.5 * (path.samples_l[i] + path.samples_l[i + 1]);
        double mid_r = 0.5 * (path.samples_r[i] + path.samples_r[i + 1]);
        if (path.kind == PathKind::brownian) {
            Rng rng = Rng::stream(path.seed, 0x6d696470ULL, fine.refine_level, i);
            double gx, gy;
            rng.gauss_pair(path.correlation, gx, gy);
            mid_l += noise_scale * gx;
            mid_r += noise_scale * gy;
        }
        fine.samples_l[2 * i + 1] = mid_l;
        fine.samples_r[2 * i + 1] = mid_r;
    }
    fine.samples_l[2 * steps] = path.samples_l[steps];
    fine.samples_r[2 * steps] = path.samples_r[steps];
    return fine;
}

} // namespace mcrt
