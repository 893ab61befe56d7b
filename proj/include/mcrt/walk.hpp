#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "mcrt/errors.hpp"
#include "mcrt/graph.hpp"
#include "mcrt/laplace.hpp"
#include "mcrt/parallel.hpp"
#include "mcrt/rng.hpp"
#include "mcrt/stats.hpp"

namespace mcrt {

enum class StopReason : std::uint8_t { hit_target, left_region, step_budget };

struct WalkPath {
    std::vector<std::uint32_t> vertices;
    StopReason stop_reason = StopReason::step_budget;
    std::size_t steps = 0;
};

struct WalkOutcome {
    std::uint32_t final_vertex = 0;
    std::size_t steps = 0;
    StopReason stop_reason = StopReason::step_budget;
};

namespace detail {

inline std::uint32_t walk_step(const MatedCrtGraph& graph, std::uint32_t v, Rng& rng) {
    const std::uint32_t deg = graph.offsets[v + 1] - graph.offsets[v];
    // Each incident edge instance is equally likely, so double edges carry
    // twice the transition weight.
    return graph.neighbors[graph.offsets[v] + rng.uniform_below(deg)];
}

} // namespace detail

// Multiplicity-weighted simple random walk until `stop(vertex, step)` returns
// a reason or the budget runs out. The predicate is consulted at step 0.
template <class StopFn>
WalkPath simulate_walk(const MatedCrtGraph& graph, std::uint32_t start, StopFn&& stop,
                       std::size_t max_steps, Rng& rng) {
    if (start >= graph.count) throw domain_error("simulate_walk: start out of range");
    if (graph.degree(start) == 0) throw domain_error("simulate_walk: start vertex is isolated");
    if (max_steps < 1) throw domain_error("simulate_walk: max_steps must be >= 1");

    WalkPath path;
    path.vertices.push_back(start);
    std::uint32_t v = start;
    if (auto reason = stop(v, std::size_t{0})) {
        path.stop_reason = *reason;
        return path;
    }
    for (std::size_t step = 1; step <= max_steps; ++step) {
        v = detail::walk_step(graph, v, rng);
        path.vertices.push_back(v);
        path.steps = step;
        if (auto reason = stop(v, step)) {
            path.stop_reason = *reason;
            return path;
        }
    }
    path.stop_reason = StopReason::step_budget;
    return path;
}

// Same contract without trajectory storage; the Monte Carlo drivers use this.
template <class StopFn>
WalkOutcome walk_until(const MatedCrtGraph& graph, std::uint32_t start, StopFn&& stop,
                       std::size_t max_steps, Rng& rng) {
    if (start >= graph.count) throw domain_error("walk_until: start out of range");
    if (graph.degree(start) == 0) throw domain_error("walk_until: start vertex is isolated");
    WalkOutcome out;
    std::uint32_t v = start;
    if (auto reason = stop(v, std::size_t{0})) {
        out.final_vertex = v;
        out.stop_reason = *reason;
        return out;
    }
    for (std::size_t step = 1; step <= max_steps; ++step) {
        v = detail::walk_step(graph, v, rng);
        if (auto reason = stop(v, step)) {
            out.final_vertex = v;
            out.steps = step;
            out.stop_reason = *reason;
            return out;
        }
    }
    out.final_vertex = v;
    out.steps = max_steps;
    out.stop_reason = StopReason::step_budget;
    return out;
}

enum class ReturnMethod : std::uint8_t { exact, monte_carlo };

struct ReturnProbability {
    double value = 0.0;
    double se = 0.0; // zero for the exact method
    ReturnMethod method = ReturnMethod::exact;
};

struct ReturnOptions {
    std::size_t max_exact_vertices = 50000;
    std::size_t mc_trials = 20000;
    std::uint64_t seed = 1;
};

// n-step return probabilities at every requested n in one pass of sparse
// transition products.
inline std::vector<double> return_probability_series(const MatedCrtGraph& graph,
                                                     std::uint32_t v,
                                                     const std::vector<std::size_t>& ns,
                                                     const ReturnOptions& opts = {}) {
    if (v >= graph.count) throw domain_error("return_probability_series: vertex out of range");
    if (ns.empty()) throw domain_error("return_probability_series: no step counts");
    for (std::size_t n : ns)
        if (n < 1) throw domain_error("return_probability_series: n must be >= 1");
    if (graph.count > opts.max_exact_vertices)
        throw resource_error("return_probability_series: graph above exact-method cap");

    const std::size_t n_max = *std::max_element(ns.begin(), ns.end());
    std::vector<double> inv_deg(graph.count);
    for (std::uint32_t u = 0; u < graph.count; ++u) {
        if (graph.degree(u) == 0)
            throw domain_error("return_probability_series: isolated vertex");
        inv_deg[u] = 1.0 / static_cast<double>(graph.degree(u));
    }
    std::vector<double> cur(graph.count, 0.0), next(graph.count, 0.0);
    cur[v] = 1.0;
    std::vector<double> at_step(n_max + 1, 0.0);
    at_step[0] = 1.0;
    for (std::size_t step = 1; step <= n_max; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::uint32_t u = 0; u < graph.count; ++u) {
            const double mass = cur[u];
            if (mass == 0.0) continue;
            const double share = mass * inv_deg[u];
            for (std::uint32_t s = graph.offsets[u]; s < graph.offsets[u + 1]; ++s)
                next[graph.neighbors[s]] += share;
        }
        cur.swap(next);
        at_step[step] = cur[v];
    }
    std::vector<double> out;
    out.reserve(ns.size());
    for (std::size_t n : ns) out.push_back(at_step[n]);
    return out;
}

inline ReturnProbability return_probability(const MatedCrtGraph& graph, std::uint32_t v,
                                            std::size_t n, ReturnMethod method,
                                            const ReturnOptions& opts = {}) {
    if (v >= graph.count) throw domain_error("return_probability: vertex out of range");
    if (n < 1) throw domain_error("return_probability: n must be >= 1");
    ReturnProbability result;
    result.method = method;
    if (method == ReturnMethod::exact) {
        result.value = return_probability_series(graph, v, {n}, opts)[0];
        return result;
    }
    std::vector<std::uint8_t> hits(opts.mc_trials, 0);
    parallel_for(opts.mc_trials, [&](std::size_t trial) {
        Rng rng = Rng::stream(opts.seed, 0x72657475ULL, trial);
        std::uint32_t cur = v;
        for (std::size_t step = 0; step < n; ++step)
            cur = detail::walk_step(graph, cur, rng);
        hits[trial] = cur == v;
    });
    std::size_t count = 0;
    for (auto h : hits) count += h;
    const double p = static_cast<double>(count) / static_cast<double>(opts.mc_trials);
    result.value = p;
    result.se = std::sqrt(p * (1.0 - p) / static_cast<double>(opts.mc_trials));
    return result;
}

namespace detail {

inline double point_distance(const Point& a, const Point& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

inline double point_segment_distance(const Point& p, const Point& a, const Point& b) {
    const double vx = b[0] - a[0], vy = b[1] - a[1];
    const double len2 = vx * vx + vy * vy;
    if (len2 == 0.0) return point_distance(p, a);
    double t = ((p[0] - a[0]) * vx + (p[1] - a[1]) * vy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p[0] - (a[0] + t * vx), p[1] - (a[1] + t * vy));
}

inline double point_polyline_distance(const Point& p, const std::vector<Point>& poly) {
    double best = point_distance(p, poly.front());
    for (std::size_t k = 0; k + 1 < poly.size(); ++k)
        best = std::min(best, point_segment_distance(p, poly[k], poly[k + 1]));
    return best;
}

// Distance from a point to the pinned polygon boundary, negative-free; the
// `inside` flag comes from winding over the convex pin cycle.
inline bool inside_polygon(const Point& p, const std::vector<Point>& poly) {
    bool inside = false;
    for (std::size_t k = 0, m = poly.size() - 1; k < poly.size(); m = k++) {
        const bool crosses = (poly[k][1] > p[1]) != (poly[m][1] > p[1]);
        if (crosses) {
            const double x_at = (poly[m][0] - poly[k][0]) * (p[1] - poly[k][1]) /
                                    (poly[m][1] - poly[k][1]) +
                                poly[k][0];
            if (p[0] < x_at) inside = !inside;
        }
    }
    return inside;
}

inline double polygon_boundary_distance(const Point& p, const std::vector<Point>& poly) {
    double best = point_segment_distance(p, poly.back(), poly.front());
    for (std::size_t k = 0; k + 1 < poly.size(); ++k)
        best = std::min(best, point_segment_distance(p, poly[k], poly[k + 1]));
    return best;
}

} // namespace detail

struct TrialCounts {
    std::size_t successes = 0;
    std::size_t failures = 0;
    std::size_t budget_stops = 0; // counted as failures in the estimate
};

struct CurveFollowResult {
    Estimate estimate;
    TrialCounts counts;
    std::uint32_t start_vertex = 0;
    std::uint64_t seed = 0;
};

struct WalkMcOptions {
    std::size_t max_steps = 0; // 0 = auto (scales with graph size)
};

namespace detail {

inline std::size_t auto_budget(const MatedCrtGraph& graph, const WalkMcOptions& opts) {
    return opts.max_steps > 0 ? opts.max_steps : 200 * graph.count + 20000;
}

} // namespace detail

// Probability that the walk started at the vertex nearest the curve's start
// enters the ball of radius r_small around the curve's endpoint before leaving
// the r_big-neighborhood of the curve (or hitting the pinned boundary).
inline CurveFollowResult curve_follow_probability(const MatedCrtGraph& graph,
                                                  const Embedding& emb,
                                                  const std::vector<Point>& curve,
                                                  double r_small, double r_big,
                                                  std::size_t trials, std::uint64_t seed,
                                                  const WalkMcOptions& opts = {}) {
    if (curve.empty()) throw domain_error("curve_follow_probability: empty curve");
    if (!(0.0 < r_small && r_small < r_big))
        throw domain_error("curve_follow_probability: need 0 < r_small < r_big");
    if (trials < 1) throw domain_error("curve_follow_probability: need at least one trial");
    for (const Point& p : curve) {
        if (!detail::inside_polygon(p, emb.pinned_positions) ||
            detail::polygon_boundary_distance(p, emb.pinned_positions) < r_big)
            throw domain_error("curve_follow_probability: curve exits the window margin");
    }

    // Vertex classification is walk-independent; compute it once.
    enum : std::uint8_t { kFree = 0, kTarget = 1, kOut = 2 };
    std::vector<std::uint8_t> roles(graph.count, kFree);
    std::vector<std::uint8_t> pinned(graph.count, 0);
    for (std::uint32_t v : emb.pinned) pinned[v] = 1;
    std::uint32_t start = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t v = 0; v < graph.count; ++v) {
        const double to_start = detail::point_distance(emb.coords[v], curve.front());
        if (to_start < best) {
            best = to_start;
            start = v; // ties keep the smallest index
        }
        if (detail::point_distance(emb.coords[v], curve.back()) <= r_small)
            roles[v] = kTarget;
        else if (pinned[v] ||
                 detail::point_polyline_distance(emb.coords[v], curve) > r_big)
            roles[v] = kOut;
    }

    const std::size_t budget = detail::auto_budget(graph, opts);
    std::vector<std::uint8_t> outcome(trials, 0);
    parallel_for(trials, [&](std::size_t trial) {
        Rng rng = Rng::stream(seed, 0x63757276ULL, trial);
        const WalkOutcome o = walk_until(
            graph, start,
            [&](std::uint32_t v, std::size_t) -> std::optional<StopReason> {
                if (roles[v] == kTarget) return StopReason::hit_target;
                if (roles[v] == kOut) return StopReason::left_region;
                return std::nullopt;
            },
            budget, rng);
        outcome[trial] = o.stop_reason == StopReason::hit_target  ? 1
                         : o.stop_reason == StopReason::left_region ? 0
                                                                    : 2;
    });

    CurveFollowResult result;
    result.start_vertex = start;
    result.seed = seed;
    for (auto o : outcome) {
        if (o == 1)
            ++result.counts.successes;
        else if (o == 0)
            ++result.counts.failures;
        else
            ++result.counts.budget_stops;
    }
    result.estimate = wilson_interval(result.counts.successes, trials);
    return result;
}

struct AnnulusCrossingResult {
    Estimate pooled;
    Estimate min_start; // weakest sampled start, the quantity bounded below
    std::uint32_t min_start_vertex = 0;
    std::size_t start_count = 0;
    std::size_t budget_stops = 0;
    std::uint64_t seed = 0;
};

// Probability that a walk started in B_{4sr}(center) reaches B_{sr}(center)
// before leaving B_r(center), in the embedded metric.
inline AnnulusCrossingResult annulus_crossing_probability(
    const MatedCrtGraph& graph, const Embedding& emb, const Point& center, double s,
    double r, std::size_t trials, std::uint64_t seed, const WalkMcOptions& opts = {},
    std::size_t max_starts = 16) {
    if (!(s > 0.0 && s <= 0.1))
        throw domain_error("annulus_crossing_probability: need 0 < s <= 1/10");
    if (!(r > 0.0)) throw domain_error("annulus_crossing_probability: r must be positive");
    if (!detail::inside_polygon(center, emb.pinned_positions) ||
        detail::polygon_boundary_distance(center, emb.pinned_positions) < r)
        throw domain_error("annulus_crossing_probability: annulus exits the window");

    std::vector<std::uint32_t> starts;
    std::vector<double> radial(graph.count);
    for (std::uint32_t v = 0; v < graph.count; ++v) {
        radial[v] = detail::point_distance(emb.coords[v], center);
        if (radial[v] <= 4.0 * s * r) starts.push_back(v);
    }
    if (starts.empty())
        throw domain_error("annulus_crossing_probability: no vertex embedded in B_{4sr}");
    if (starts.size() > max_starts) { // deterministic thinning, keeps the spread
        std::vector<std::uint32_t> picked;
        picked.reserve(max_starts);
        for (std::size_t k = 0; k < max_starts; ++k)
            picked.push_back(starts[k * starts.size() / max_starts]);
        starts = std::move(picked);
    }

    const double inner = s * r;
    const std::size_t per_start = std::max<std::size_t>(1, trials / starts.size());
    const std::size_t budget = detail::auto_budget(graph, opts);

    std::vector<std::uint8_t> outcome(per_start * starts.size(), 0);
    parallel_for(outcome.size(), [&](std::size_t slot) {
        const std::uint32_t start = starts[slot / per_start];
        Rng rng = Rng::stream(seed, 0x616e6e75ULL, slot);
        const WalkOutcome o = walk_until(
            graph, start,
            [&](std::uint32_t v, std::size_t) -> std::optional<StopReason> {
                if (radial[v] <= inner) return StopReason::hit_target;
                if (radial[v] >= r) return StopReason::left_region;
                return std::nullopt;
            },
            budget, rng);
        outcome[slot] = o.stop_reason == StopReason::hit_target  ? 1
                        : o.stop_reason == StopReason::left_region ? 0
                                                                   : 2;
    });

    AnnulusCrossingResult result;
    result.seed = seed;
    result.start_count = starts.size();
    std::size_t pooled_hits = 0;
    bool have_min = false;
    for (std::size_t k = 0; k < starts.size(); ++k) {
        std::size_t hits = 0;
        for (std::size_t t = 0; t < per_start; ++t) {
            const std::uint8_t o = outcome[k * per_start + t];
            if (o == 1) ++hits;
            if (o == 2) ++result.budget_stops;
        }
        pooled_hits += hits;
        const Estimate e = wilson_interval(hits, per_start);
        if (!have_min || e.value < result.min_start.value) {
            result.min_start = e;
            result.min_start_vertex = starts[k];
            have_min = true;
        }
    }
    result.pooled = wilson_interval(pooled_hits, per_start * starts.size());
    return result;
}

// Exact absorbing-chain hitting probability P[hit `targets` before `avoid`],
// for cross-checking the Monte Carlo estimators.
inline std::vector<double> exact_hitting_probability(
    const MatedCrtGraph& graph, const std::vector<std::uint32_t>& targets,
    const std::vector<std::uint32_t>& avoid, const SolveOptions& opts = {}) {
    BoundaryValues bv;
    for (std::uint32_t v : targets) bv.emplace_back(v, 1.0);
    for (std::uint32_t v : avoid) bv.emplace_back(v, 0.0);
    return harmonic_extend(graph, bv, opts).values;
}

// Exact mean number of steps before entering `absorbing`.
inline std::vector<double> exact_mean_exit_time(const MatedCrtGraph& graph,
                                                const std::vector<std::uint32_t>& absorbing,
                                                const SolveOptions& opts = {}) {
    std::vector<double> rhs(graph.count);
    for (std::uint32_t v = 0; v < graph.count; ++v)
        rhs[v] = static_cast<double>(graph.degree(v));
    for (std::uint32_t v : absorbing) {
        if (v >= graph.count) throw domain_error("exact_mean_exit_time: vertex out of range");
        rhs[v] = 0.0;
    }
    return solve_poisson(graph, absorbing, rhs, opts);
}

} // namespace mcrt
