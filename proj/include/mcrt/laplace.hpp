#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "mcrt/errors.hpp"
#include "mcrt/graph.hpp"

namespace mcrt {

using BoundaryValues = std::vector<std::pair<std::uint32_t, double>>;

enum class SolveMethod : std::uint8_t { automatic, dense, cg };

struct SolveOptions {
    double tolerance = 1e-9;           // interior mean-value residual, sup norm
    SolveMethod method = SolveMethod::automatic;
    std::size_t dense_limit = 2000;    // unknown count below which dense is used
};

// Discrete harmonic extension result. `residual` is the largest interior
// defect |value - multiplicity-weighted neighbor average|.
struct HarmonicSolution {
    std::vector<double> values;
    std::vector<std::uint32_t> boundary; // sorted pinned vertices
    double residual = 0.0;
    double tolerance = 0.0;
};

namespace detail {

// Sparse interior system: row i holds the interior-neighbor instances of the
// i-th unknown; diag is the full degree (boundary instances included).
struct InteriorSystem {
    std::vector<std::uint32_t> vertex_of;  // local -> vertex
    std::vector<std::uint32_t> local_of;   // vertex -> local or UINT32_MAX
    std::vector<std::uint32_t> row_offsets;
    std::vector<std::uint32_t> cols;
    std::vector<double> diag;
    std::vector<double> rhs;
};

inline InteriorSystem interior_system(const MatedCrtGraph& graph,
                                      const std::vector<std::uint8_t>& pinned,
                                      const std::vector<double>& pinned_value,
                                      const std::vector<double>* extra_rhs) {
    InteriorSystem sys;
    sys.local_of.assign(graph.count, UINT32_MAX);
    for (std::uint32_t v = 0; v < graph.count; ++v) {
        if (!pinned[v]) {
            sys.local_of[v] = static_cast<std::uint32_t>(sys.vertex_of.size());
            sys.vertex_of.push_back(v);
        }
    }
    const std::size_t n = sys.vertex_of.size();
    sys.row_offsets.assign(n + 1, 0);
    sys.diag.assign(n, 0.0);
    sys.rhs.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t v = sys.vertex_of[i];
        sys.diag[i] = static_cast<double>(graph.degree(v));
        std::uint32_t interior_nbrs = 0;
        for (std::uint32_t s = graph.offsets[v]; s < graph.offsets[v + 1]; ++s) {
            const std::uint32_t w = graph.neighbors[s];
            if (pinned[w])
                sys.rhs[i] += pinned_value[w];
            else
                ++interior_nbrs;
        }
        sys.row_offsets[i + 1] = sys.row_offsets[i] + interior_nbrs;
        if (extra_rhs) sys.rhs[i] += (*extra_rhs)[v];
    }
    sys.cols.resize(sys.row_offsets[n]);
    std::vector<std::uint32_t> cursor(sys.row_offsets.begin(), sys.row_offsets.end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t v = sys.vertex_of[i];
        for (std::uint32_t s = graph.offsets[v]; s < graph.offsets[v + 1]; ++s) {
            const std::uint32_t w = graph.neighbors[s];
            if (!pinned[w]) sys.cols[cursor[i]++] = sys.local_of[w];
        }
    }
    return sys;
}

inline void apply_laplacian(const InteriorSystem& sys, const std::vector<double>& x,
                            std::vector<double>& out) {
    const std::size_t n = sys.diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = sys.diag[i] * x[i];
        for (std::uint32_t s = sys.row_offsets[i]; s < sys.row_offsets[i + 1]; ++s)
            acc -= x[sys.cols[s]];
        out[i] = acc;
    }
}

// In-place Cholesky solve of the dense interior Laplacian. The oracle path:
// used below the dense limit and wherever tests want a CG cross-check.
inline std::vector<double> solve_dense(const InteriorSystem& sys) {
    const std::size_t n = sys.diag.size();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        a[i * n + i] = sys.diag[i];
        for (std::uint32_t s = sys.row_offsets[i]; s < sys.row_offsets[i + 1]; ++s)
            a[i * n + sys.cols[s]] -= 1.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
        double d = a[k * n + k];
        for (std::size_t t = 0; t < k; ++t) d -= a[k * n + t] * a[k * n + t];
        if (d <= 0.0) throw internal_error("solve_dense: matrix not positive definite");
        d = std::sqrt(d);
        a[k * n + k] = d;
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = a[i * n + k];
            for (std::size_t t = 0; t < k; ++t) v -= a[i * n + t] * a[k * n + t];
            a[i * n + k] = v / d;
        }
    }
    std::vector<double> x(sys.rhs);
    for (std::size_t i = 0; i < n; ++i) { // L y = b
        double v = x[i];
        for (std::size_t t = 0; t < i; ++t) v -= a[i * n + t] * x[t];
        x[i] = v / a[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) { // L^T x = y
        double v = x[i];
        for (std::size_t t = i + 1; t < n; ++t) v -= a[t * n + i] * x[t];
        x[i] = v / a[i * n + i];
    }
    return x;
}

inline std::vector<double> solve_cg(const InteriorSystem& sys, double tolerance) {
    const std::size_t n = sys.diag.size();
    std::vector<double> x(n, 0.0), r(sys.rhs), z(n), p(n), ap(n);

    auto mean_value_ok = [&]() {
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(r[i]) > tolerance * sys.diag[i]) return false;
        return true;
    };

    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / sys.diag[i];
    p = z;
    double rz = 0.0;
    for (std::size_t i = 0; i < n; ++i) rz += r[i] * z[i];

    const std::size_t max_iters = 200 + 30 * n;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        if (mean_value_ok()) return x;
        apply_laplacian(sys, p, ap);
        double pap = 0.0;
        for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
        if (pap <= 0.0) throw internal_error("solve_cg: lost positive definiteness");
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / sys.diag[i];
        double rz_next = 0.0;
        for (std::size_t i = 0; i < n; ++i) rz_next += r[i] * z[i];
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw internal_error("solve_cg: iteration cap reached before tolerance");
}

inline void check_reachability(const MatedCrtGraph& graph,
                               const std::vector<std::uint8_t>& pinned) {
    std::vector<std::uint8_t> reached(graph.count, 0);
    std::queue<std::uint32_t> frontier;
    for (std::uint32_t v = 0; v < graph.count; ++v) {
        if (pinned[v]) {
            reached[v] = 1;
            frontier.push(v);
        }
    }
    while (!frontier.empty()) {
        const std::uint32_t v = frontier.front();
        frontier.pop();
        for (std::uint32_t s = graph.offsets[v]; s < graph.offsets[v + 1]; ++s) {
            const std::uint32_t w = graph.neighbors[s];
            if (!reached[w]) {
                reached[w] = 1;
                frontier.push(w);
            }
        }
    }
    for (std::uint32_t v = 0; v < graph.count; ++v)
        if (!reached[v])
            throw unsolvable_error("harmonic solve: interior component touches no boundary");
}

} // namespace detail

// Pin `absorbing` to zero and solve (deg(v) x_v - sum over incident edge
// instances x_w) = rhs_v on the rest. Shared backbone for harmonic extension,
// Green's values, and mean exit times.
inline std::vector<double> solve_poisson(const MatedCrtGraph& graph,
                                         const std::vector<std::uint32_t>& absorbing,
                                         const std::vector<double>& rhs,
                                         const SolveOptions& opts = {}) {
    if (absorbing.empty()) throw domain_error("solve_poisson: absorbing set is empty");
    if (rhs.size() != graph.count) throw domain_error("solve_poisson: rhs size mismatch");
    std::vector<std::uint8_t> pinned(graph.count, 0);
    for (std::uint32_t v : absorbing) {
        if (v >= graph.count) throw domain_error("solve_poisson: vertex out of range");
        pinned[v] = 1;
    }
    detail::check_reachability(graph, pinned);
    std::vector<double> zeros(graph.count, 0.0);
    detail::InteriorSystem sys = detail::interior_system(graph, pinned, zeros, &rhs);
    const bool dense = opts.method == SolveMethod::dense ||
                       (opts.method == SolveMethod::automatic &&
                        sys.diag.size() < opts.dense_limit);
    const std::vector<double> x =
        dense ? detail::solve_dense(sys) : detail::solve_cg(sys, opts.tolerance);
    std::vector<double> full(graph.count, 0.0);
    for (std::size_t i = 0; i < sys.vertex_of.size(); ++i) full[sys.vertex_of[i]] = x[i];
    return full;
}

inline HarmonicSolution harmonic_extend(const MatedCrtGraph& graph,
                                        const BoundaryValues& boundary_values,
                                        const SolveOptions& opts = {}) {
    if (boundary_values.empty())
        throw domain_error("harmonic_extend: boundary set is empty");

    HarmonicSolution sol;
    sol.tolerance = opts.tolerance;
    sol.values.assign(graph.count, 0.0);
    std::vector<std::uint8_t> pinned(graph.count, 0);
    for (const auto& [v, value] : boundary_values) {
        if (v >= graph.count) throw domain_error("harmonic_extend: vertex out of range");
        if (!std::isfinite(value)) throw domain_error("harmonic_extend: non-finite boundary value");
        if (pinned[v] && sol.values[v] != value)
            throw domain_error("harmonic_extend: conflicting values for one vertex");
        pinned[v] = 1;
        sol.values[v] = value;
        sol.boundary.push_back(v);
    }
    std::sort(sol.boundary.begin(), sol.boundary.end());
    sol.boundary.erase(std::unique(sol.boundary.begin(), sol.boundary.end()),
                       sol.boundary.end());

    const auto [lo, hi] = std::minmax_element(
        boundary_values.begin(), boundary_values.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    if (lo->second == hi->second) { // constants are harmonic; skip the solve
        for (std::uint32_t v = 0; v < graph.count; ++v) sol.values[v] = lo->second;
        sol.residual = 0.0;
        return sol;
    }

    detail::check_reachability(graph, pinned);
    detail::InteriorSystem sys =
        detail::interior_system(graph, pinned, sol.values, nullptr);
    const bool dense = opts.method == SolveMethod::dense ||
                       (opts.method == SolveMethod::automatic &&
                        sys.diag.size() < opts.dense_limit);
    const std::vector<double> x =
        dense ? detail::solve_dense(sys) : detail::solve_cg(sys, opts.tolerance);
    for (std::size_t i = 0; i < sys.vertex_of.size(); ++i) sol.values[sys.vertex_of[i]] = x[i];

    double residual = 0.0;
    for (std::size_t i = 0; i < sys.vertex_of.size(); ++i) {
        const std::uint32_t v = sys.vertex_of[i];
        double nbr_sum = 0.0;
        for (std::uint32_t s = graph.offsets[v]; s < graph.offsets[v + 1]; ++s)
            nbr_sum += sol.values[graph.neighbors[s]];
        residual = std::max(residual,
                            std::abs(sol.values[v] - nbr_sum / sys.diag[i]));
    }
    sol.residual = residual;
    if (sol.residual > opts.tolerance * 4.0)
        throw internal_error("harmonic_extend: residual above tolerance after solve");
    return sol;
}

// Sum over edge instances of squared value differences; n-tuple edges count n
// times.
inline double dirichlet_energy(const MatedCrtGraph& graph,
                               const std::vector<double>& values) {
    if (values.size() != graph.count)
        throw domain_error("dirichlet_energy: values missing for some vertices");
    double energy = 0.0;
    for (const Edge& e : graph.edges) {
        const double d = values[e.i] - values[e.j];
        energy += d * d;
    }
    return energy;
}

// Unit conductance per edge instance (doubled edges conduct 2). Equals the
// reciprocal Dirichlet energy of the unit-potential harmonic function.
inline double effective_resistance(const MatedCrtGraph& graph, std::uint32_t source,
                                   const std::vector<std::uint32_t>& sink,
                                   const SolveOptions& opts = {}) {
    if (sink.empty()) throw domain_error("effective_resistance: empty sink set");
    for (std::uint32_t s : sink)
        if (s == source) throw domain_error("effective_resistance: source lies in sink");
    BoundaryValues bv;
    bv.reserve(sink.size() + 1);
    bv.emplace_back(source, 1.0);
    for (std::uint32_t s : sink) bv.emplace_back(s, 0.0);
    const HarmonicSolution sol = harmonic_extend(graph, bv, opts);
    const double energy = dirichlet_energy(graph, sol.values);
    if (!(energy > 0.0))
        throw domain_error("effective_resistance: source and sink are not connected");
    return 1.0 / energy;
}

// Expected visits to v (including time 0) of the multiplicity-weighted walk
// started at v before hitting the absorbing set.
inline double green_diag(const MatedCrtGraph& graph, std::uint32_t v,
                         const std::vector<std::uint32_t>& absorbing,
                         const SolveOptions& opts = {}) {
    if (absorbing.empty())
        throw domain_error("green_diag: absorbing set is empty (walk is never killed)");
    return static_cast<double>(graph.degree(v)) *
           effective_resistance(graph, v, absorbing, opts);
}

using Point = std::array<double, 2>;

struct Embedding {
    std::vector<Point> coords;
    std::vector<std::uint32_t> pinned;      // boundary cycle, in pin order
    std::vector<Point> pinned_positions;
    double residual = 0.0;                  // max over both coordinate solves
    double tolerance = 0.0;

    bool is_pinned(std::uint32_t v) const {
        return std::find(pinned.begin(), pinned.end(), v) != pinned.end();
    }
};

namespace detail {

inline void require_convex(const std::vector<Point>& pts) {
    const std::size_t n = pts.size();
    if (n < 3) throw domain_error("tutte_embed: boundary needs at least 3 vertices");
    int sign = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const Point& a = pts[k];
        const Point& b = pts[(k + 1) % n];
        const Point& c = pts[(k + 2) % n];
        const double cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if (cross == 0.0) throw domain_error("tutte_embed: degenerate boundary polygon");
        const int s = cross > 0.0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign) throw domain_error("tutte_embed: boundary polygon not convex");
    }
}

inline bool cycles_match(const std::vector<std::uint32_t>& a,
                         std::vector<std::uint32_t> b) {
    if (a.size() != b.size()) return false;
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t shift = 0; shift < b.size(); ++shift) {
            bool same = true;
            for (std::size_t k = 0; k < a.size() && same; ++k)
                same = a[k] == b[(k + shift) % b.size()];
            if (same) return true;
        }
        std::reverse(b.begin(), b.end());
    }
    return false;
}

} // namespace detail

// Tutte embedding: pin `cycle` to `positions` (a convex polygon in cycle
// order), place every other vertex at the multiplicity-weighted average of
// its neighbors, i.e. solve the two harmonic extension problems. When
// `expected_outer` is supplied the cycle must be that face (up to rotation
// and reflection). Non-crossing of the drawing is observed, never asserted.
inline Embedding tutte_embed(const MatedCrtGraph& graph,
                             const std::vector<std::uint32_t>& cycle,
                             const std::vector<Point>& positions,
                             const SolveOptions& opts = {},
                             const std::vector<std::uint32_t>* expected_outer = nullptr) {
    if (cycle.size() != positions.size())
        throw domain_error("tutte_embed: cycle/position count mismatch");
    {
        std::vector<std::uint32_t> sorted(cycle);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw domain_error("tutte_embed: repeated vertex in boundary cycle");
        if (!sorted.empty() && sorted.back() >= graph.count)
            throw domain_error("tutte_embed: boundary vertex out of range");
    }
    detail::require_convex(positions);
    if (expected_outer && !detail::cycles_match(cycle, *expected_outer))
        throw domain_error("tutte_embed: boundary cycle is not the outer face");

    Embedding emb;
    emb.tolerance = opts.tolerance;
    emb.pinned = cycle;
    emb.pinned_positions = positions;
    emb.coords.assign(graph.count, Point{0.0, 0.0});
    for (int axis = 0; axis < 2; ++axis) {
        BoundaryValues bv;
        bv.reserve(cycle.size());
        for (std::size_t k = 0; k < cycle.size(); ++k)
            bv.emplace_back(cycle[k], positions[k][axis]);
        const HarmonicSolution sol = harmonic_extend(graph, bv, opts);
        for (std::uint32_t v = 0; v < graph.count; ++v) emb.coords[v][axis] = sol.values[v];
        emb.residual = std::max(emb.residual, sol.residual);
    }
    return emb;
}

inline double embedded_edge_length(const Embedding& emb, const Edge& e) {
    const double dx = emb.coords[e.i][0] - emb.coords[e.j][0];
    const double dy = emb.coords[e.i][1] - emb.coords[e.j][1];
    return std::hypot(dx, dy);
}

// Equally spaced points on the circle of given radius, one per cycle vertex.
inline std::vector<Point> circle_positions(std::size_t n, double radius = 1.0) {
    std::vector<Point> pts(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(n);
        pts[k] = Point{radius * std::cos(theta), radius * std::sin(theta)};
    }
    return pts;
}

} // namespace mcrt
