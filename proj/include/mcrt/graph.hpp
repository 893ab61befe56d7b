#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mcrt/errors.hpp"
#include "mcrt/path.hpp"

namespace mcrt {

// Per-cell minima of the coordinate paths. Vertex i (0-based) owns the time
// interval [i*eps, (i+1)*eps]; both endpoints are included in the minimum, so
// consecutive cells share one grid sample.
struct CellMinSeq {
    double epsilon = 0.0;
    std::size_t count = 0;
    std::vector<double> min_l, min_r;
    std::vector<double> argmin_l, argmin_r; // earliest attaining grid time
    std::size_t tie_count = 0;              // adjacent cells with equal minima

    // Contiguous sub-window [first, first+n). Minima comparisons are
    // shift-invariant, so a slice is a valid window in its own right.
    CellMinSeq slice(std::size_t first, std::size_t n) const {
        if (first + n > count) throw domain_error("CellMinSeq::slice: out of range");
        CellMinSeq out;
        out.epsilon = epsilon;
        out.count = n;
        out.min_l.assign(min_l.begin() + first, min_l.begin() + first + n);
        out.min_r.assign(min_r.begin() + first, min_r.begin() + first + n);
        out.argmin_l.assign(argmin_l.begin() + first, argmin_l.begin() + first + n);
        out.argmin_r.assign(argmin_r.begin() + first, argmin_r.begin() + first + n);
        return out;
    }
};

inline CellMinSeq cell_minima(const PathPair& path, double epsilon) {
    if (!(epsilon > 0.0)) throw domain_error("cell_minima: epsilon must be positive");
    if (epsilon > path.horizon * (1.0 + 1e-12))
        throw domain_error("cell_minima: epsilon exceeds horizon");
    const double ratio = epsilon / path.mesh;
    const auto samples_per_cell = static_cast<std::size_t>(std::llround(ratio));
    if (samples_per_cell < 1 || std::abs(ratio - static_cast<double>(samples_per_cell)) > 1e-6)
        throw domain_error("cell_minima: mesh must divide epsilon");
    // Brownian infima need oversampling; lattice minima are exact at mesh 1.
    const std::size_t min_oversample = (path.kind == PathKind::brownian) ? 8 : 1;
    if (samples_per_cell < min_oversample)
        throw domain_error("cell_minima: epsilon must be at least 8*mesh for brownian paths");

    const auto cell_count = static_cast<std::size_t>(
        std::floor(path.horizon / epsilon + 1e-9));
    if (cell_count < 1 || cell_count * samples_per_cell > path.step_count())
        throw domain_error("cell_minima: window does not fit the sampled path");

    CellMinSeq cells;
    cells.epsilon = epsilon;
    cells.count = cell_count;
    cells.min_l.resize(cell_count);
    cells.min_r.resize(cell_count);
    cells.argmin_l.resize(cell_count);
    cells.argmin_r.resize(cell_count);

    auto window_min = [&](const std::vector<double>& samples, std::size_t cell,
                          double& value, double& argmin_time) {
        const std::size_t begin = cell * samples_per_cell;
        const std::size_t end = begin + samples_per_cell; // inclusive
        double best = samples[begin];
        std::size_t best_at = begin;
        for (std::size_t s = begin + 1; s <= end; ++s) {
            if (samples[s] < best) {
                best = samples[s];
                best_at = s;
            }
        }
        value = best;
        argmin_time = static_cast<double>(best_at) * path.mesh;
    };

    for (std::size_t i = 0; i < cell_count; ++i) {
        window_min(path.samples_l, i, cells.min_l[i], cells.argmin_l[i]);
        window_min(path.samples_r, i, cells.min_r[i], cells.argmin_r[i]);
    }
    for (std::size_t i = 0; i + 1 < cell_count; ++i) {
        if (cells.min_l[i] == cells.min_l[i + 1]) ++cells.tie_count;
        if (cells.min_r[i] == cells.min_r[i + 1]) ++cells.tie_count;
    }
    return cells;
}

enum class Side : std::uint8_t { L = 0, R = 1 };

inline char side_char(Side s) { return s == Side::L ? 'L' : 'R'; }

struct Edge {
    std::uint32_t i = 0, j = 0; // i < j
    Side side = Side::L;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge& a, const Edge& b) {
        if (auto c = a.i <=> b.i; c != 0) return c;
        if (auto c = a.j <=> b.j; c != 0) return c;
        return static_cast<int>(a.side) <=> static_cast<int>(b.side);
    }
};

// The window graph. Vertices 0..count-1; per pair at most one edge per side
// (multiplicity <= 2 in total); consecutive pairs always carry the
// conventional single L edge. Adjacency is stored CSR-style with one entry
// per edge instance, so multiplicity-weighted walks read it directly.
struct MatedCrtGraph {
    std::size_t count = 0;
    std::vector<Edge> edges;              // sorted by (i, j, side)
    std::vector<std::uint32_t> offsets;   // size count+1
    std::vector<std::uint32_t> neighbors; // flattened, one slot per edge end
    std::vector<Side> neighbor_sides;
    std::vector<std::uint8_t> boundary;   // per-vertex window-boundary flag

    std::size_t degree(std::uint32_t v) const { return offsets[v + 1] - offsets[v]; }
    std::size_t edge_count() const { return edges.size(); }

    std::size_t max_degree() const {
        std::size_t best = 0;
        for (std::uint32_t v = 0; v < count; ++v) best = std::max(best, degree(v));
        return best;
    }
    std::size_t boundary_count() const {
        std::size_t n = 0;
        for (auto b : boundary) n += b;
        return n;
    }
};

namespace detail {

inline void build_adjacency(MatedCrtGraph& graph) {
    graph.offsets.assign(graph.count + 1, 0);
    for (const Edge& e : graph.edges) {
        ++graph.offsets[e.i + 1];
        ++graph.offsets[e.j + 1];
    }
    for (std::size_t v = 0; v < graph.count; ++v)
        graph.offsets[v + 1] += graph.offsets[v];
    graph.neighbors.resize(2 * graph.edges.size());
    graph.neighbor_sides.resize(2 * graph.edges.size());
    std::vector<std::uint32_t> cursor(graph.offsets.begin(), graph.offsets.end() - 1);
    for (const Edge& e : graph.edges) {
        graph.neighbors[cursor[e.i]] = e.j;
        graph.neighbor_sides[cursor[e.i]++] = e.side;
        graph.neighbors[cursor[e.j]] = e.i;
        graph.neighbor_sides[cursor[e.j]++] = e.side;
    }
}

// Valley-visibility edges for one side: (i,j) with j >= i+2 is an edge iff
// max(m[i], m[j]) <= min of the strictly intermediate values (non-strict,
// exactly as in the defining inequality). The stack holds indices whose value
// is no larger than everything after them within the processed prefix; only
// those can still gain right edges. Work is O(count + edges emitted).
inline void visibility_edges(const std::vector<double>& m, Side side,
                             std::vector<Edge>& out) {
    const std::size_t n = m.size();
    std::vector<std::uint32_t> stack;
    stack.reserve(64);
    stack.push_back(0);
    for (std::uint32_t j = 1; j < n; ++j) {
        const double w = m[j];
        // Walk down: element below `upper` is adjacent to j iff m[upper] >= w
        // (the running minimum of the intermediates is attained at `upper`).
        for (std::size_t s = stack.size(); s >= 2; --s) {
            if (m[stack[s - 1]] < w) break;
            out.push_back(Edge{stack[s - 2], j, side});
        }
        while (!stack.empty() && m[stack.back()] > w) stack.pop_back();
        stack.push_back(j);
    }
}

inline std::vector<std::uint8_t> running_min_flags(const CellMinSeq& cells) {
    const std::size_t n = cells.count;
    std::vector<std::uint8_t> flags(n, 0);
    flags[0] = 1;
    flags[n - 1] = 1;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    for (const auto* m : {&cells.min_l, &cells.min_r}) {
        double prefix = kInf;
        for (std::size_t i = 0; i < n; ++i) {
            if ((*m)[i] <= prefix) flags[i] = 1;
            prefix = std::min(prefix, (*m)[i]);
        }
        double suffix = kInf;
        for (std::size_t i = n; i-- > 0;) {
            if ((*m)[i] <= suffix) flags[i] = 1;
            suffix = std::min(suffix, (*m)[i]);
        }
    }
    return flags;
}

} // namespace detail

inline MatedCrtGraph build_graph(const CellMinSeq& cells) {
    if (cells.count < 2) throw domain_error("build_graph: need at least 2 cells");

    MatedCrtGraph graph;
    graph.count = cells.count;
    graph.edges.reserve(4 * cells.count);
    for (std::uint32_t i = 0; i + 1 < cells.count; ++i)
        graph.edges.push_back(Edge{i, i + 1, Side::L}); // conventional axis edge
    detail::visibility_edges(cells.min_l, Side::L, graph.edges);
    detail::visibility_edges(cells.min_r, Side::R, graph.edges);
    // The stack pass re-emits consecutive pairs only via (s-2, j), never
    // (j-1, j), so the axis edges above are the unique consecutive edges.
    std::sort(graph.edges.begin(), graph.edges.end());
    graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()),
                      graph.edges.end());
    detail::build_adjacency(graph);
    graph.boundary = detail::running_min_flags(cells);
    return graph;
}

// Assemble a graph from an explicit edge list (file parsing, hand-built test
// fixtures). Flags default to none.
inline MatedCrtGraph graph_from_edges(std::size_t count, std::vector<Edge> edges,
                                      std::vector<std::uint8_t> boundary = {}) {
    MatedCrtGraph graph;
    graph.count = count;
    for (auto& e : edges) {
        if (e.i == e.j || e.i >= count || e.j >= count)
            throw domain_error("graph_from_edges: bad edge endpoint");
        if (e.i > e.j) std::swap(e.i, e.j);
    }
    std::sort(edges.begin(), edges.end());
    graph.edges = std::move(edges);
    detail::build_adjacency(graph);
    graph.boundary = boundary.empty() ? std::vector<std::uint8_t>(count, 0)
                                      : std::move(boundary);
    if (graph.boundary.size() != count)
        throw domain_error("graph_from_edges: flag vector size mismatch");
    return graph;
}

// Resolve exactly tied cell minima into the left-lower strict order by
// index-ordered ulp nudges. Distinct minima are what the continuum paths have
// almost surely; on a grid, adjacent windows share a boundary sample and can
// tie exactly, which creates arc crossings no axis drawing can realize.
// Resolution changes no macroscopically distinct comparison (nudges are a few
// ulps) and guarantees the laminar arc structure the drawing needs. The
// adjacency rule itself stays literal; callers opt in before planar work.
inline CellMinSeq resolve_min_ties(CellMinSeq cells) {
    auto resolve = [](std::vector<double>& m) {
        std::vector<std::uint32_t> order(m.size());
        for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return m[a] != m[b] ? m[a] < m[b] : a < b;
        });
        for (std::size_t k = 1; k < order.size(); ++k) {
            if (m[order[k]] <= m[order[k - 1]])
                m[order[k]] = std::nextafter(m[order[k - 1]],
                                             std::numeric_limits<double>::infinity());
        }
    };
    resolve(cells.min_l);
    resolve(cells.min_r);
    cells.tie_count = 0;
    return cells;
}

// Comparison invariance: rescaling the two coordinates by positive constants
// never changes the edge set. Returns the edge-for-edge comparison result.
inline bool scale_check(const PathPair& path, double a, double b, double epsilon) {
    if (!(a > 0.0) || !(b > 0.0))
        throw domain_error("scale_check: scale factors must be positive");
    PathPair scaled = path;
    for (double& v : scaled.samples_l) v *= a;
    for (double& v : scaled.samples_r) v *= b;
    const MatedCrtGraph base = build_graph(cell_minima(path, epsilon));
    const MatedCrtGraph other = build_graph(cell_minima(scaled, epsilon));
    return base.edges == other.edges;
}

} // namespace mcrt
