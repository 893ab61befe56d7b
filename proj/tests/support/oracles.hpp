#pragma once

// Independent test oracles. Everything here recomputes results from first
// principles (quadratic scans, dense linear algebra) and must stay decoupled
// from the production code paths it cross-checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mcrt/graph.hpp"
#include "mcrt/path.hpp"

namespace oracles {

// Literal transcription of the defining adjacency inequality, evaluated on
// the raw path samples: vertices i < j are side-adjacent iff
//   max(min over cell i, min over cell j) <= min over [right end of cell i,
//   left end of cell j],
// with all infima taken over grid samples. Consecutive pairs carry the single
// conventional L edge. O(N^2) pairs with O(1) range minima via a sparse table.
class RangeMin {
public:
    explicit RangeMin(const std::vector<double>& xs) {
        const std::size_t n = xs.size();
        levels_.push_back(xs);
        for (std::size_t len = 1; 2 * len <= n; len *= 2) {
            const auto& prev = levels_.back();
            std::vector<double> next(prev.size() - len);
            for (std::size_t i = 0; i + len < prev.size(); ++i)
                next[i] = std::min(prev[i], prev[i + len]);
            levels_.push_back(std::move(next));
        }
    }

    // Minimum over the inclusive sample range [a, b].
    double operator()(std::size_t a, std::size_t b) const {
        if (a > b) throw std::logic_error("RangeMin: bad range");
        if (a == b) return levels_[0][a];
        const std::size_t k = log2_floor(b - a + 1);
        return std::min(levels_[k][a], levels_[k][b + 1 - (std::size_t{1} << k)]);
    }

private:
    static std::size_t log2_floor(std::size_t v) {
        std::size_t k = 0;
        while ((std::size_t{2} << k) <= v) ++k;
        return k;
    }
    std::vector<std::vector<double>> levels_;
};

inline std::vector<mcrt::Edge> literal_adjacency(const mcrt::PathPair& path,
                                                 double epsilon) {
    const auto spc = static_cast<std::size_t>(std::llround(epsilon / path.mesh));
    const auto n = static_cast<std::size_t>(std::floor(path.horizon / epsilon + 1e-9));
    const RangeMin min_l(path.samples_l), min_r(path.samples_r);

    std::vector<mcrt::Edge> edges;
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        edges.push_back({i, i + 1, mcrt::Side::L});
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 2; j < n; ++j) {
            // cell k spans samples [k*spc, (k+1)*spc]; the inner interval is
            // [right end of cell i, left end of cell j].
            const std::size_t mid_a = (i + 1) * spc, mid_b = j * spc;
            const double a_l = min_l(i * spc, (i + 1) * spc);
            const double b_l = min_l(j * spc, (j + 1) * spc);
            if (std::max(a_l, b_l) <= min_l(mid_a, mid_b))
                edges.push_back({i, j, mcrt::Side::L});
            const double a_r = min_r(i * spc, (i + 1) * spc);
            const double b_r = min_r(j * spc, (j + 1) * spc);
            if (std::max(a_r, b_r) <= min_r(mid_a, mid_b))
                edges.push_back({i, j, mcrt::Side::R});
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

// Same relation evaluated directly on a minima sequence (for hand-built
// fixtures where only the cell minima are specified).
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> visibility_pairs(
    const std::vector<double>& m) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (std::uint32_t i = 0; i < m.size(); ++i) {
        for (std::uint32_t j = i + 2; j < m.size(); ++j) {
            double inner = m[i + 1];
            for (std::uint32_t t = i + 1; t < j; ++t) inner = std::min(inner, m[t]);
            if (std::max(m[i], m[j]) <= inner) pairs.emplace_back(i, j);
        }
    }
    return pairs;
}

// Dense Gaussian elimination with partial pivoting; the test-side linear
// solver, independent of the library's Cholesky/CG paths.
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
        if (a[pivot * n + col] == 0.0) throw std::logic_error("dense_solve: singular");
        if (pivot != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double v = b[row];
        for (std::size_t k = row + 1; k < n; ++k) v -= a[row * n + k] * x[k];
        x[row] = v / a[row * n + row];
    }
    return x;
}

// Expected visits to `v` (time 0 included) before hitting `absorbing`, via the
// dense fundamental matrix: solve (I - Q) x = e_v; then x_u = N_{u v} and the
// wanted diagonal entry is x_v.
inline double expected_visits(const mcrt::MatedCrtGraph& graph, std::uint32_t v,
                              const std::vector<std::uint32_t>& absorbing) {
    std::vector<std::uint8_t> absorbed(graph.count, 0);
    for (auto a : absorbing) absorbed[a] = 1;
    if (absorbed[v]) throw std::logic_error("expected_visits: v is absorbing");

    std::vector<std::uint32_t> local(graph.count, UINT32_MAX), vertex;
    for (std::uint32_t u = 0; u < graph.count; ++u) {
        if (!absorbed[u]) {
            local[u] = static_cast<std::uint32_t>(vertex.size());
            vertex.push_back(u);
        }
    }
    const std::size_t n = vertex.size();
    std::vector<double> a(n * n, 0.0), b(n, 0.0);
    for (std::size_t row = 0; row < n; ++row) {
        const std::uint32_t u = vertex[row];
        a[row * n + row] = 1.0;
        const double inv_deg = 1.0 / static_cast<double>(graph.degree(u));
        for (std::uint32_t s = graph.offsets[u]; s < graph.offsets[u + 1]; ++s) {
            const std::uint32_t w = graph.neighbors[s];
            if (!absorbed[w]) a[row * n + local[w]] -= inv_deg;
        }
    }
    b[local[v]] = 1.0;
    const std::vector<double> x = dense_solve(std::move(a), std::move(b));
    return x[local[v]];
}

// Exact hitting probability P_x[hit A before B] via the dense linear system.
inline std::vector<double> hitting_probability(const mcrt::MatedCrtGraph& graph,
                                               const std::vector<std::uint32_t>& targets,
                                               const std::vector<std::uint32_t>& avoid) {
    std::vector<int> role(graph.count, 0); // 1 target, -1 avoid
    for (auto t : targets) role[t] = 1;
    for (auto t : avoid) role[t] = -1;
    std::vector<std::uint32_t> local(graph.count, UINT32_MAX), vertex;
    for (std::uint32_t u = 0; u < graph.count; ++u) {
        if (role[u] == 0) {
            local[u] = static_cast<std::uint32_t>(vertex.size());
            vertex.push_back(u);
        }
    }
    const std::size_t n = vertex.size();
    std::vector<double> a(n * n, 0.0), b(n, 0.0);
    for (std::size_t row = 0; row < n; ++row) {
        const std::uint32_t u = vertex[row];
        a[row * n + row] = 1.0;
        const double inv_deg = 1.0 / static_cast<double>(graph.degree(u));
        for (std::uint32_t s = graph.offsets[u]; s < graph.offsets[u + 1]; ++s) {
            const std::uint32_t w = graph.neighbors[s];
            if (role[w] == 0)
                a[row * n + local[w]] -= inv_deg;
            else if (role[w] == 1)
                b[row] += inv_deg;
        }
    }
    const std::vector<double> x = dense_solve(std::move(a), std::move(b));
    std::vector<double> full(graph.count, 0.0);
    for (std::uint32_t u = 0; u < graph.count; ++u) {
        if (role[u] == 1) full[u] = 1.0;
        else if (role[u] == 0) full[u] = x[local[u]];
    }
    return full;
}

// Mean steps to absorption via the dense fundamental-matrix system.
inline std::vector<double> mean_exit_time(const mcrt::MatedCrtGraph& graph,
                                          const std::vector<std::uint32_t>& absorbing) {
    std::vector<std::uint8_t> absorbed(graph.count, 0);
    for (auto a : absorbing) absorbed[a] = 1;
    std::vector<std::uint32_t> local(graph.count, UINT32_MAX), vertex;
    for (std::uint32_t u = 0; u < graph.count; ++u) {
        if (!absorbed[u]) {
            local[u] = static_cast<std::uint32_t>(vertex.size());
            vertex.push_back(u);
        }
    }
    const std::size_t n = vertex.size();
    std::vector<double> a(n * n, 0.0), b(n, 1.0);
    for (std::size_t row = 0; row < n; ++row) {
        const std::uint32_t u = vertex[row];
        a[row * n + row] = 1.0;
        const double inv_deg = 1.0 / static_cast<double>(graph.degree(u));
        for (std::uint32_t s = graph.offsets[u]; s < graph.offsets[u + 1]; ++s) {
            const std::uint32_t w = graph.neighbors[s];
            if (!absorbed[w]) a[row * n + local[w]] -= inv_deg;
        }
    }
    const std::vector<double> x = dense_solve(std::move(a), std::move(b));
    std::vector<double> full(graph.count, 0.0);
    for (std::uint32_t u = 0; u < graph.count; ++u)
        if (!absorbed[u]) full[u] = x[local[u]];
    return full;
}

} // namespace oracles
