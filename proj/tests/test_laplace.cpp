#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mcrt/laplace.hpp"
#include "mcrt/planar.hpp"
#include "mcrt/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace mcrt;

namespace {

// path 0-1-2 with a single edge (0,1) and a double edge (1,2)
MatedCrtGraph single_double_path() {
    return graph_from_edges(3, {{0, 1, Side::L}, {1, 2, Side::L}, {1, 2, Side::R}});
}

MatedCrtGraph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (std::uint32_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, Side::L});
    return graph_from_edges(n, std::move(edges));
}

} // namespace

TEST_CASE("harmonic midpoint on a path") {
    const MatedCrtGraph g = path_graph(3);
    const HarmonicSolution sol = harmonic_extend(g, {{0, 0.0}, {2, 1.0}});
    CHECK(sol.values[1] == Catch::Approx(0.5).margin(1e-10));
    CHECK(sol.residual <= sol.tolerance);
}

TEST_CASE("double edges weight the mean-value property") {
    const HarmonicSolution sol =
        harmonic_extend(single_double_path(), {{0, 0.0}, {2, 1.0}});
    CHECK(sol.values[1] == Catch::Approx(2.0 / 3.0).margin(1e-10));
}

TEST_CASE("constant boundary data short-circuits") {
    const auto inst = fixtures::brownian_map(64, 8);
    const HarmonicSolution sol = harmonic_extend(
        inst.graph, {{0, 3.25}, {static_cast<std::uint32_t>(inst.graph.count - 1), 3.25}});
    for (double v : sol.values) CHECK(v == 3.25);
    CHECK(sol.residual == 0.0);
}

TEST_CASE("harmonic error paths") {
    const MatedCrtGraph g = path_graph(3);
    CHECK_THROWS_AS(harmonic_extend(g, {}), domain_error);
    CHECK_THROWS_AS(harmonic_extend(g, {{0, std::nan("")}}), domain_error);
    CHECK_THROWS_AS(harmonic_extend(g, {{9, 1.0}}), domain_error);
    // interior component with no boundary contact
    const MatedCrtGraph two = graph_from_edges(
        4, {{0, 1, Side::L}, {2, 3, Side::L}});
    CHECK_THROWS_AS(harmonic_extend(two, {{0, 0.0}, {1, 1.0}}), unsolvable_error);
}

TEST_CASE("dirichlet energy worked values") {
    const MatedCrtGraph p = path_graph(3);
    CHECK(dirichlet_energy(p, {0.0, 0.5, 1.0}) == Catch::Approx(0.5));
    const MatedCrtGraph sd = single_double_path();
    CHECK(dirichlet_energy(sd, {0.0, 2.0 / 3.0, 1.0}) == Catch::Approx(2.0 / 3.0));
    CHECK(dirichlet_energy(sd, {4.0, 4.0, 4.0}) == 0.0);
    CHECK_THROWS_AS(dirichlet_energy(p, {0.0, 1.0}), domain_error);
}

TEST_CASE("effective resistance series and parallel laws") {
    for (std::size_t n : {2, 5, 9}) {
        const MatedCrtGraph p = path_graph(n);
        CHECK(effective_resistance(p, 0, {static_cast<std::uint32_t>(n - 1)}) ==
              Catch::Approx(static_cast<double>(n - 1)).epsilon(1e-9));
    }
    const MatedCrtGraph d =
        graph_from_edges(2, {{0, 1, Side::L}, {0, 1, Side::R}});
    CHECK(effective_resistance(d, 0, {1}) == Catch::Approx(0.5).epsilon(1e-10));
    const MatedCrtGraph sd = single_double_path();
    CHECK(effective_resistance(sd, 0, {2}) == Catch::Approx(1.5).epsilon(1e-10));
    CHECK_THROWS_AS(effective_resistance(sd, 2, {2}), domain_error);
}

TEST_CASE("green diagonal on the 5-path") {
    const MatedCrtGraph p = path_graph(5); // vertices -2,-1,0,1,2 as 0..4
    CHECK(green_diag(p, 2, {0, 4}) == Catch::Approx(2.0).epsilon(1e-10));
    CHECK(green_diag(p, 2, {0, 4}) ==
          Catch::Approx(oracles::expected_visits(p, 2, {0, 4})).epsilon(1e-10));
    // immediate absorption: only absorbing neighbors
    const MatedCrtGraph star = graph_from_edges(
        4, {{0, 1, Side::L}, {0, 2, Side::L}, {0, 3, Side::L}});
    CHECK(green_diag(star, 0, {1, 2, 3}) == Catch::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(green_diag(p, 2, {}), domain_error);
}

TEST_CASE("green diagonal matches dense expected visits on random maps") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto inst = fixtures::brownian_map(120, 400 + seed);
        const auto center = static_cast<std::uint32_t>(inst.graph.count / 2);
        std::vector<std::uint32_t> absorbing;
        for (std::uint32_t v = 0; v < inst.graph.count; ++v)
            if (inst.graph.boundary[v] && v != center) absorbing.push_back(v);
        const double fast = green_diag(inst.graph, center, absorbing);
        const double slow = oracles::expected_visits(inst.graph, center, absorbing);
        REQUIRE(fast == Catch::Approx(slow).epsilon(1e-8));
    }
}

TEST_CASE("dense and CG paths agree") {
    const auto inst = fixtures::brownian_map(400, 19);
    BoundaryValues bv;
    for (std::uint32_t v = 0; v < inst.graph.count; ++v)
        if (inst.graph.boundary[v])
            bv.emplace_back(v, std::sin(static_cast<double>(v)));
    SolveOptions dense;
    dense.method = SolveMethod::dense;
    SolveOptions cg;
    cg.method = SolveMethod::cg;
    const HarmonicSolution a = harmonic_extend(inst.graph, bv, dense);
    const HarmonicSolution b = harmonic_extend(inst.graph, bv, cg);
    for (std::uint32_t v = 0; v < inst.graph.count; ++v)
        REQUIRE(a.values[v] == Catch::Approx(b.values[v]).margin(1e-7));
    CHECK(a.residual <= 4e-9);
    CHECK(b.residual <= 4e-9);
}

TEST_CASE("maximum principle and Dirichlet principle") {
    const auto inst = fixtures::brownian_map(200, 23);
    BoundaryValues bv;
    for (std::uint32_t v = 0; v < inst.graph.count; ++v)
        if (inst.graph.boundary[v])
            bv.emplace_back(v, std::cos(0.1 * static_cast<double>(v)));
    const HarmonicSolution sol = harmonic_extend(inst.graph, bv);

    double lo = 1e300, hi = -1e300;
    for (const auto& [v, val] : bv) {
        lo = std::min(lo, val);
        hi = std::max(hi, val);
    }
    for (double v : sol.values) {
        CHECK(v >= lo - 1e-8);
        CHECK(v <= hi + 1e-8);
    }

    const double harmonic_energy = dirichlet_energy(inst.graph, sol.values);
    Rng rng(77);
    for (int k = 0; k < 100; ++k) {
        std::vector<double> competitor = sol.values;
        for (std::uint32_t v = 0; v < inst.graph.count; ++v)
            if (!inst.graph.boundary[v]) competitor[v] += 0.2 * rng.gauss();
        REQUIRE(dirichlet_energy(inst.graph, competitor) >= harmonic_energy - 1e-10);
    }
}

TEST_CASE("linearity of the harmonic extension") {
    const auto inst = fixtures::brownian_map(128, 29);
    BoundaryValues f, g, combo;
    for (std::uint32_t v = 0; v < inst.graph.count; ++v) {
        if (!inst.graph.boundary[v]) continue;
        const double fv = std::sin(0.3 * v), gv = std::cos(0.2 * v);
        f.emplace_back(v, fv);
        g.emplace_back(v, gv);
        combo.emplace_back(v, 2.0 * fv - 3.0 * gv);
    }
    const auto sf = harmonic_extend(inst.graph, f);
    const auto sg = harmonic_extend(inst.graph, g);
    const auto sc = harmonic_extend(inst.graph, combo);
    for (std::uint32_t v = 0; v < inst.graph.count; ++v)
        REQUIRE(sc.values[v] ==
                Catch::Approx(2.0 * sf.values[v] - 3.0 * sg.values[v]).margin(1e-8));
}

TEST_CASE("Rayleigh monotonicity: deleting an edge never lowers resistance") {
    const auto inst = fixtures::brownian_map(40, 31);
    const auto sink = static_cast<std::uint32_t>(inst.graph.count - 1);
    const double base = effective_resistance(inst.graph, 0, {sink});
    for (std::size_t drop = 0; drop < inst.graph.edge_count(); ++drop) {
        std::vector<Edge> edges = inst.graph.edges;
        edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(drop));
        const MatedCrtGraph cut = graph_from_edges(inst.graph.count, std::move(edges));
        // skip if the deletion disconnects source from sink
        try {
            const double r = effective_resistance(cut, 0, {sink});
            REQUIRE(r >= base - 1e-9);
        } catch (const unsolvable_error&) {
        } catch (const domain_error&) {
        }
    }
}

TEST_CASE("tutte embedding toy cases") {
    // triangle boundary with one interior vertex adjacent to all corners
    const MatedCrtGraph tri = graph_from_edges(
        4, {{0, 1, Side::L}, {1, 2, Side::L}, {0, 2, Side::L},
            {0, 3, Side::L}, {1, 3, Side::L}, {2, 3, Side::L}});
    const std::vector<Point> corners{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    const Embedding e = tutte_embed(tri, {0, 1, 2}, corners);
    CHECK(e.coords[3][0] == Catch::Approx(1.0 / 3.0).margin(1e-9));
    CHECK(e.coords[3][1] == Catch::Approx(1.0 / 3.0).margin(1e-9));
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(e.coords[k][0] == corners[k][0]);
        CHECK(e.coords[k][1] == corners[k][1]);
    }

    // wheel: 4-cycle at square corners, hub adjacent to all
    const MatedCrtGraph wheel = graph_from_edges(
        5, {{0, 1, Side::L}, {1, 2, Side::L}, {2, 3, Side::L}, {0, 3, Side::L},
            {0, 4, Side::L}, {1, 4, Side::L}, {2, 4, Side::L}, {3, 4, Side::L}});
    const Embedding w = tutte_embed(
        wheel, {0, 1, 2, 3}, {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    CHECK(w.coords[4][0] == Catch::Approx(0.0).margin(1e-9));
    CHECK(w.coords[4][1] == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("tutte embedding validation") {
    const MatedCrtGraph wheel = graph_from_edges(
        5, {{0, 1, Side::L}, {1, 2, Side::L}, {2, 3, Side::L}, {0, 3, Side::L},
            {0, 4, Side::L}, {1, 4, Side::L}, {2, 4, Side::L}, {3, 4, Side::L}});
    // non-convex positions
    CHECK_THROWS_AS(tutte_embed(wheel, {0, 1, 2, 3},
                                {{0, 0}, {2, 0}, {0.1, 0.1}, {0, 2}}),
                    domain_error);
    // repeated cycle vertex
    CHECK_THROWS_AS(tutte_embed(wheel, {0, 1, 2, 0},
                                {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}),
                    domain_error);
    // cycle that is not the outer face of the drawing
    const auto inst = fixtures::drawable_map(64, 33);
    const PlanarStructure ps = planar_structure(inst.graph);
    const auto cycle = outer_cycle(ps, inst.graph);
    std::vector<std::uint32_t> wrong(cycle);
    wrong.pop_back();
    CHECK_THROWS_AS(tutte_embed(inst.graph, wrong,
                                circle_positions(wrong.size()), SolveOptions{}, &cycle),
                    domain_error);
    CHECK_NOTHROW(tutte_embed(inst.graph, cycle, circle_positions(cycle.size()),
                              SolveOptions{}, &cycle));
}

TEST_CASE("embedding satisfies the weighted average invariant") {
    const auto inst = fixtures::drawable_map(150, 37);
    const Embedding emb = fixtures::unit_circle_embedding(inst.graph);
    std::vector<std::uint8_t> pinned(inst.graph.count, 0);
    for (std::uint32_t v : emb.pinned) pinned[v] = 1;
    for (std::uint32_t v = 0; v < inst.graph.count; ++v) {
        if (pinned[v]) continue;
        double sx = 0.0, sy = 0.0;
        for (std::uint32_t s = inst.graph.offsets[v]; s < inst.graph.offsets[v + 1]; ++s) {
            sx += emb.coords[inst.graph.neighbors[s]][0];
            sy += emb.coords[inst.graph.neighbors[s]][1];
        }
        const double deg = static_cast<double>(inst.graph.degree(v));
        REQUIRE(emb.coords[v][0] == Catch::Approx(sx / deg).margin(1e-8));
        REQUIRE(emb.coords[v][1] == Catch::Approx(sy / deg).margin(1e-8));
    }
}

TEST_CASE("poisson solve drives the mean exit time system") {
    const MatedCrtGraph p = path_graph(5);
    std::vector<double> rhs(5, 0.0);
    for (std::uint32_t v = 1; v < 4; ++v)
        rhs[v] = static_cast<double>(p.degree(v));
    const std::vector<double> t = solve_poisson(p, {0, 4}, rhs);
    // gambler's-ruin exit times from a 4-step segment: t(k) = k(4-k)
    CHECK(t[1] == Catch::Approx(3.0).margin(1e-8));
    CHECK(t[2] == Catch::Approx(4.0).margin(1e-8));
    CHECK(t[3] == Catch::Approx(3.0).margin(1e-8));
    CHECK_THROWS_AS(solve_poisson(p, {}, rhs), domain_error);
}
