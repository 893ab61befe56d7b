#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <set>

#include "mcrt/planar.hpp"
#include "support/fixtures.hpp"

using namespace mcrt;

TEST_CASE("bare path has exactly one face") {
    const MatedCrtGraph g = fixtures::graph_from_minima({2.0, 1.0, 3.0}, {0, -1, -2});
    REQUIRE(g.edge_count() == 2); // no arcs from these minima
    const PlanarStructure ps = planar_structure(g);
    CHECK(ps.face_count() == 1);
    CHECK(ps.outer_face == 0);
    CHECK(ps.face_sizes[0] == 4); // both sides of both axis edges
    CHECK(ps.all_inner_faces_triangular());
}

TEST_CASE("double edge yields two triangles and an outer bigon") {
    const MatedCrtGraph g =
        fixtures::graph_from_minima({1.0, 5.0, 2.0}, {2.0, 7.0, 1.0});
    REQUIRE(g.edge_count() == 4);
    const PlanarStructure ps = planar_structure(g);
    REQUIRE(ps.face_count() == 3); // V - E + F = 3 - 4 + 3 = 2
    CHECK(ps.face_sizes[ps.outer_face] == 2);
    CHECK(ps.all_inner_faces_triangular());
}

TEST_CASE("face tracing partitions darts exactly once") {
    const auto inst = fixtures::drawable_map(200, 3);
    const PlanarStructure ps = planar_structure(inst.graph);
    const std::size_t total =
        std::accumulate(ps.face_sizes.begin(), ps.face_sizes.end(), std::size_t{0});
    CHECK(total == 2 * inst.graph.edge_count());
    for (auto f : ps.face_of_dart) CHECK(f < ps.face_count());
}

TEST_CASE("generated maps are triangulations of the sphere") {
    const double gammas[] = {kGammaBipolar, kGammaSpanningTree, kGammaUniform};
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const double gamma = gammas[seed % 3];
        const auto inst = fixtures::drawable_map(150, 1000 + seed, gamma);
        const PlanarStructure ps = planar_structure(inst.graph);
        const long euler = static_cast<long>(inst.graph.count) -
                           static_cast<long>(inst.graph.edge_count()) +
                           static_cast<long>(ps.face_count());
        REQUIRE(euler == 2);
        REQUIRE(ps.all_inner_faces_triangular());
    }
}

TEST_CASE("tie-degenerate minima are rejected with a consistency error") {
    // [0,1,1,0] creates the crossing arcs (0,2) and (1,3); no rotation order
    // in the axis drawing embeds that in the plane.
    const MatedCrtGraph g = fixtures::graph_from_minima(
        {0.0, 1.0, 1.0, 0.0}, {-1.0, -2.0, -3.0, -4.0});
    CHECK_THROWS_AS(planar_structure(g), internal_error);
}

TEST_CASE("outer cycle walks the outer face once") {
    const auto inst = fixtures::drawable_map(80, 9);
    const PlanarStructure ps = planar_structure(inst.graph);
    const std::vector<std::uint32_t> cycle = outer_cycle(ps, inst.graph);
    REQUIRE(cycle.size() >= 3);
    // distinct vertices
    std::set<std::uint32_t> seen(cycle.begin(), cycle.end());
    CHECK(seen.size() == cycle.size());
    // window ends are always on the outer face
    CHECK(seen.count(0) == 1);
    CHECK(seen.count(static_cast<std::uint32_t>(inst.graph.count - 1)) == 1);
    // the outer face of the window drawing consists of flagged vertices
    for (std::uint32_t v : cycle) CHECK(inst.graph.boundary[v] == 1);
}

TEST_CASE("rotation lists cover each vertex degree") {
    const auto inst = fixtures::drawable_map(60, 12);
    const PlanarStructure ps = planar_structure(inst.graph);
    for (std::uint32_t v = 0; v < inst.graph.count; ++v)
        CHECK(ps.rotation[v].size() == inst.graph.degree(v));
}
