#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "mcrt/errors.hpp"
#include "mcrt/graph.hpp"

namespace mcrt {

// Combinatorial embedding of the window graph in the standard drawing:
// vertices on the real axis in index order, consecutive edges on the axis,
// L edges as nested arcs above, R edges as nested arcs below.
//
// Darts: edge k owns darts 2k (i->j) and 2k+1 (j->i). `rotation[v]` lists the
// darts leaving v in counterclockwise order starting from the axis edge to
// v+1. Faces are the orbits of d -> rotation-successor of the opposite dart.
struct PlanarStructure {
    std::vector<std::vector<std::uint32_t>> rotation;
    std::vector<std::uint32_t> face_of_dart;
    std::vector<std::uint32_t> face_sizes; // corners per face
    std::uint32_t outer_face = 0;

    std::size_t face_count() const { return face_sizes.size(); }

    bool all_inner_faces_triangular() const {
        for (std::uint32_t f = 0; f < face_sizes.size(); ++f)
            if (f != outer_face && face_sizes[f] != 3) return false;
        return true;
    }
};

namespace detail {

struct RotationBuild {
    std::vector<std::vector<std::uint32_t>> rotation;
    std::vector<std::uint32_t> dart_pos;    // position within rotation list
    std::vector<std::uint32_t> dart_origin; // vertex the dart leaves
};

// Assembles the counterclockwise order around each vertex. Arcs from a common
// endpoint nest by span, so the order around v is: axis to v+1; upper arcs to
// the right by increasing far end (inner to outer); upper arcs to the left by
// increasing far end (outer to inner); axis to v-1; lower arcs to the left by
// decreasing far end; lower arcs to the right by decreasing far end.
inline RotationBuild build_rotation(const MatedCrtGraph& graph) {
    const std::size_t n = graph.count;
    std::vector<std::uint32_t> axis_right(n, UINT32_MAX), axis_left(n, UINT32_MAX);
    std::vector<std::vector<std::uint32_t>> up_right(n), up_left(n), low_right(n), low_left(n);

    for (std::uint32_t k = 0; k < graph.edges.size(); ++k) {
        const Edge& e = graph.edges[k];
        const std::uint32_t out = 2 * k, in = 2 * k + 1; // i->j, j->i
        if (e.j == e.i + 1) {
            if (e.side != Side::L)
                throw internal_error("planar_structure: consecutive edge with R label");
            axis_right[e.i] = out;
            axis_left[e.j] = in;
        } else if (e.side == Side::L) {
            up_right[e.i].push_back(out);
            up_left[e.j].push_back(in);
        } else {
            low_right[e.i].push_back(out);
            low_left[e.j].push_back(in);
        }
    }

    RotationBuild rb;
    rb.rotation.resize(n);
    rb.dart_pos.assign(2 * graph.edges.size(), 0);
    rb.dart_origin.assign(2 * graph.edges.size(), 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        auto& rot = rb.rotation[v];
        rot.reserve(graph.degree(v));
        if (axis_right[v] != UINT32_MAX) rot.push_back(axis_right[v]);
        // graph.edges is sorted by (i, j), so per-vertex buckets come out
        // with ascending far ends already.
        for (auto d : up_right[v]) rot.push_back(d);
        for (auto d : up_left[v]) rot.push_back(d);
        if (axis_left[v] != UINT32_MAX) rot.push_back(axis_left[v]);
        for (auto it = low_left[v].rbegin(); it != low_left[v].rend(); ++it)
            rot.push_back(*it);
        for (auto it = low_right[v].rbegin(); it != low_right[v].rend(); ++it)
            rot.push_back(*it);
        for (std::uint32_t p = 0; p < rot.size(); ++p) {
            rb.dart_pos[rot[p]] = p;
            rb.dart_origin[rot[p]] = v;
        }
    }
    return rb;
}

} // namespace detail

inline PlanarStructure planar_structure(const MatedCrtGraph& graph) {
    if (graph.count < 2) throw domain_error("planar_structure: need at least 2 vertices");

    detail::RotationBuild rb = detail::build_rotation(graph);
    const std::size_t dart_count = 2 * graph.edges.size();

    PlanarStructure ps;
    ps.rotation = std::move(rb.rotation);

    auto next_in_face = [&](std::uint32_t d) {
        const std::uint32_t twin = d ^ 1u;
        const auto& rot = ps.rotation[rb.dart_origin[twin]];
        return rot[(rb.dart_pos[twin] + 1) % rot.size()];
    };
    ps.face_of_dart.assign(dart_count, UINT32_MAX);
    for (std::uint32_t d = 0; d < dart_count; ++d) {
        if (ps.face_of_dart[d] != UINT32_MAX) continue;
        const auto face = static_cast<std::uint32_t>(ps.face_sizes.size());
        std::uint32_t size = 0;
        for (std::uint32_t cur = d; ps.face_of_dart[cur] == UINT32_MAX;
             cur = next_in_face(cur)) {
            ps.face_of_dart[cur] = face;
            ++size;
        }
        ps.face_sizes.push_back(size);
    }

    // Genus-zero check. A failure means the arc families are not laminar,
    // which the defining inequality rules out for distinct minima; inputs
    // with tied minima (lattice walks) can trip it.
    const long euler = static_cast<long>(graph.count) -
                       static_cast<long>(graph.edges.size()) +
                       static_cast<long>(ps.face_sizes.size());
    if (euler != 2)
        throw internal_error("planar_structure: Euler characteristic " +
                             std::to_string(euler) + ", rotation order invalid for this input");

    // The sector at vertex 0 facing left (nothing lies left of vertex 0) is
    // an outer-face corner: it follows the last upper dart in the rotation.
    std::size_t upper_count = 1; // axis edge to vertex 1 always exists
    for (const Edge& e : graph.edges) {
        if (e.i != 0) break; // edges sorted; vertex-0 edges come first
        if (e.side == Side::L && e.j >= 2) ++upper_count;
    }
    const auto& rot0 = ps.rotation[0];
    const std::uint32_t after_gap = rot0[upper_count % rot0.size()];
    ps.outer_face = ps.face_of_dart[after_gap];
    return ps;
}

// Vertices of the outer face in walk order, deduplicated to first appearance.
// Cut vertices make the outer walk revisit vertices; the deduplicated cycle is
// what boundary pinning consumes.
inline std::vector<std::uint32_t> outer_cycle(const PlanarStructure& ps,
                                              const MatedCrtGraph& graph) {
    std::uint32_t start = UINT32_MAX;
    for (std::uint32_t d = 0; d < ps.face_of_dart.size(); ++d) {
        if (ps.face_of_dart[d] == ps.outer_face) {
            start = d;
            break;
        }
    }
    if (start == UINT32_MAX) throw internal_error("outer_cycle: outer face has no darts");

    std::vector<std::uint32_t> dart_origin(2 * graph.edges.size());
    for (std::uint32_t v = 0; v < graph.count; ++v)
        for (std::uint32_t d : ps.rotation[v]) dart_origin[d] = v;
    auto next_in_face = [&](std::uint32_t d) {
        const std::uint32_t twin = d ^ 1u;
        const auto& rot = ps.rotation[dart_origin[twin]];
        const auto pos = static_cast<std::uint32_t>(
            std::find(rot.begin(), rot.end(), twin) - rot.begin());
        return rot[(pos + 1) % rot.size()];
    };

    std::vector<std::uint32_t> cycle;
    std::vector<std::uint8_t> seen(graph.count, 0);
    std::uint32_t cur = start;
    do {
        const std::uint32_t v = dart_origin[cur];
        if (!seen[v]) {
            seen[v] = 1;
            cycle.push_back(v);
        }
        cur = next_in_face(cur);
    } while (cur != start);
    return cycle;
}

} // namespace mcrt
