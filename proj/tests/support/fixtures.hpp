#pragma once

#include <cstdint>
#include <vector>

#include "mcrt/graph.hpp"
#include "mcrt/laplace.hpp"
#include "mcrt/path.hpp"
#include "mcrt/planar.hpp"

namespace fixtures {

struct Instance {
    mcrt::PathPair path;
    mcrt::CellMinSeq cells;
    mcrt::MatedCrtGraph graph;
};

inline Instance brownian_map(std::size_t cell_count, std::uint64_t seed,
                             double gamma = mcrt::kGammaSpanningTree,
                             double mesh_divisor = 16.0) {
    Instance inst;
    inst.path = mcrt::sample_brownian_pair(gamma, static_cast<double>(cell_count),
                                           1.0 / mesh_divisor, seed);
    inst.cells = mcrt::cell_minima(inst.path, 1.0);
    inst.graph = mcrt::build_graph(inst.cells);
    return inst;
}

// Same, with tied minima resolved; graphs from here can always be drawn.
inline Instance drawable_map(std::size_t cell_count, std::uint64_t seed,
                             double gamma = mcrt::kGammaSpanningTree,
                             double mesh_divisor = 16.0) {
    Instance inst;
    inst.path = mcrt::sample_brownian_pair(gamma, static_cast<double>(cell_count),
                                           1.0 / mesh_divisor, seed);
    inst.cells = mcrt::resolve_min_ties(mcrt::cell_minima(inst.path, 1.0));
    inst.graph = mcrt::build_graph(inst.cells);
    return inst;
}

inline Instance lattice_map(std::size_t cell_count, std::uint64_t seed,
                            std::size_t steps_per_cell = 8) {
    Instance inst;
    inst.path = mcrt::sample_lattice_walk(
        static_cast<long>(cell_count * steps_per_cell), seed);
    inst.cells = mcrt::cell_minima(inst.path, static_cast<double>(steps_per_cell));
    inst.graph = mcrt::build_graph(inst.cells);
    return inst;
}

// Build a graph straight from explicit minima (unit mesh, one sample per
// boundary; padded so every cell is the min of its own samples).
inline mcrt::MatedCrtGraph graph_from_minima(const std::vector<double>& min_l,
                                             const std::vector<double>& min_r) {
    mcrt::CellMinSeq cells;
    cells.epsilon = 1.0;
    cells.count = min_l.size();
    cells.min_l = min_l;
    cells.min_r = min_r;
    cells.argmin_l.assign(min_l.size(), 0.0);
    cells.argmin_r.assign(min_r.size(), 0.0);
    return mcrt::build_graph(cells);
}

inline mcrt::Embedding unit_circle_embedding(const mcrt::MatedCrtGraph& graph) {
    const mcrt::PlanarStructure ps = mcrt::planar_structure(graph);
    const std::vector<std::uint32_t> cycle = mcrt::outer_cycle(ps, graph);
    return mcrt::tutte_embed(graph, cycle, mcrt::circle_positions(cycle.size()));
}

} // namespace fixtures
