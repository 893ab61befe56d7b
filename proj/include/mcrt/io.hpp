#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mcrt/errors.hpp"
#include "mcrt/graph.hpp"
#include "mcrt/laplace.hpp"
#include "mcrt/path.hpp"

namespace mcrt {

using json = nlohmann::ordered_json;

// Writes via a temp file in the same directory plus rename, so readers never
// observe partial output.
inline void atomic_write(const std::filesystem::path& target, const std::string& content) {
    const std::filesystem::path dir = target.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw domain_error("atomic_write: cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw domain_error("atomic_write: short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw domain_error("read_file: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw internal_error("format_double failed");
    return std::string(buf, ptr);
}

inline std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    for (std::size_t k = 0; k <= line.size(); ++k) {
        if (k == line.size() || line[k] == sep) {
            out.emplace_back(line.substr(begin, k - begin));
            begin = k + 1;
        }
    }
    return out;
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw domain_error("parse error: bad number '" + s + "'");
    return v;
}

} // namespace detail

// ---- path serialization ----------------------------------------------------

// Debug CSV: metadata in '#' header comments, then time,L,R rows.
inline std::string path_to_csv(const PathPair& path) {
    std::ostringstream out;
    out << "# gamma=" << detail::format_double(path.gamma)
        << " mesh=" << detail::format_double(path.mesh)
        << " seed=" << path.seed
        << " kind=" << (path.kind == PathKind::brownian ? "brownian" : "lattice") << "\n";
    out << "time,L,R\n";
    for (std::size_t i = 0; i < path.size(); ++i) {
        out << detail::format_double(static_cast<double>(i) * path.mesh) << ','
            << detail::format_double(path.samples_l[i]) << ','
            << detail::format_double(path.samples_r[i]) << "\n";
    }
    return out.str();
}

// Binary column format: fixed little-endian header followed by the two sample
// columns as raw doubles.
inline std::string path_to_binary(const PathPair& path) {
    std::string out;
    out.reserve(64 + 16 * path.size());
    out.append("MCRTPATH");
    auto put_u64 = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    auto put_f64 = [&](double d) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, 8);
        put_u64(bits);
    };
    put_u64(1); // format version
    put_u64(path.kind == PathKind::brownian ? 0 : 1);
    put_u64(path.seed);
    put_u64(path.size());
    put_f64(path.gamma);
    put_f64(path.correlation);
    put_f64(path.mesh);
    put_f64(path.horizon);
    for (double v : path.samples_l) put_f64(v);
    for (double v : path.samples_r) put_f64(v);
    return out;
}

inline PathPair path_from_binary(const std::string& blob) {
    if (blob.size() < 72 || blob.compare(0, 8, "MCRTPATH") != 0)
        throw domain_error("path_from_binary: bad magic");
    std::size_t cursor = 8;
    auto get_u64 = [&]() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(blob[cursor++])) << (8 * i);
        return v;
    };
    auto get_f64 = [&]() {
        const std::uint64_t bits = get_u64();
        double d;
        std::memcpy(&d, &bits, 8);
        return d;
    };
    const std::uint64_t version = get_u64();
    if (version != 1) throw domain_error("path_from_binary: unknown version");
    PathPair path;
    path.kind = get_u64() == 0 ? PathKind::brownian : PathKind::lattice;
    path.seed = get_u64();
    const std::uint64_t count = get_u64();
    path.gamma = get_f64();
    path.correlation = get_f64();
    path.mesh = get_f64();
    path.horizon = get_f64();
    if (blob.size() != 72 + 16 * count) throw domain_error("path_from_binary: truncated data");
    path.samples_l.resize(count);
    path.samples_r.resize(count);
    for (auto& v : path.samples_l) v = get_f64();
    for (auto& v : path.samples_r) v = get_f64();
    return path;
}

// ---- graph serialization ---------------------------------------------------

inline std::string graph_to_csv(const MatedCrtGraph& graph) {
    std::ostringstream out;
    out << "i,j,side,is_boundary_i,is_boundary_j\n";
    for (const Edge& e : graph.edges) {
        out << e.i << ',' << e.j << ',' << side_char(e.side) << ','
            << int(graph.boundary[e.i]) << ',' << int(graph.boundary[e.j]) << "\n";
    }
    return out.str();
}

inline MatedCrtGraph graph_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("i,j,side", 0) != 0)
        throw domain_error("graph_from_csv: missing header row");
    std::vector<Edge> edges;
    std::size_t count = 0;
    std::vector<std::pair<std::uint32_t, bool>> flags;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = detail::split(line, ',');
        if (fields.size() != 5) throw domain_error("graph_from_csv: bad row '" + line + "'");
        Edge e;
        e.i = static_cast<std::uint32_t>(std::stoul(fields[0]));
        e.j = static_cast<std::uint32_t>(std::stoul(fields[1]));
        if (fields[2] == "L") e.side = Side::L;
        else if (fields[2] == "R") e.side = Side::R;
        else throw domain_error("graph_from_csv: bad side '" + fields[2] + "'");
        edges.push_back(e);
        count = std::max<std::size_t>(count, std::max(e.i, e.j) + 1);
        flags.emplace_back(e.i, fields[3] == "1");
        flags.emplace_back(e.j, fields[4] == "1");
    }
    if (edges.empty()) throw domain_error("graph_from_csv: no edges");
    std::vector<std::uint8_t> boundary(count, 0);
    for (const auto& [v, b] : flags) boundary[v] = b ? 1 : boundary[v];
    return graph_from_edges(count, std::move(edges), std::move(boundary));
}

struct GraphMeta {
    double gamma = 0.0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

inline json graph_summary(const MatedCrtGraph& graph, const GraphMeta& meta) {
    json j;
    j["N"] = graph.count;
    j["E"] = graph.edge_count();
    j["max_degree"] = graph.max_degree();
    j["boundary_count"] = graph.boundary_count();
    j["seed"] = meta.seed;
    j["gamma"] = meta.gamma;
    j["epsilon"] = meta.epsilon;
    return j;
}

// ---- solution / embedding serialization -------------------------------------

inline std::string solution_to_csv(const HarmonicSolution& sol) {
    std::ostringstream out;
    out << "vertex,value\n";
    for (std::size_t v = 0; v < sol.values.size(); ++v)
        out << v << ',' << detail::format_double(sol.values[v]) << "\n";
    return out.str();
}

inline std::string embedding_to_csv(const Embedding& emb) {
    std::ostringstream out;
    out << "vertex,x,y,pinned\n";
    std::vector<std::uint8_t> pinned(emb.coords.size(), 0);
    for (std::uint32_t v : emb.pinned) pinned[v] = 1;
    for (std::size_t v = 0; v < emb.coords.size(); ++v) {
        out << v << ',' << detail::format_double(emb.coords[v][0]) << ','
            << detail::format_double(emb.coords[v][1]) << ',' << int(pinned[v]) << "\n";
    }
    return out.str();
}

// SVG rendering: every edge instance as one line element, vertices as dots,
// the pinned boundary polygon highlighted.
inline std::string embedding_to_svg(const MatedCrtGraph& graph, const Embedding& emb,
                                    double size_px = 800.0) {
    double lo = -1.0, hi = 1.0;
    for (const Point& p : emb.coords) {
        lo = std::min({lo, p[0], p[1]});
        hi = std::max({hi, p[0], p[1]});
    }
    const double span = hi - lo;
    const double scale = (size_px - 20.0) / (span > 0 ? span : 1.0);
    auto sx = [&](double x) { return 10.0 + (x - lo) * scale; };
    auto sy = [&](double y) { return size_px - 10.0 - (y - lo) * scale; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px
        << "\" height=\"" << size_px << "\" viewBox=\"0 0 " << size_px << ' ' << size_px
        << "\">\n";
    out << "<polygon fill=\"none\" stroke=\"#c02020\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < emb.pinned_positions.size(); ++k) {
        if (k) out << ' ';
        out << detail::format_double(sx(emb.pinned_positions[k][0])) << ','
            << detail::format_double(sy(emb.pinned_positions[k][1]));
    }
    out << "\"/>\n";
    for (const Edge& e : graph.edges) {
        out << "<line x1=\"" << detail::format_double(sx(emb.coords[e.i][0])) << "\" y1=\""
            << detail::format_double(sy(emb.coords[e.i][1])) << "\" x2=\""
            << detail::format_double(sx(emb.coords[e.j][0])) << "\" y2=\""
            << detail::format_double(sy(emb.coords[e.j][1]))
            << "\" stroke=\"#404060\" stroke-width=\"0.4\"/>\n";
    }
    for (const Point& p : emb.coords) {
        out << "<circle cx=\"" << detail::format_double(sx(p[0])) << "\" cy=\""
            << detail::format_double(sy(p[1])) << "\" r=\"1.2\" fill=\"#202020\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace mcrt
