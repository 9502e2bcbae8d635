#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gridknot/error.hpp"
#include "gridknot/lattice.hpp"

namespace gridknot {

struct SurfaceFlags {
    bool validated = false;
    bool closed = false;     // every incident edge has square-degree exactly 2
    bool manifold = false;   // every vertex link is a single cycle
    bool connected = false;  // one component under shared-edge adjacency
    bool sphere = false;     // closed && manifold && connected && chi == 2
    std::vector<EdgeKey> offending_edges;
    std::vector<Point4> offending_vertices;
};

// A finite set of unit squares of the scaled lattice. Squares are kept
// sorted and unique, so equality, set algebra, and serialized output are
// all canonical. The square count is the area in cells of side 1/lambda.
struct CubicalSurface {
    std::int64_t lambda = 1;
    std::vector<UnitSquare> squares;
    SurfaceFlags flags;

    std::int64_t area() const { return std::int64_t(squares.size()); }

    bool contains(const UnitSquare& s) const {
        return std::binary_search(squares.begin(), squares.end(), s);
    }

    friend bool operator==(const CubicalSurface& a, const CubicalSurface& b) {
        return a.lambda == b.lambda && a.squares == b.squares;
    }
};

inline void sort_unique(std::vector<UnitSquare>& squares) {
    std::sort(squares.begin(), squares.end());
    squares.erase(std::unique(squares.begin(), squares.end()), squares.end());
}

inline std::int64_t euler_characteristic(const CubicalSurface& surface) {
    std::unordered_set<Point4, Point4Hash> verts;
    std::unordered_set<EdgeKey, EdgeKeyHash> edges;
    verts.reserve(surface.squares.size() * 2);
    edges.reserve(surface.squares.size() * 3);
    for (const UnitSquare& s : surface.squares) {
        for (const Point4& p : s.corners()) verts.insert(p);
        for (const EdgeKey& e : edges_of(s)) edges.insert(e);
    }
    return std::int64_t(verts.size()) - std::int64_t(edges.size()) +
           std::int64_t(surface.squares.size());
}

namespace detail {

// squares sharing each edge, by index into surface.squares
using EdgeMap = std::unordered_map<EdgeKey, std::vector<int>, EdgeKeyHash>;

inline EdgeMap build_edge_map(const std::vector<UnitSquare>& squares) {
    EdgeMap map;
    map.reserve(squares.size() * 2);
    for (int i = 0; i < int(squares.size()); ++i)
        for (const EdgeKey& e : edges_of(squares[std::size_t(i)])) map[e].push_back(i);
    return map;
}

}  // namespace detail

// Computes all validity flags. Invalid complexes are returned with flags
// false and the offending edges/vertices listed, never rejected.
inline SurfaceFlags compute_flags(const CubicalSurface& surface) {
    SurfaceFlags flags;
    flags.validated = true;
    if (surface.squares.empty()) return flags;

    const auto& squares = surface.squares;
    const detail::EdgeMap edge_map = detail::build_edge_map(squares);

    flags.closed = true;
    for (const auto& [edge, incident] : edge_map) {
        if (incident.size() != 2) {
            flags.closed = false;
            flags.offending_edges.push_back(edge);
        }
    }
    std::sort(flags.offending_edges.begin(), flags.offending_edges.end());

    // Connectivity over shared-edge adjacency.
    std::vector<int> stack{0};
    std::vector<char> seen(squares.size(), 0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (const EdgeKey& e : edges_of(squares[std::size_t(i)]))
            for (int j : edge_map.at(e))
                if (!seen[std::size_t(j)]) {
                    seen[std::size_t(j)] = 1;
                    ++reached;
                    stack.push_back(j);
                }
    }
    flags.connected = reached == squares.size();

    // Vertex links: the squares incident to a vertex, adjacent when they
    // share an edge through it, must form one cycle.
    std::unordered_map<Point4, std::vector<int>, Point4Hash> at_vertex;
    at_vertex.reserve(squares.size() * 2);
    for (int i = 0; i < int(squares.size()); ++i)
        for (const Point4& p : squares[std::size_t(i)].corners()) at_vertex[p].push_back(i);

    flags.manifold = flags.closed;
    for (const auto& [vertex, incident] : at_vertex) {
        const int m = int(incident.size());
        bool good = m >= 3;
        std::vector<int> degree(std::size_t(m), 0);
        std::vector<std::pair<int, int>> link_edges;
        for (int a = 0; a < m && good; ++a) {
            for (const EdgeKey& e : edges_of(squares[std::size_t(incident[std::size_t(a)])])) {
                if (e.base != vertex && e.base + unit_vector(e.axis) != vertex) continue;
                for (int j : edge_map.at(e)) {
                    const auto it = std::find(incident.begin(), incident.end(), j);
                    const int b = int(it - incident.begin());
                    if (b <= a) continue;  // count each shared edge once
                    ++degree[std::size_t(a)];
                    ++degree[std::size_t(b)];
                    link_edges.emplace_back(a, b);
                }
            }
        }
        for (int a = 0; a < m && good; ++a) good = degree[std::size_t(a)] == 2;
        if (good) {
            // connected with all degrees 2 => a single cycle
            std::vector<char> vis(std::size_t(m), 0);
            std::vector<int> st{0};
            vis[0] = 1;
            int cnt = 1;
            while (!st.empty()) {
                const int a = st.back();
                st.pop_back();
                for (const auto& [u, w] : link_edges) {
                    const int other = u == a ? w : (w == a ? u : -1);
                    if (other >= 0 && !vis[std::size_t(other)]) {
                        vis[std::size_t(other)] = 1;
                        ++cnt;
                        st.push_back(other);
                    }
                }
            }
            good = cnt == m;
        }
        if (!good) {
            flags.manifold = false;
            flags.offending_vertices.push_back(vertex);
        }
    }
    std::sort(flags.offending_vertices.begin(), flags.offending_vertices.end());

    flags.sphere = flags.closed && flags.manifold && flags.connected &&
                   euler_characteristic(surface) == 2;
    return flags;
}

inline CubicalSurface validate_surface(std::vector<UnitSquare> squares, std::int64_t lambda) {
    if (lambda < 1) throw Error(Fault::BadInput, "denominator must be >= 1");
    CubicalSurface surface;
    surface.lambda = lambda;
    sort_unique(squares);
    surface.squares = std::move(squares);
    surface.flags = compute_flags(surface);
    return surface;
}

inline std::int64_t area(const CubicalSurface& surface) { return surface.area(); }

inline CubicalSurface translated(const CubicalSurface& surface, const Point4& by) {
    CubicalSurface out = surface;
    for (UnitSquare& s : out.squares) s.base = s.base + by;
    return out;  // order is translation-invariant, squares stay sorted
}

struct Homothety {
    std::int64_t factor = 1;
    std::optional<CubicalSurface> coarser;  // present iff factor > 1
};

// Largest k >= 1 such that, after translating the minimal corner to the
// origin, the surface is the image of a coarser cubical surface under
// x -> kx. factor == 1 means no inverse subdivision applies.
inline Homothety homothety_factor(const CubicalSurface& surface) {
    Homothety best;
    if (surface.squares.empty()) return best;

    Point4 origin = surface.squares.front().base;
    Point4 top = origin;
    for (const UnitSquare& s : surface.squares)
        for (int a = 0; a < 4; ++a) {
            origin[a] = std::min(origin[a], s.base[a]);
            top[a] = std::max(top[a], s.base[a] + 1);
        }
    std::int64_t extent = 1;
    for (int a = 0; a < 4; ++a) extent = std::max(extent, top[a] - origin[a]);

    for (std::int64_t k = extent; k >= 2; --k) {
        if (std::int64_t(surface.squares.size()) % (k * k) != 0) continue;
        bool ok = true;
        std::unordered_map<UnitSquare, std::int64_t, UnitSquareHash> parents;
        parents.reserve(surface.squares.size() / std::size_t(k * k) * 2);
        for (const UnitSquare& s : surface.squares) {
            const int i = s.axis_lo(), j = s.axis_hi();
            UnitSquare parent;
            parent.plane = s.plane;
            for (int a = 0; a < 4; ++a) {
                const std::int64_t v = s.base[a] - origin[a];
                if (a == i || a == j) {
                    parent.base[a] = v / k;  // v >= 0 after translation
                } else {
                    if (v % k != 0) {
                        ok = false;
                        break;
                    }
                    parent.base[a] = v / k;
                }
            }
            if (!ok) break;
            ++parents[parent];
        }
        if (!ok) continue;
        for (const auto& [parent, count] : parents)
            if (count != k * k) {
                ok = false;
                break;
            }
        if (!ok) continue;
        std::vector<UnitSquare> coarse;
        coarse.reserve(parents.size());
        for (const auto& [parent, count] : parents) coarse.push_back(parent);
        best.factor = k;
        best.coarser = validate_surface(std::move(coarse), surface.lambda);
        return best;
    }
    return best;
}

}  // namespace gridknot
