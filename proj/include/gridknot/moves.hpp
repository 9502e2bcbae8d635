#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_set>
#include <vector>

#include "gridknot/error.hpp"
#include "gridknot/lattice.hpp"
#include "gridknot/surface.hpp"

namespace gridknot {

// A face-boundary rewrite: inside one 3-cube of the surface's cubulation,
// the squares of the surface lying on the cube's boundary (a disk of p
// faces) are exchanged for the complementary 6 - p faces. Area changes by
// exactly 6 - 2p.
struct M2Move {
    Point4 cube_base;               // scaled minimal corner of the 3-cube
    std::array<int, 3> cube_axes{};  // spanned axes, ascending
    std::vector<UnitSquare> patch_a;  // surface squares in the cube boundary
    std::vector<UnitSquare> patch_b;  // the complementary faces
    bool applicable = false;          // trial application yields a valid sphere

    int p() const { return int(patch_a.size()); }
    std::int64_t delta_area() const { return 6 - 2 * std::int64_t(patch_a.size()); }
};

inline std::array<UnitSquare, 6> cube_faces(const Point4& base, const std::array<int, 3>& axes) {
    std::array<UnitSquare, 6> faces;
    int k = 0;
    for (int u = 0; u < 3; ++u)
        for (int v = u + 1; v < 3; ++v) {
            const int other = 3 - u - v;  // index of the remaining spanned axis
            const UnitSquare lo(base, axes[std::size_t(u)], axes[std::size_t(v)]);
            UnitSquare hi = lo;
            hi.base = hi.base + unit_vector(axes[std::size_t(other)]);
            faces[std::size_t(k++)] = lo;
            faces[std::size_t(k++)] = hi;
        }
    return faces;
}

// Uniform refinement: every square splits into m^2 congruent subcells and
// the denominator multiplies by m. Topology is untouched.
inline CubicalSurface m1_subdivide(const CubicalSurface& surface, std::int64_t m) {
    if (m < 1) throw Error(Fault::BadInput, "subdivision factor must be >= 1");
    if (m == 1) return surface;
    std::vector<UnitSquare> out;
    out.reserve(surface.squares.size() * std::size_t(m * m));
    for (const UnitSquare& s : surface.squares) {
        const int i = s.axis_lo(), j = s.axis_hi();
        Point4 scaled;
        for (int a = 0; a < 4; ++a) scaled[a] = s.base[a] * m;
        for (std::int64_t u = 0; u < m; ++u)
            for (std::int64_t v = 0; v < m; ++v) {
                Point4 b = scaled;
                b[i] += u;
                b[j] += v;
                out.emplace_back(b, s.plane);
            }
    }
    return validate_surface(std::move(out), surface.lambda * m);
}

namespace detail {

// A sub-complex of a cube boundary is a disk iff it is connected and has
// Euler characteristic 1.
inline bool is_disk(const std::vector<UnitSquare>& patch) {
    if (patch.empty()) return false;
    std::unordered_set<Point4, Point4Hash> verts;
    std::map<EdgeKey, std::vector<int>> edge_map;
    for (int i = 0; i < int(patch.size()); ++i) {
        for (const Point4& p : patch[std::size_t(i)].corners()) verts.insert(p);
        for (const EdgeKey& e : edges_of(patch[std::size_t(i)])) edge_map[e].push_back(i);
    }
    const std::int64_t chi = std::int64_t(verts.size()) - std::int64_t(edge_map.size()) +
                             std::int64_t(patch.size());
    if (chi != 1) return false;
    std::vector<char> seen(patch.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (const EdgeKey& e : edges_of(patch[std::size_t(i)]))
            for (int j : edge_map[e])
                if (!seen[std::size_t(j)]) {
                    seen[std::size_t(j)] = 1;
                    ++reached;
                    stack.push_back(j);
                }
    }
    return reached == patch.size();
}

struct CubeKey {
    Point4 base;
    int missing_axis = 0;  // the axis the cube does not span
    friend bool operator<(const CubeKey& a, const CubeKey& b) {
        if (a.base != b.base) return a.base < b.base;
        return a.missing_axis < b.missing_axis;
    }
};

inline std::array<int, 3> spanned_axes(int missing_axis) {
    std::array<int, 3> axes{};
    int k = 0;
    for (int a = 0; a < 4; ++a)
        if (a != missing_axis) axes[std::size_t(k++)] = a;
    return axes;
}

}  // namespace detail

// Replaces patch_a by patch_b and re-validates. The move is rejected (and
// the input left untouched) if the replacement collides with the rest of
// the surface or breaks the embedded-sphere invariants.
inline CubicalSurface apply_m2(const CubicalSurface& surface, const M2Move& move) {
    // Recheck that the move matches this surface.
    const auto faces = cube_faces(move.cube_base, move.cube_axes);
    std::vector<UnitSquare> on_boundary;
    for (const UnitSquare& f : faces)
        if (surface.contains(f)) on_boundary.push_back(f);
    std::sort(on_boundary.begin(), on_boundary.end());
    std::vector<UnitSquare> patch_a = move.patch_a;
    std::sort(patch_a.begin(), patch_a.end());
    if (on_boundary != patch_a)
        throw Error(Fault::BadInput, "move was not enumerated from this surface");
    for (const UnitSquare& b : move.patch_b)
        if (surface.contains(b))
            throw Error(Fault::CollisionWithComplement,
                        "replacement square already present in the surface");

    std::vector<UnitSquare> result;
    result.reserve(surface.squares.size() + move.patch_b.size());
    std::set_difference(surface.squares.begin(), surface.squares.end(), patch_a.begin(),
                        patch_a.end(), std::back_inserter(result));
    result.insert(result.end(), move.patch_b.begin(), move.patch_b.end());
    CubicalSurface out = validate_surface(std::move(result), surface.lambda);
    if (!out.flags.sphere)
        throw Error(Fault::CollisionWithComplement,
                    "replacement is not an embedded sphere; move rejected");
    return out;
}

// All candidate face-boundary moves: for every 3-cube of the cubulation
// whose boundary meets the surface in a disk of 1..5 squares with a disk
// complement, one move. Cubes are drawn from the squares themselves, which
// covers the bounding box inflated by one cell. `applicable` is decided by
// trial application.
inline std::vector<M2Move> enumerate_m2(const CubicalSurface& surface) {
    std::set<detail::CubeKey> cubes;
    for (const UnitSquare& s : surface.squares) {
        const int i = s.axis_lo(), j = s.axis_hi();
        for (int m = 0; m < 4; ++m) {
            if (m == i || m == j) continue;
            const int missing = 6 - i - j - m;
            for (int off : {-1, 0}) {
                Point4 base = s.base;
                base[m] += off;
                cubes.insert(detail::CubeKey{base, missing});
            }
        }
    }
    std::vector<M2Move> moves;
    for (const detail::CubeKey& cube : cubes) {
        M2Move move;
        move.cube_base = cube.base;
        move.cube_axes = detail::spanned_axes(cube.missing_axis);
        for (const UnitSquare& f : cube_faces(cube.base, move.cube_axes)) {
            if (surface.contains(f))
                move.patch_a.push_back(f);
            else
                move.patch_b.push_back(f);
        }
        const int p = move.p();
        if (p < 1 || p > 5) continue;
        if (!detail::is_disk(move.patch_a) || !detail::is_disk(move.patch_b)) continue;
        try {
            apply_m2(surface, move);
            move.applicable = true;
        } catch (const Error&) {
            move.applicable = false;
        }
        moves.push_back(std::move(move));
    }
    return moves;
}

struct WeakMinimality {
    bool verdict = false;
    std::optional<M2Move> reducing_move;   // an applicable move with negative delta
    std::int64_t homothety = 1;            // > 1 means an inverse subdivision applies
};

// A surface is weakly minimal when no single move lowers its area: no
// applicable face-boundary move has negative delta, and no inverse
// subdivision exists (subdivision itself never lowers the square count).
inline WeakMinimality is_weakly_minimal(const CubicalSurface& surface) {
    WeakMinimality result;
    const Homothety h = homothety_factor(surface);
    result.homothety = h.factor;
    if (h.factor > 1) {
        result.verdict = false;
        return result;
    }
    for (M2Move& move : enumerate_m2(surface)) {
        if (move.applicable && move.delta_area() < 0) {
            result.reducing_move = std::move(move);
            result.verdict = false;
            return result;
        }
    }
    result.verdict = true;
    return result;
}

}  // namespace gridknot
