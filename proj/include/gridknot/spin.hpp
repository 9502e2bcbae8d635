#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridknot/arc.hpp"
#include "gridknot/error.hpp"
#include "gridknot/lattice.hpp"
#include "gridknot/rational.hpp"
#include "gridknot/surface.hpp"

namespace gridknot {

// Rotating a point at height z about the plane {x3 = x4 = 0} sweeps a circle
// of radius z in the (x3, x4)-plane; on the lattice that circle is realised
// as the boundary of the L-infinity ball [-z, z]^2. An arc edge therefore
// spins to one of three square-complex pieces:
//
//   disk            vertical edge rising from the plane: the filled square
//   square_annulus  vertical edge between positive heights: the cells
//                   between two concentric square boundaries
//   square_cylinder boundary of the square at the edge's height, extruded
//                   one step along the edge direction (no end covers)
enum class PieceKind { Disk, Annulus, Cylinder };

inline const char* piece_kind_name(PieceKind k) {
    switch (k) {
        case PieceKind::Disk: return "disk";
        case PieceKind::Annulus: return "square_annulus";
        case PieceKind::Cylinder: return "square_cylinder";
    }
    return "?";
}

struct SpinPiece {
    PieceKind kind = PieceKind::Disk;
    int edge = 0;       // index of the source edge
    int axis = -1;      // extrusion axis for cylinders, -1 otherwise
    std::int64_t radius_lo = 0;  // scaled; lo == 0 marks a disk
    std::int64_t radius_hi = 0;
    std::vector<UnitSquare> squares;  // cells at the build denominator
};

struct SpunSurface {
    CubicalSurface surface;          // validated sphere
    std::vector<SpinPiece> pieces;   // one per source edge, in order
    std::int64_t cell_lambda = 1;    // denominator of the piece cells
    LatticeArc source;               // the arc actually swept (subdivided for reduced input)
    std::optional<ReducedArc> reduced_source;
};

namespace detail {

inline std::int64_t outer_reach(std::int64_t a) {  // max(|a|, |a+1|) for a cell [a, a+1]
    return a >= 0 ? a + 1 : -a;
}

inline void emit_disk(std::int64_t x, std::int64_t y, std::int64_t r,
                      std::vector<UnitSquare>& out) {
    for (std::int64_t a = -r; a < r; ++a)
        for (std::int64_t b = -r; b < r; ++b) out.emplace_back(Point4{x, y, a, b}, 2, 3);
}

inline void emit_annulus(std::int64_t x, std::int64_t y, std::int64_t lo, std::int64_t hi,
                         std::vector<UnitSquare>& out) {
    for (std::int64_t a = -hi; a < hi; ++a)
        for (std::int64_t b = -hi; b < hi; ++b)
            if (std::max(outer_reach(a), outer_reach(b)) > lo)
                out.emplace_back(Point4{x, y, a, b}, 2, 3);
}

inline void emit_cylinder(const Point4& from, int axis, std::int64_t r,
                          std::vector<UnitSquare>& out) {
    const int other = axis == 0 ? 1 : 0;
    for (std::int64_t a = -r; a < r; ++a) {
        for (std::int64_t side : {-r, r}) {
            Point4 p;  // faces at x4 = +/- r, spanning (axis, x3)
            p[axis] = from[axis];
            p[other] = from[other];
            p[2] = a;
            p[3] = side;
            out.emplace_back(p, axis, 2);
            Point4 q;  // faces at x3 = +/- r, spanning (axis, x4)
            q[axis] = from[axis];
            q[other] = from[other];
            q[2] = side;
            q[3] = a;
            out.emplace_back(q, axis, 3);
        }
    }
}

}  // namespace detail

// The sub-surface swept by one arc edge, as explicit cells of the arc's
// lattice. The cell count is always 4 * (z_i + z_{i+1}) in scaled units; the
// tests re-derive that by brute enumeration rather than trusting it.
inline SpinPiece spin_edge(const LatticeArc& arc, int edge) {
    if (edge < 0 || edge >= arc.edge_count())
        throw Error(Fault::BadInput, "edge index out of range", edge);
    const Point4& v0 = arc.vertices[std::size_t(edge)];
    const Point4& v1 = arc.vertices[std::size_t(edge) + 1];
    const StepDir dir = classify_step(v1 - v0);

    SpinPiece piece;
    piece.edge = edge;
    if (dir.axis == 2) {
        const std::int64_t lo = std::min(v0[2], v1[2]);
        const std::int64_t hi = std::max(v0[2], v1[2]);
        piece.radius_lo = lo;
        piece.radius_hi = hi;
        if (lo == 0) {
            piece.kind = PieceKind::Disk;
            detail::emit_disk(v0[0], v0[1], hi, piece.squares);
        } else {
            piece.kind = PieceKind::Annulus;
            detail::emit_annulus(v0[0], v0[1], lo, hi, piece.squares);
        }
    } else {
        const std::int64_t r = v0[2];
        if (r == 0)
            throw Error(Fault::ZeroRadiusCylinder,
                        "horizontal edge at height 0 spins to a degenerate segment", edge);
        piece.kind = PieceKind::Cylinder;
        piece.axis = dir.axis;
        piece.radius_lo = piece.radius_hi = r;
        const Point4& from = dir.sign > 0 ? v0 : v1;
        detail::emit_cylinder(from, dir.axis, r, piece.squares);
    }
    sort_unique(piece.squares);
    return piece;
}

// Area of the spun surface by the closed form (8 / lambda) * sum of interior
// heights, exactly.
inline Rational area_formula(const LatticeArc& arc) {
    return Rational(8) / Rational(arc.lambda) * z_sum(arc);
}

// Area of the reduced spun surface: 8 * (sum of interior heights) - 2.
inline std::int64_t reduced_area_formula(const ReducedArc& reduced) {
    std::int64_t scaled = 0;
    for (std::size_t i = 1; i + 1 < reduced.vertices.size(); ++i)
        scaled += reduced.vertices[i][2];
    return 4 * scaled - 2;
}

// Upper bound for the minimal area over a denominator-1 arc's spin class:
// 8 * (sum of interior heights) - 4n + 6. Always equals
// reduced_area_formula(reduce_arc(arc)).
inline std::int64_t upper_bound_formula(const LatticeArc& arc) {
    if (arc.lambda != 1) throw Error(Fault::BadInput, "upper bound is for denominator-1 arcs");
    return 8 * z_sum(arc).as_integer() - 4 * std::int64_t(arc.vertices.size()) + 6;
}

namespace detail {

inline CubicalSurface union_pieces(const std::vector<SpinPiece>& pieces, std::int64_t lambda,
                                   const std::string& what) {
    std::size_t total = 0;
    std::vector<UnitSquare> all;
    for (const SpinPiece& p : pieces) total += p.squares.size();
    all.reserve(total);
    for (const SpinPiece& p : pieces) all.insert(all.end(), p.squares.begin(), p.squares.end());
    CubicalSurface surface = validate_surface(std::move(all), lambda);
    if (std::size_t(surface.area()) != total)
        throw Error(Fault::GluingMismatch, what + ": pieces overlap in " +
                                               std::to_string(total - std::size_t(surface.area())) +
                                               " cells");
    if (!surface.flags.sphere)
        throw Error(Fault::GluingMismatch, what + ": glued pieces are not an embedded sphere");
    return surface;
}

}  // namespace detail

// Spins a whole arc: the union of the per-edge pieces, validated as an
// embedded sphere. The counted area is checked against the closed form.
inline SpunSurface build_cspin(const LatticeArc& arc) {
    const ArcDiagnosis d = check_arc(arc.vertices, arc.lambda);
    if (!d.ok()) throw Error(d.fault, "build_cspin: invalid arc", d.index);

    SpunSurface spun;
    spun.cell_lambda = arc.lambda;
    spun.source = arc;
    spun.pieces.reserve(std::size_t(arc.edge_count()));
    for (int e = 0; e < arc.edge_count(); ++e) spun.pieces.push_back(spin_edge(arc, e));
    spun.surface = detail::union_pieces(spun.pieces, arc.lambda, "build_cspin");

    const Rational counted = Rational(spun.surface.area(), arc.lambda * arc.lambda);
    if (counted != area_formula(arc))
        throw Error(Fault::GluingMismatch, "build_cspin: counted area " + counted.str() +
                                               " != formula " + area_formula(arc).str());
    return spun;
}

// Spins a reduced arc at denominator 2, translates by (0, 0, 1/2, 1/2), and
// reassembles the half-cells into unit squares with integer corners. The
// result is reported at denominator 1; its area is reduced_area_formula.
inline SpunSurface build_rcspin(const ReducedArc& reduced) {
    const ArcDiagnosis d = check_reduced(reduced.vertices);
    if (!d.ok()) throw Error(d.fault, "build_rcspin: invalid reduced arc", d.index);

    const LatticeArc fine = subdivide_reduced(reduced);
    const Point4 shift{0, 0, 1, 1};  // (0, 0, 1/2, 1/2) in half-steps

    // One piece per reduced edge; interior unit edges contribute the cells
    // of both of their half-steps.
    const int n = reduced.vertex_count();
    SpunSurface spun;
    spun.cell_lambda = 2;
    spun.source = fine;
    spun.reduced_source = reduced;
    int fine_edge = 0;
    for (int e = 0; e + 1 < n; ++e) {
        const int halves = (e == 0 || e == n - 2) ? 1 : 2;
        SpinPiece merged;
        for (int h = 0; h < halves; ++h) {
            SpinPiece part = spin_edge(fine, fine_edge++);
            if (h == 0) {
                merged = part;
            } else {
                merged.radius_lo = std::min(merged.radius_lo, part.radius_lo);
                merged.radius_hi = std::max(merged.radius_hi, part.radius_hi);
                if (merged.radius_lo == 0) merged.kind = PieceKind::Disk;
                merged.squares.insert(merged.squares.end(), part.squares.begin(),
                                      part.squares.end());
            }
        }
        merged.edge = e;
        for (UnitSquare& s : merged.squares) s.base = s.base + shift;
        sort_unique(merged.squares);
        spun.pieces.push_back(std::move(merged));
    }

    // Sanity: glued half-cell surface is itself an embedded sphere.
    detail::union_pieces(spun.pieces, 2, "build_rcspin");

    // Reassemble 2x2 blocks of coplanar half-cells into unit squares.
    std::vector<UnitSquare> units;
    std::unordered_map<UnitSquare, int, UnitSquareHash> blocks;
    std::size_t half_cells = 0;
    for (const SpinPiece& piece : spun.pieces) {
        half_cells += piece.squares.size();
        for (const UnitSquare& cell : piece.squares) {
            const int i = cell.axis_lo(), j = cell.axis_hi();
            UnitSquare unit;
            unit.plane = cell.plane;
            for (int a = 0; a < 4; ++a) {
                std::int64_t v = cell.base[a];
                if (a == i || a == j) {
                    v -= ((v % 2) + 2) % 2;  // round down to even
                } else if (v % 2 != 0) {
                    throw Error(Fault::NonIntegralAfterTranslation,
                                "cell " + cell.base.str() + " sits off the integer lattice",
                                piece.edge);
                }
                unit.base[a] = v / 2;
            }
            ++blocks[unit];
        }
    }
    units.reserve(blocks.size());
    for (const auto& [unit, count] : blocks) {
        if (count != 4)
            throw Error(Fault::NonIntegralAfterTranslation,
                        "incomplete unit square at " + unit.base.str());
        units.push_back(unit);
    }
    if (half_cells != 4 * blocks.size())
        throw Error(Fault::NonIntegralAfterTranslation, "half-cell count not divisible by 4");

    spun.surface = validate_surface(std::move(units), 1);
    if (!spun.surface.flags.sphere)
        throw Error(Fault::GluingMismatch, "build_rcspin: reassembled surface is not a sphere");
    if (spun.surface.area() != reduced_area_formula(reduced))
        throw Error(Fault::GluingMismatch,
                    "build_rcspin: counted area " + std::to_string(spun.surface.area()) +
                        " != formula " + std::to_string(reduced_area_formula(reduced)));
    return spun;
}

// A maximal run of consecutive edges spinning to one geometric piece: a
// straight vertical climb (disk or annulus) or a straight horizontal run at
// constant height (cylinder).
struct DecomposedPiece {
    PieceKind kind = PieceKind::Disk;
    int first_edge = 0;
    int last_edge = 0;
    std::int64_t area = 0;  // in squares of the finished surface
};

inline std::vector<DecomposedPiece> decompose_pieces(const SpunSurface& spun) {
    const std::int64_t scale = spun.cell_lambda / spun.surface.lambda;
    const std::int64_t cells_per_square = scale * scale;

    std::vector<DecomposedPiece> out;
    for (std::size_t i = 0; i < spun.pieces.size(); ++i) {
        const SpinPiece& p = spun.pieces[i];
        const bool vertical = p.kind != PieceKind::Cylinder;
        bool merge = false;
        if (!out.empty() && std::size_t(out.back().last_edge + 1) == std::size_t(p.edge)) {
            const SpinPiece& prev = spun.pieces[i - 1];
            const bool prev_vertical = prev.kind != PieceKind::Cylinder;
            merge = vertical ? prev_vertical : (!prev_vertical && prev.axis == p.axis);
        }
        const std::int64_t cells = std::int64_t(p.squares.size());
        if (merge) {
            DecomposedPiece& group = out.back();
            group.last_edge = p.edge;
            if (p.kind == PieceKind::Disk) group.kind = PieceKind::Disk;
            group.area += cells;
        } else {
            out.push_back({p.kind, p.edge, p.edge, cells});
        }
    }
    for (DecomposedPiece& piece : out) {
        if (piece.area % cells_per_square != 0)
            throw Error(Fault::NonIntegralAfterTranslation,
                        "piece area not a whole number of surface squares");
        piece.area /= cells_per_square;
    }
    return out;
}

}  // namespace gridknot
