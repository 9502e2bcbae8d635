#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gridknot/error.hpp"
#include "gridknot/lattice.hpp"
#include "gridknot/rational.hpp"

namespace gridknot {

// An open axis-parallel lattice path in the half-space x3 >= 0, endpoints on
// the plane x3 = 0, interior strictly above it. Vertices are numerators in
// units of 1/lambda; consecutive vertices differ by one scaled unit step
// along a coordinate axis other than x4.
struct LatticeArc {
    std::int64_t lambda = 1;
    std::vector<Point4> vertices;

    int edge_count() const { return int(vertices.size()) - 1; }
};

// A closed axis-parallel self-avoiding cycle in Z^3 x {0} with all heights
// >= 0. Stored without repeating the first vertex; the closing edge is
// implied. Knots always live at denominator 1.
struct Lattice1Knot {
    std::vector<Point4> vertices;

    int edge_count() const { return int(vertices.size()); }
};

// Arc with half-length first and last steps and unit interior steps, stored
// at denominator 2 with the interior lattice vertices of those long steps
// omitted. The step-length pattern alpha_1 = alpha_{n-1} = 1/2, alpha_i = 1
// is implied by the type and re-checked on construction.
struct ReducedArc {
    std::vector<Point4> vertices;  // numerators in units of 1/2

    int vertex_count() const { return int(vertices.size()); }
};

struct ArcDiagnosis {
    Fault fault = Fault::None;
    int index = -1;  // first offending vertex or edge
    bool ok() const { return fault == Fault::None; }
};

namespace detail {

inline ArcDiagnosis scan_path(const std::vector<Point4>& v, bool closed) {
    const int n = int(v.size());
    for (int i = 0; i < n; ++i)
        if (v[std::size_t(i)][3] != 0) return {Fault::BadInput, i};
    const int steps = closed ? n : n - 1;
    for (int i = 0; i < steps; ++i) {
        const Point4 d = v[std::size_t((i + 1) % n)] - v[std::size_t(i)];
        int nonzero = 0;
        for (int a = 0; a < 4; ++a) nonzero += d[a] != 0;
        if (nonzero > 1) return {Fault::DiagonalStep, i};
        const StepDir s = classify_step(d);
        if (s.axis < 0) return {Fault::NonUnitStep, i};
    }
    std::unordered_set<Point4, Point4Hash> seen;
    seen.reserve(v.size() * 2);
    for (int i = 0; i < n; ++i)
        if (!seen.insert(v[std::size_t(i)]).second) return {Fault::SelfIntersection, i};
    return {};
}

}  // namespace detail

// Full invariant check; Fault::None means `vertices` is a valid arc at the
// given denominator. The index names the first offending vertex/edge.
inline ArcDiagnosis check_arc(const std::vector<Point4>& vertices, std::int64_t lambda) {
    if (lambda < 1) return {Fault::BadInput, -1};
    const int n = int(vertices.size());
    if (n < 2) return {Fault::TooFewVertices, -1};
    if (ArcDiagnosis d = detail::scan_path(vertices, /*closed=*/false); !d.ok()) return d;
    if (vertices.front()[2] != 0) return {Fault::EndpointOffPlane, 0};
    if (vertices.back()[2] != 0) return {Fault::EndpointOffPlane, n - 1};
    for (int i = 1; i + 1 < n; ++i) {
        if (vertices[std::size_t(i)][2] < 0) return {Fault::NegativeHeight, i};
        if (vertices[std::size_t(i)][2] == 0) return {Fault::InteriorOnPlane, i};
    }
    return {};
}

inline LatticeArc validate_arc(std::vector<Point4> vertices, std::int64_t lambda) {
    const ArcDiagnosis d = check_arc(vertices, lambda);
    if (!d.ok()) throw Error(d.fault, "invalid arc", d.index);
    return LatticeArc{lambda, std::move(vertices)};
}

inline ArcDiagnosis check_knot(const std::vector<Point4>& vertices) {
    const int n = int(vertices.size());
    if (n < 4) return {Fault::TooFewVertices, -1};
    if (ArcDiagnosis d = detail::scan_path(vertices, /*closed=*/true); !d.ok()) return d;
    for (int i = 0; i < n; ++i)
        if (vertices[std::size_t(i)][2] < 0) return {Fault::NegativeHeight, i};
    return {};
}

inline Lattice1Knot validate_knot(std::vector<Point4> vertices) {
    // Tolerate an explicitly repeated first vertex at the end.
    if (vertices.size() >= 2 && vertices.front() == vertices.back()) vertices.pop_back();
    const ArcDiagnosis d = check_knot(vertices);
    if (!d.ok()) throw Error(d.fault, "invalid 1-knot", d.index);
    return Lattice1Knot{std::move(vertices)};
}

// Opens a knot along its plane contact: the vertices at height 0 must form
// exactly one contiguous sub-path of the cycle with at least one edge. The
// returned arc is the complementary sub-path, endpoints included, oriented
// so its vertex list is lexicographically minimal.
inline LatticeArc arc_from_knot(const Lattice1Knot& knot) {
    const auto& v = knot.vertices;
    const int n = int(v.size());
    int contact = 0;
    for (const Point4& p : v) contact += p[2] == 0;
    if (contact == 0) throw Error(Fault::NoPlaneContact, "knot never touches the plane");
    if (contact == n)
        throw Error(Fault::DegeneratePlaneContact, "knot lies entirely in the plane");
    if (contact == 1)
        throw Error(Fault::DegeneratePlaneContact,
                    "plane contact is a single vertex; an arc needs two distinct endpoints");
    // The contact run is contiguous iff exactly one cyclic 0 -> (z>0)
    // transition exists.
    int transitions = 0, lift = -1;
    for (int i = 0; i < n; ++i) {
        const bool a = v[std::size_t(i)][2] == 0;
        const bool b = v[std::size_t((i + 1) % n)][2] == 0;
        if (a && !b) {
            ++transitions;
            lift = i;
        }
    }
    if (transitions != 1)
        throw Error(Fault::DisconnectedPlaneContact,
                    "plane contact splits into " + std::to_string(transitions) + " components");
    // Arc runs from the lift-off vertex over the top to the touch-down vertex.
    std::vector<Point4> fwd;
    fwd.reserve(std::size_t(n - contact + 2));
    for (int k = 0; k <= n - contact + 1; ++k) fwd.push_back(v[std::size_t((lift + k) % n)]);
    std::vector<Point4> rev(fwd.rbegin(), fwd.rend());
    return validate_arc(rev < fwd ? std::move(rev) : std::move(fwd), 1);
}

inline ArcDiagnosis check_reduced(const std::vector<Point4>& vertices) {
    const int n = int(vertices.size());
    if (n < 3) return {Fault::TooFewVertices, -1};
    for (int i = 0; i < n; ++i) {
        const Point4& p = vertices[std::size_t(i)];
        if (p[3] != 0) return {Fault::BadInput, i};
        if ((p[0] & 1) || (p[1] & 1)) return {Fault::BadStepPattern, i};
    }
    for (int i = 0; i + 1 < n; ++i) {
        const Point4 d = vertices[std::size_t(i + 1)] - vertices[std::size_t(i)];
        int nonzero = 0, axis = -1;
        for (int a = 0; a < 4; ++a)
            if (d[a] != 0) {
                ++nonzero;
                axis = a;
            }
        if (nonzero != 1 || axis == 3) return {Fault::DiagonalStep, i};
        const std::int64_t len = d[axis] < 0 ? -d[axis] : d[axis];
        const bool half_step = i == 0 || i == n - 2;
        if (len != (half_step ? 1 : 2)) return {Fault::BadStepPattern, i};
        if (half_step && axis != 2) return {Fault::BadStepPattern, i};
    }
    if (vertices.front()[2] != 0) return {Fault::EndpointOffPlane, 0};
    if (vertices.back()[2] != 0) return {Fault::EndpointOffPlane, n - 1};
    for (int i = 1; i + 1 < n; ++i) {
        const std::int64_t z = vertices[std::size_t(i)][2];
        if (z < 1) return {z < 0 ? Fault::NegativeHeight : Fault::InteriorOnPlane, i};
        if (!(z & 1)) return {Fault::BadStepPattern, i};
    }
    return {};
}

// The reduced arc as an honest denominator-2 subcubical arc: interior unit
// steps are split at their midpoints. Midpoint heights stay >= 1, so the
// result is a valid LatticeArc, and its self-avoidance check covers the
// reduced arc's.
inline LatticeArc subdivide_reduced(const ReducedArc& reduced) {
    std::vector<Point4> out;
    out.reserve(reduced.vertices.size() * 2);
    const int n = reduced.vertex_count();
    for (int i = 0; i < n; ++i) {
        const Point4& p = reduced.vertices[std::size_t(i)];
        out.push_back(p);
        if (i + 1 < n && i != 0 && i != n - 2) {
            const Point4 d = reduced.vertices[std::size_t(i + 1)] - p;
            out.push_back({p[0] + d[0] / 2, p[1] + d[1] / 2, p[2] + d[2] / 2, 0});
        }
    }
    return validate_arc(std::move(out), 2);
}

inline ReducedArc validate_reduced(std::vector<Point4> vertices) {
    const ArcDiagnosis d = check_reduced(vertices);
    if (!d.ok()) throw Error(d.fault, "invalid reduced arc", d.index);
    ReducedArc r{std::move(vertices)};
    subdivide_reduced(r);  // throws on self-intersection
    return r;
}

// Lowers every interior vertex of a denominator-1 arc by one half step.
// This is a bijection onto reduced arcs; unreduce_arc inverts it exactly.
inline ReducedArc reduce_arc(const LatticeArc& arc) {
    if (arc.lambda != 1) throw Error(Fault::BadInput, "reduce_arc requires a denominator-1 arc");
    std::vector<Point4> out;
    out.reserve(arc.vertices.size());
    const int n = int(arc.vertices.size());
    for (int i = 0; i < n; ++i) {
        const Point4& p = arc.vertices[std::size_t(i)];
        const bool interior = i != 0 && i != n - 1;
        out.push_back({2 * p[0], 2 * p[1], 2 * p[2] - (interior ? 1 : 0), 0});
    }
    return validate_reduced(std::move(out));
}

inline LatticeArc unreduce_arc(const ReducedArc& reduced) {
    const ArcDiagnosis d = check_reduced(reduced.vertices);
    if (!d.ok()) throw Error(d.fault, "invalid reduced arc", d.index);
    std::vector<Point4> out;
    out.reserve(reduced.vertices.size());
    const int n = reduced.vertex_count();
    for (int i = 0; i < n; ++i) {
        const Point4& p = reduced.vertices[std::size_t(i)];
        const bool interior = i != 0 && i != n - 1;
        out.push_back({p[0] / 2, p[1] / 2, (p[2] + (interior ? 1 : 0)) / 2, 0});
    }
    return validate_arc(std::move(out), 1);
}

// Sum of the interior heights, exactly.
inline Rational z_sum(const LatticeArc& arc) {
    std::int64_t s = 0;
    for (std::size_t i = 1; i + 1 < arc.vertices.size(); ++i) s += arc.vertices[i][2];
    return Rational(s, arc.lambda);
}

inline Rational z_sum(const ReducedArc& reduced) {
    std::int64_t s = 0;
    for (std::size_t i = 1; i + 1 < reduced.vertices.size(); ++i) s += reduced.vertices[i][2];
    return Rational(s, 2);
}

// Total polyline length, exactly.
inline Rational arc_length(const LatticeArc& arc) {
    return Rational(arc.edge_count(), arc.lambda);
}

inline Rational arc_length(const ReducedArc& reduced) {
    return Rational(reduced.vertex_count() - 2);  // 1/2 + (n-3) * 1 + 1/2
}

}  // namespace gridknot
