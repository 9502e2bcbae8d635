#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace gridknot {

// Axis convention throughout: 0 = x1, 1 = x2 (the plane the surfaces are
// spun about lives in coordinates x3, x4), 2 = x3 (the "z" height of arcs
// and knots), 3 = x4. Arc and knot vertices always have coordinate 3 == 0.
//
// Points are stored as integer numerators; the owning container records the
// shared denominator lambda, so a stored value k means the real coordinate
// k / lambda. No floating point exists anywhere in the core.
struct Point4 {
    std::array<std::int64_t, 4> c{0, 0, 0, 0};

    Point4() = default;
    Point4(std::int64_t x, std::int64_t y, std::int64_t z, std::int64_t w) : c{x, y, z, w} {}

    std::int64_t& operator[](int i) { return c[std::size_t(i)]; }
    std::int64_t operator[](int i) const { return c[std::size_t(i)]; }

    friend Point4 operator+(const Point4& a, const Point4& b) {
        return {a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2], a.c[3] + b.c[3]};
    }
    friend Point4 operator-(const Point4& a, const Point4& b) {
        return {a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2], a.c[3] - b.c[3]};
    }
    friend bool operator==(const Point4& a, const Point4& b) { return a.c == b.c; }
    friend bool operator!=(const Point4& a, const Point4& b) { return a.c != b.c; }
    friend bool operator<(const Point4& a, const Point4& b) { return a.c < b.c; }

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < 4; ++i) s += std::to_string(c[std::size_t(i)]) + (i < 3 ? "," : ")");
        return s;
    }
};

inline Point4 unit_vector(int axis) {
    Point4 p;
    p[axis] = 1;
    return p;
}

// If d is +/- a canonical unit vector, returns its axis and sign; otherwise
// axis = -1. Used to classify arc steps.
struct StepDir {
    int axis = -1;
    int sign = 0;
};

inline StepDir classify_step(const Point4& d) {
    StepDir s;
    for (int i = 0; i < 4; ++i) {
        if (d[i] == 0) continue;
        if (s.axis >= 0 || (d[i] != 1 && d[i] != -1)) return {};
        s.axis = i;
        s.sign = d[i] > 0 ? 1 : -1;
    }
    return s;
}

// The six coordinate planes of Z^4, as ordered axis pairs with i < j.
constexpr int kPlaneAxes[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

constexpr int plane_of(int i, int j) {
    // i < j required
    return i == 0 ? j - 1 : (i == 1 ? j + 1 : 5);
}

// An axis-aligned unit square of the scaled lattice: lexicographically
// minimal corner plus the spanned plane. Two squares are equal iff these
// agree, which makes set algebra on surfaces exact.
struct UnitSquare {
    Point4 base;
    std::uint8_t plane = 0;  // index into kPlaneAxes

    UnitSquare() = default;
    UnitSquare(const Point4& b, int p) : base(b), plane(std::uint8_t(p)) {}
    UnitSquare(const Point4& b, int i, int j) : base(b), plane(std::uint8_t(plane_of(i, j))) {}

    int axis_lo() const { return kPlaneAxes[plane][0]; }
    int axis_hi() const { return kPlaneAxes[plane][1]; }

    std::array<Point4, 4> corners() const {
        const Point4 ei = unit_vector(axis_lo()), ej = unit_vector(axis_hi());
        return {base, base + ei, base + ej, base + ei + ej};
    }

    friend bool operator==(const UnitSquare& a, const UnitSquare& b) {
        return a.plane == b.plane && a.base == b.base;
    }
    friend bool operator!=(const UnitSquare& a, const UnitSquare& b) { return !(a == b); }
    friend bool operator<(const UnitSquare& a, const UnitSquare& b) {
        if (a.base != b.base) return a.base < b.base;
        return a.plane < b.plane;
    }
};

// A unit edge of the scaled lattice: start point plus the axis it runs along.
struct EdgeKey {
    Point4 base;
    std::uint8_t axis = 0;

    EdgeKey() = default;
    EdgeKey(const Point4& b, int a) : base(b), axis(std::uint8_t(a)) {}

    friend bool operator==(const EdgeKey& a, const EdgeKey& b) {
        return a.axis == b.axis && a.base == b.base;
    }
    friend bool operator<(const EdgeKey& a, const EdgeKey& b) {
        if (a.base != b.base) return a.base < b.base;
        return a.axis < b.axis;
    }
};

inline std::array<EdgeKey, 4> edges_of(const UnitSquare& s) {
    const int i = s.axis_lo(), j = s.axis_hi();
    const Point4 ei = unit_vector(i), ej = unit_vector(j);
    return {EdgeKey(s.base, i), EdgeKey(s.base, j), EdgeKey(s.base + ej, i),
            EdgeKey(s.base + ei, j)};
}

// splitmix64-style mixing; good enough to key unordered containers.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Point4Hash {
    std::size_t operator()(const Point4& p) const {
        std::uint64_t h = 0;
        for (int i = 0; i < 4; ++i) h = mix64(h ^ std::uint64_t(p[i]));
        return std::size_t(h);
    }
};

struct UnitSquareHash {
    std::size_t operator()(const UnitSquare& s) const {
        return std::size_t(mix64(Point4Hash{}(s.base) ^ (std::uint64_t(s.plane) << 56)));
    }
};

struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& e) const {
        return std::size_t(mix64(Point4Hash{}(e.base) ^ (std::uint64_t(e.axis) << 56)));
    }
};

}  // namespace gridknot
