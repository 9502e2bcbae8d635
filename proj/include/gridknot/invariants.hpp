#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "gridknot/arc.hpp"
#include "gridknot/error.hpp"
#include "gridknot/lattice.hpp"

namespace gridknot {

// A classical knot diagram extracted from an exact projection of a lattice
// knot. Arcs are the maximal strands between consecutive under-passages;
// for c >= 1 crossings there are exactly c arcs.
struct DiagramCrossing {
    int over_arc = 0;
    int under_in = 0;   // arc ending at this under-passage
    int under_out = 0;  // arc leaving it
    int sign = 0;       // +1 or -1, orientation of (over, under) directions
};

struct Diagram {
    int arc_count = 1;
    std::vector<DiagramCrossing> crossings;
    std::vector<int> gauss;  // walk order; +(k+1) over / -(k+1) under passage of crossing k

    int crossing_count() const { return int(crossings.size()); }
};

namespace detail {

using i128 = __int128;

inline int sgn(i128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

struct Frac {  // exact parameter value in [0, 1], denominator > 0
    i128 num = 0;
    i128 den = 1;
    void reduce() {
        i128 a = num < 0 ? -num : num, b = den;
        while (b) { i128 t = a % b; a = b; b = t; }
        if (a > 1) { num /= a; den /= a; }
    }
    friend bool operator<(const Frac& x, const Frac& y) { return x.num * y.den < y.num * x.den; }
    friend bool operator==(const Frac& x, const Frac& y) { return x.num * y.den == y.num * x.den; }
};

struct PendingCrossing {
    int edge_over = 0, edge_under = 0;
    Frac t_over, t_under;
    int sign = 0;
};

}  // namespace detail

// Projects along the direction (eps^2, eps, 1) with eps = 1 / q for an
// integer q large enough that no two lattice points collide and no three
// edge images are concurrent; q doubles on the (never yet observed) retry.
// All arithmetic is integer, so the diagram is exact and reproducible.
// `variant` permutes the coordinate axes first, giving genuinely different
// projection directions for invariance tests.
inline Diagram project_diagram(const Lattice1Knot& knot, int variant = 0) {
    const auto& v = knot.vertices;
    const int n = int(v.size());
    if (n < 4) throw Error(Fault::TooFewVertices, "diagram needs a closed knot");

    static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                         {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    const int* perm = kPerms[((variant % 6) + 6) % 6];

    std::int64_t diameter = 1;
    for (int a = 0; a < 3; ++a) {
        std::int64_t lo = v[0][a], hi = v[0][a];
        for (const Point4& p : v) {
            lo = std::min(lo, p[a]);
            hi = std::max(hi, p[a]);
        }
        diameter = std::max(diameter, hi - lo);
    }

    for (int attempt = 0; attempt < 8; ++attempt) {
        const std::int64_t q = 8 * diameter << attempt;
        // Projected plane coordinates, scaled to integers:
        //   X = x * q^2 - z,  Y = y * q - z  (columns scale independently,
        // which preserves incidence and segment parameters).
        std::vector<std::int64_t> px(std::size_t(n)), py(std::size_t(n)), pz(std::size_t(n));
        for (int i = 0; i < n; ++i) {
            const std::int64_t x = v[std::size_t(i)][perm[0]];
            const std::int64_t y = v[std::size_t(i)][perm[1]];
            const std::int64_t z = v[std::size_t(i)][perm[2]];
            px[std::size_t(i)] = x * q * q - z;
            py[std::size_t(i)] = y * q - z;
            pz[std::size_t(i)] = z;
        }

        std::vector<detail::PendingCrossing> found;
        bool degenerate = false;
        for (int i = 0; i < n && !degenerate; ++i) {
            for (int j = i + 2; j < n && !degenerate; ++j) {
                if (i == 0 && j == n - 1) continue;  // cyclically adjacent
                const int i2 = i + 1, j2 = (j + 1) % n;
                const detail::i128 dx1 = px[std::size_t(i2)] - px[std::size_t(i)];
                const detail::i128 dy1 = py[std::size_t(i2)] - py[std::size_t(i)];
                const detail::i128 dx2 = px[std::size_t(j2)] - px[std::size_t(j)];
                const detail::i128 dy2 = py[std::size_t(j2)] - py[std::size_t(j)];
                const detail::i128 ex = px[std::size_t(j)] - px[std::size_t(i)];
                const detail::i128 ey = py[std::size_t(j)] - py[std::size_t(i)];
                const detail::i128 cross = dx1 * dy2 - dy1 * dx2;
                if (cross == 0) {
                    // Parallel images. Overlap would be degenerate; distinct
                    // parallels never meet.
                    if (ex * dy1 - ey * dx1 == 0) {
                        // Collinear: compare 1D extents along the dominant axis.
                        const bool use_x = dx1 != 0;
                        const std::int64_t a1 = use_x ? px[std::size_t(i)] : py[std::size_t(i)];
                        const std::int64_t a2 = use_x ? px[std::size_t(i2)] : py[std::size_t(i2)];
                        const std::int64_t b1 = use_x ? px[std::size_t(j)] : py[std::size_t(j)];
                        const std::int64_t b2 = use_x ? px[std::size_t(j2)] : py[std::size_t(j2)];
                        if (std::max(std::min(a1, a2), std::min(b1, b2)) <
                            std::min(std::max(a1, a2), std::max(b1, b2)))
                            degenerate = true;
                    }
                    continue;
                }
                detail::i128 tn = ex * dy2 - ey * dx2;   // t along edge i, over `cross`
                detail::i128 sn = ex * dy1 - ey * dx1;   // s along edge j, over `cross`
                detail::i128 den = cross;
                if (den < 0) { den = -den; tn = -tn; sn = -sn; }
                if (tn == 0 || tn == den || sn == 0 || sn == den) {
                    degenerate = true;  // vertex image on another edge image
                    continue;
                }
                if (tn < 0 || tn > den || sn < 0 || sn > den) continue;

                // Height along the projection direction decides over/under.
                // Horizontal edges have constant integer height; an edge
                // running along the projection's z-axis passes through
                // non-integer heights strictly between its endpoints, so the
                // comparison is always a strict integer test.
                const std::int64_t zi_lo = std::min(pz[std::size_t(i)], pz[std::size_t(i2)]);
                const std::int64_t zi_hi = std::max(pz[std::size_t(i)], pz[std::size_t(i2)]);
                const std::int64_t zj_lo = std::min(pz[std::size_t(j)], pz[std::size_t(j2)]);
                const std::int64_t zj_hi = std::max(pz[std::size_t(j)], pz[std::size_t(j2)]);
                bool i_over;
                if (zi_lo >= zj_hi) {
                    i_over = true;
                } else if (zj_lo >= zi_hi) {
                    i_over = false;
                } else {
                    degenerate = true;  // interleaved heights: edges too close
                    continue;
                }

                detail::PendingCrossing pc;
                detail::Frac t{tn, den}, s{sn, den};
                t.reduce();
                s.reduce();
                const int orient = detail::sgn(cross);
                if (i_over) {
                    pc.edge_over = i;
                    pc.edge_under = j;
                    pc.t_over = t;
                    pc.t_under = s;
                    pc.sign = orient;
                } else {
                    pc.edge_over = j;
                    pc.edge_under = i;
                    pc.t_over = s;
                    pc.t_under = t;
                    pc.sign = -orient;
                }
                found.push_back(pc);
            }
        }
        if (degenerate) continue;

        // Order the passages along the knot.
        struct Passage {
            int edge;
            detail::Frac t;
            int crossing;
            bool over;
        };
        std::vector<Passage> passages;
        passages.reserve(found.size() * 2);
        for (int k = 0; k < int(found.size()); ++k) {
            passages.push_back({found[std::size_t(k)].edge_over, found[std::size_t(k)].t_over, k, true});
            passages.push_back(
                {found[std::size_t(k)].edge_under, found[std::size_t(k)].t_under, k, false});
        }
        std::sort(passages.begin(), passages.end(), [](const Passage& a, const Passage& b) {
            if (a.edge != b.edge) return a.edge < b.edge;
            return a.t < b.t;
        });
        bool concurrent = false;
        for (std::size_t k = 1; k < passages.size(); ++k)
            if (passages[k].edge == passages[k - 1].edge && passages[k].t == passages[k - 1].t)
                concurrent = true;
        if (concurrent) continue;  // three images through one point

        Diagram diagram;
        const int c = int(found.size());
        for (const Passage& p : passages)
            diagram.gauss.push_back(p.over ? p.crossing + 1 : -(p.crossing + 1));
        if (c == 0) {
            diagram.arc_count = 1;
            return diagram;
        }
        diagram.arc_count = c;
        diagram.crossings.resize(std::size_t(c));
        // Arc m ends at the m-th under-passage (walk order); over-passages
        // strictly before it and after under m-1 lie on arc m.
        std::vector<int> under_pos;
        for (int k = 0; k < int(passages.size()); ++k)
            if (!passages[std::size_t(k)].over) under_pos.push_back(k);
        auto arc_at = [&](int pos) {
            const auto it = std::lower_bound(under_pos.begin(), under_pos.end(), pos);
            return int(it - under_pos.begin()) % c;
        };
        for (int k = 0; k < int(passages.size()); ++k) {
            const Passage& p = passages[std::size_t(k)];
            DiagramCrossing& x = diagram.crossings[std::size_t(p.crossing)];
            x.sign = found[std::size_t(p.crossing)].sign;
            if (p.over) {
                x.over_arc = arc_at(k);
            } else {
                x.under_in = arc_at(k);
                x.under_out = (x.under_in + 1) % c;
            }
        }
        return diagram;
    }
    throw Error(Fault::DegenerateProjection, "no valid projection after bounded retries");
}

namespace detail {

inline bool is_odd_prime(std::int64_t p) {
    if (p < 3 || p % 2 == 0) return false;
    for (std::int64_t d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

// Coloring relation matrix: one row per crossing, one column per arc,
// 2 * over - under_in - under_out (coefficients accumulate on collision).
inline std::vector<std::vector<std::int64_t>> coloring_matrix(const Diagram& d) {
    const int c = d.crossing_count();
    std::vector<std::vector<std::int64_t>> m(std::size_t(c),
                                             std::vector<std::int64_t>(std::size_t(c), 0));
    for (int k = 0; k < c; ++k) {
        const DiagramCrossing& x = d.crossings[std::size_t(k)];
        m[std::size_t(k)][std::size_t(x.over_arc)] += 2;
        m[std::size_t(k)][std::size_t(x.under_in)] -= 1;
        m[std::size_t(k)][std::size_t(x.under_out)] -= 1;
    }
    return m;
}

}  // namespace detail

// Number of p-colorings: solutions of the crossing relations over Z/p.
// Always a positive power of p (the constant colorings); p itself means no
// nontrivial coloring exists.
inline std::int64_t fox_colorings(const Diagram& diagram, std::int64_t p) {
    if (!detail::is_odd_prime(p)) throw Error(Fault::BadInput, "modulus must be an odd prime");
    const int c = diagram.crossing_count();
    if (c == 0) return p;
    auto m = detail::coloring_matrix(diagram);
    for (auto& row : m)
        for (auto& x : row) x = ((x % p) + p) % p;
    int rank = 0;
    for (int col = 0; col < c && rank < c; ++col) {
        int pivot = -1;
        for (int r = rank; r < c; ++r)
            if (m[std::size_t(r)][std::size_t(col)] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[std::size_t(rank)], m[std::size_t(pivot)]);
        // scale pivot row to 1
        std::int64_t inv = 1, a = m[std::size_t(rank)][std::size_t(col)] % p;
        for (std::int64_t e = 1; e < p; ++e)
            if (a * e % p == 1) {
                inv = e;
                break;
            }
        for (auto& x : m[std::size_t(rank)]) x = x * inv % p;
        for (int r = 0; r < c; ++r) {
            if (r == rank || m[std::size_t(r)][std::size_t(col)] == 0) continue;
            const std::int64_t f = m[std::size_t(r)][std::size_t(col)];
            for (int cc = 0; cc < c; ++cc)
                m[std::size_t(r)][std::size_t(cc)] =
                    ((m[std::size_t(r)][std::size_t(cc)] - f * m[std::size_t(rank)][std::size_t(cc)]) % p +
                     p) %
                    p;
        }
        ++rank;
    }
    std::int64_t count = 1;
    for (int k = 0; k < c - rank; ++k) count *= p;
    return count;
}

// |det| of a first minor of the coloring matrix over the integers: 1 for
// the unknot, 3 for the trefoil, 5 for the figure-eight.
inline std::int64_t knot_determinant(const Diagram& diagram) {
    const int c = diagram.crossing_count();
    if (c <= 1) return 1;
    auto full = detail::coloring_matrix(diagram);
    const int m = c - 1;
    std::vector<std::vector<detail::i128>> a(std::size_t(m),
                                             std::vector<detail::i128>(std::size_t(m)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a[std::size_t(i)][std::size_t(j)] = full[std::size_t(i)][std::size_t(j)];

    // Bareiss fraction-free elimination.
    detail::i128 prev = 1;
    int sign = 1;
    for (int k = 0; k < m - 1; ++k) {
        if (a[std::size_t(k)][std::size_t(k)] == 0) {
            int swap_row = -1;
            for (int r = k + 1; r < m; ++r)
                if (a[std::size_t(r)][std::size_t(k)] != 0) {
                    swap_row = r;
                    break;
                }
            if (swap_row < 0) return 0;
            std::swap(a[std::size_t(k)], a[std::size_t(swap_row)]);
            sign = -sign;
        }
        for (int i = k + 1; i < m; ++i)
            for (int j = k + 1; j < m; ++j)
                a[std::size_t(i)][std::size_t(j)] =
                    (a[std::size_t(i)][std::size_t(j)] * a[std::size_t(k)][std::size_t(k)] -
                     a[std::size_t(i)][std::size_t(k)] * a[std::size_t(k)][std::size_t(j)]) /
                    prev;
        prev = a[std::size_t(k)][std::size_t(k)];
    }
    detail::i128 det = a[std::size_t(m - 1)][std::size_t(m - 1)] * sign;
    if (det < 0) det = -det;
    return std::int64_t(det);
}

// A run of k >= 3 consecutive height-2 vertices, entered and left through
// height-1 vertices, passing straight over a height-1 strand: the
// combinatorial crossing unit of height-2 lattice knots.
struct CrossingStep {
    std::vector<int> run;        // vertex indices at height 2, consecutive
    int flank_before = 0;        // height-1 vertex entering the run
    int flank_after = 0;         // height-1 vertex leaving it
    std::array<int, 3> under{};  // consecutive height-1 vertices crossing below
    int under_extent = 3;        // length of the maximal straight strand through them

    std::vector<int> all_vertices() const {
        std::vector<int> ids = run;
        ids.push_back(flank_before);
        ids.push_back(flank_after);
        ids.insert(ids.end(), under.begin(), under.end());
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    }
};

inline std::vector<CrossingStep> crossing_steps(const Lattice1Knot& knot) {
    const auto& v = knot.vertices;
    const int n = int(v.size());
    auto z = [&](int i) { return v[std::size_t(((i % n) + n) % n)][2]; };
    auto at = [&](int i) -> const Point4& { return v[std::size_t(((i % n) + n) % n)]; };

    std::vector<CrossingStep> steps;
    for (int start = 0; start < n; ++start) {
        if (!(z(start) == 2 && z(start - 1) != 2)) continue;
        int k = 0;
        while (k < n && z(start + k) == 2) ++k;
        if (k < 3) continue;
        if (z(start - 1) != 1 || z(start + k) != 1) continue;

        std::vector<int> run;
        for (int r = 0; r < k; ++r) run.push_back(((start + r) % n + n) % n);

        for (int b = 0; b < n; ++b) {
            if (z(b) != 1 || z(b - 1) != 1 || z(b + 1) != 1) continue;
            // straight through b
            const Point4 da = at(b) - at(b - 1);
            const Point4 dc = at(b + 1) - at(b);
            if (!(da == dc)) continue;
            // directly below some run vertex, crossing it transversally
            bool below = false;
            for (int r : run) {
                if (v[std::size_t(r)][0] != at(b)[0] || v[std::size_t(r)][1] != at(b)[1]) continue;
                const int ri = int(std::find(run.begin(), run.end(), r) - run.begin());
                for (int nb : {ri - 1, ri + 1}) {
                    if (nb < 0 || nb >= k) continue;
                    const Point4 dr = v[std::size_t(run[std::size_t(nb)])] - v[std::size_t(r)];
                    if (dr[0] * da[0] + dr[1] * da[1] == 0) below = true;
                }
            }
            if (!below) continue;

            CrossingStep step;
            step.run = run;
            step.flank_before = ((start - 1) % n + n) % n;
            step.flank_after = (start + k) % n;
            step.under = {((b - 1) % n + n) % n, b, (b + 1) % n};
            // extend the straight strand both ways for the metadata extent
            int lo = b - 1, hi = b + 1, extent = 3;
            while (z(lo - 1) == 1 && at(lo) - at(lo - 1) == da && extent < n) {
                --lo;
                ++extent;
            }
            while (z(hi + 1) == 1 && at(hi + 1) - at(hi) == da && extent < n) {
                ++hi;
                ++extent;
            }
            step.under_extent = extent;
            if (int(step.all_vertices().size()) >= 8) steps.push_back(std::move(step));
        }
    }
    return steps;
}

}  // namespace gridknot
