#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "gridknot/arc.hpp"
#include "gridknot/error.hpp"
#include "gridknot/invariants.hpp"
#include "gridknot/lattice.hpp"
#include "gridknot/spin.hpp"

namespace gridknot {

struct SearchConstraints {
    std::int64_t max_height = 2;  // cap on vertex heights
    std::int64_t max_zsum = 12;   // cap on the sum of heights over z > 0 vertices
    int max_len = 20;             // cap on cycle edge count
    int footprint_w = 4;          // lattice points spanned in x
    int footprint_d = 4;          // lattice points spanned in y
    bool require_knotted = false;

    // engine knobs
    int jobs = 0;                  // 0: GRIDKNOT_JOBS env or hardware concurrency
    int split_depth = 6;           // parallel split depth of the DFS tree
    double budget_seconds = 0;     // 0: unlimited
    std::string checkpoint_path;   // optional resumable state file
};

struct KnottedCycle {
    Lattice1Knot knot;  // canonical form
    std::int64_t determinant = 0;
    std::int64_t reduced_area = 0;  // 8 * zsum - 4n + 6 over its arc
    std::int64_t zsum = 0;
    int arc_vertices = 0;
};

struct CertificateReport {
    SearchConstraints constraints;
    std::uint64_t cycles_enumerated = 0;  // canonical classes examined
    std::vector<KnottedCycle> knotted_found;
    std::optional<std::int64_t> min_reduced_area;
    std::vector<std::string> assumptions;
    double wall_seconds = 0;
    bool completed = true;  // false: budget hit; checkpoint written if a path was given
};

// ---------------------------------------------------------------------------
// canonical forms

// The 8 symmetries of the square acting on (x, y); heights are never
// reflected, the half-space z >= 0 breaks that symmetry.
inline Point4 apply_xy_symmetry(const Point4& p, int sym) {
    std::int64_t x = p[0], y = p[1];
    if (sym & 4) std::swap(x, y);
    if (sym & 1) x = -x;
    if (sym & 2) y = -y;
    return {x, y, p[2], p[3]};
}

namespace detail {

inline void translate_to_corner(std::vector<Point4>& pts) {
    std::int64_t mx = pts[0][0], my = pts[0][1];
    for (const Point4& p : pts) {
        mx = std::min(mx, p[0]);
        my = std::min(my, p[1]);
    }
    for (Point4& p : pts) {
        p[0] -= mx;
        p[1] -= my;
    }
}

inline bool lex_less(const std::vector<Point4>& a, const std::vector<Point4>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace detail

// Minimal representative of a cycle under (x, y) translation, the square
// symmetries, traversal direction, and starting vertex.
inline Lattice1Knot canonical_form(const Lattice1Knot& knot) {
    const int n = int(knot.vertices.size());
    std::vector<Point4> best;
    std::vector<Point4> variant(std::size_t(n)), rotated(std::size_t(n));
    for (int sym = 0; sym < 8; ++sym) {
        for (int dir = 0; dir < 2; ++dir) {
            for (int i = 0; i < n; ++i) {
                const Point4& src =
                    knot.vertices[std::size_t(dir == 0 ? i : (n - 1 - i))];
                variant[std::size_t(i)] = apply_xy_symmetry(src, sym);
            }
            detail::translate_to_corner(variant);
            for (int start = 0; start < n; ++start) {
                for (int i = 0; i < n; ++i)
                    rotated[std::size_t(i)] = variant[std::size_t((start + i) % n)];
                if (best.empty() || detail::lex_less(rotated, best)) best = rotated;
            }
        }
    }
    return Lattice1Knot{std::move(best)};
}

// Same reduction for an open path (no rotation of the start).
inline std::vector<Point4> canonical_arc_form(const std::vector<Point4>& arc) {
    const int n = int(arc.size());
    std::vector<Point4> best;
    std::vector<Point4> variant(std::size_t(n));
    for (int sym = 0; sym < 8; ++sym) {
        for (int dir = 0; dir < 2; ++dir) {
            for (int i = 0; i < n; ++i)
                variant[std::size_t(i)] = apply_xy_symmetry(
                    arc[std::size_t(dir == 0 ? i : (n - 1 - i))], sym);
            detail::translate_to_corner(variant);
            if (best.empty() || detail::lex_less(variant, best)) best = variant;
        }
    }
    return best;
}

namespace detail {

struct Hash128 {
    std::uint64_t a = 0, b = 0;
    friend bool operator==(const Hash128& x, const Hash128& y) { return x.a == y.a && x.b == y.b; }
};
struct Hash128Hash {
    std::size_t operator()(const Hash128& h) const { return std::size_t(h.a ^ mix64(h.b)); }
};

inline Hash128 hash_points(const std::vector<Point4>& pts) {
    Hash128 h{0x6b79b23fa1df2e01ULL, 0x2545f4914f6cdd1dULL};
    for (const Point4& p : pts)
        for (int i = 0; i < 4; ++i) {
            h.a = mix64(h.a ^ std::uint64_t(p[i]));
            h.b = mix64(h.b + 0x9e3779b97f4a7c15ULL + std::uint64_t(p[i]));
        }
    return h;
}

}  // namespace detail

// Straight-or-L plane path from `from` back to `to` (both at z = 0), x leg
// first; the interior vertices are appended. The plane holds no other cycle
// vertices, so this never collides.
inline void append_plane_return(std::vector<Point4>& cycle, const Point4& from, const Point4& to) {
    Point4 p = from;
    while (p[0] != to[0]) {
        p[0] += p[0] < to[0] ? 1 : -1;
        if (p != to) cycle.push_back(p);
    }
    while (p[1] != to[1]) {
        p[1] += p[1] < to[1] ? 1 : -1;
        if (p != to) cycle.push_back(p);
    }
}

// Closes an open arc (endpoints on the plane) into a cycle with the
// deterministic plane return. The spun surface, and hence everything the
// search ranks, depends only on the arc.
inline Lattice1Knot close_arc(const std::vector<Point4>& arc) {
    std::vector<Point4> cycle = arc;
    append_plane_return(cycle, arc.back(), arc.front());
    return validate_knot(std::move(cycle));
}

// ---------------------------------------------------------------------------
// depth-first enumeration

namespace detail {

// Dense occupancy over x, y in [-bound, bound], z in [0, max_height].
struct Board {
    std::int64_t bound = 0;
    std::int64_t side = 0;
    std::int64_t zmax = 0;
    std::vector<char> cells;

    void init(std::int64_t b, std::int64_t z) {
        bound = b;
        side = 2 * b + 1;
        zmax = z;
        cells.assign(std::size_t(side * side * (z + 1)), 0);
    }
    bool in_range(const Point4& p) const {
        return p[0] >= -bound && p[0] <= bound && p[1] >= -bound && p[1] <= bound && p[2] >= 0 &&
               p[2] <= zmax;
    }
    std::size_t index(const Point4& p) const {
        return std::size_t((p[2] * side + (p[1] + bound)) * side + (p[0] + bound));
    }
    char& at(const Point4& p) { return cells[index(p)]; }
};

struct DfsState {
    Board board;
    std::vector<Point4> path;  // (0,0,0), (0,0,1), ... current
    std::int64_t zsum = 0;     // heights of path[1..]
    std::int64_t weight = -2;  // -2 + sum of (8z - 4) over interior vertices
    std::int64_t minx = 0, maxx = 0, miny = 0, maxy = 0;
    bool seen_horizontal = false;
    bool seen_y = false;
};

struct FootprintFit {
    std::int64_t lo = 0, hi = 0;  // sorted footprint spans, in points
    bool fits(std::int64_t ex, std::int64_t ey) const {
        const std::int64_t a = std::min(ex, ey), b = std::max(ex, ey);
        return a <= lo && b <= hi;
    }
};

// One step of the arc DFS. Visitor needs:
//   bool stopped()                       cooperative abort
//   bool prune_weight(int64 lower_bound) objective pruning (certify: false)
//   void complete(path, landing, zsum)   arc finished
//   bool descend_past(int depth)         false to emit a prefix instead
//   void emit_prefix(state)
template <class Visitor>
void arc_dfs(const SearchConstraints& cons, const FootprintFit& fit, DfsState& st, Visitor& vis) {
    if (vis.stopped()) return;
    const Point4 cur = st.path.back();
    const int steps = int(st.path.size()) - 1;

    // Completion: step down to the plane and close with the minimal return.
    if (cur[2] == 1 && !(cur[0] == 0 && cur[1] == 0)) {
        const std::int64_t ret = std::abs(cur[0]) + std::abs(cur[1]);
        if (steps + 1 + ret <= cons.max_len)
            vis.complete(st.path, Point4{cur[0], cur[1], 0, 0}, st.zsum);
    }

    if (!vis.descend_past(steps)) {
        vis.emit_prefix(st);
        return;
    }

    static constexpr std::int64_t kDirs[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                                 {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
    for (const auto& d : kDirs) {
        // Canonical first moves: the first horizontal step is +x, the first
        // y step is +y. Every class has exactly one such representative per
        // rooting.
        if (d[2] == 0) {
            if (!st.seen_horizontal && !(d[0] == 1 && d[1] == 0)) continue;
            if (d[1] != 0 && !st.seen_y && d[1] < 0) continue;
        }
        const Point4 np{cur[0] + d[0], cur[1] + d[1], cur[2] + d[2], 0};
        if (np[2] < 1 || np[2] > cons.max_height) continue;
        if (!st.board.in_range(np)) continue;
        char& cell = st.board.at(np);
        if (cell) continue;
        const std::int64_t nzsum = st.zsum + np[2];
        if (nzsum + np[2] * (np[2] - 1) / 2 > cons.max_zsum) continue;
        // Shortest possible completion from np: descend, then return home.
        const std::int64_t manhattan = std::abs(np[0]) + std::abs(np[1]) + np[2] +
                                       ((np[0] == 0 && np[1] == 0) ? 2 : 0);
        if (steps + 1 + manhattan > cons.max_len) continue;
        const std::int64_t nminx = std::min(st.minx, np[0]), nmaxx = std::max(st.maxx, np[0]);
        const std::int64_t nminy = std::min(st.miny, np[1]), nmaxy = std::max(st.maxy, np[1]);
        if (!fit.fits(nmaxx - nminx + 1, nmaxy - nminy + 1)) continue;
        const std::int64_t nweight = st.weight + 8 * np[2] - 4;
        if (vis.prune_weight(nweight + 4 * (np[2] - 1) * (np[2] - 1))) continue;

        const std::int64_t szsum = st.zsum, sweight = st.weight;
        const std::int64_t sminx = st.minx, smaxx = st.maxx, sminy = st.miny, smaxy = st.maxy;
        const bool shoriz = st.seen_horizontal, sy = st.seen_y;
        cell = 1;
        st.path.push_back(np);
        st.zsum = nzsum;
        st.weight = nweight;
        st.minx = nminx;
        st.maxx = nmaxx;
        st.miny = nminy;
        st.maxy = nmaxy;
        st.seen_horizontal = shoriz || d[2] == 0;
        st.seen_y = sy || d[1] != 0;
        arc_dfs(cons, fit, st, vis);
        st.path.pop_back();
        st.zsum = szsum;
        st.weight = sweight;
        st.minx = sminx;
        st.maxx = smaxx;
        st.miny = sminy;
        st.maxy = smaxy;
        st.seen_horizontal = shoriz;
        st.seen_y = sy;
        cell = 0;
    }
}

inline DfsState fresh_state(const SearchConstraints& cons) {
    DfsState st;
    const std::int64_t bound = std::max(cons.footprint_w, cons.footprint_d) - 1;
    st.board.init(std::max<std::int64_t>(bound, 1), cons.max_height);
    st.board.at(Point4{0, 0, 0, 0}) = 1;
    st.board.at(Point4{0, 0, 1, 0}) = 1;
    st.path = {Point4{0, 0, 0, 0}, Point4{0, 0, 1, 0}};
    st.zsum = 1;
    st.weight = -2 + 4;  // the forced (0,0,1) vertex
    return st;
}

// Rebuilds a DfsState from a stored path prefix.
inline DfsState state_from_path(const SearchConstraints& cons, const std::vector<Point4>& path) {
    DfsState st = fresh_state(cons);
    for (std::size_t i = 2; i < path.size(); ++i) {
        const Point4& p = path[i];
        const Point4 d = p - path[i - 1];
        st.board.at(p) = 1;
        st.path.push_back(p);
        st.zsum += p[2];
        st.weight += 8 * p[2] - 4;
        st.minx = std::min(st.minx, p[0]);
        st.maxx = std::max(st.maxx, p[0]);
        st.miny = std::min(st.miny, p[1]);
        st.maxy = std::max(st.maxy, p[1]);
        st.seen_horizontal = st.seen_horizontal || d[2] == 0;
        st.seen_y = st.seen_y || d[1] != 0;
    }
    return st;
}

inline FootprintFit footprint_fit(const SearchConstraints& cons) {
    FootprintFit fit;
    fit.lo = std::min(cons.footprint_w, cons.footprint_d);
    fit.hi = std::max(cons.footprint_w, cons.footprint_d);
    return fit;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// full-cycle enumeration (used by the oracle-equivalence tests and the API)

// Streams every self-avoiding closed cycle within the constraints that
// touches the plane in one contiguous run, exactly once per canonical
// class. All plane returns are enumerated, not just the minimal one.
inline void enumerate_cycles(const SearchConstraints& cons,
                             const std::function<void(const Lattice1Knot&)>& visit) {
    std::unordered_set<detail::Hash128, detail::Hash128Hash> seen;
    const detail::FootprintFit fit = detail::footprint_fit(cons);

    struct Emitter {
        const SearchConstraints& cons;
        const detail::FootprintFit& fit;
        std::unordered_set<detail::Hash128, detail::Hash128Hash>& seen;
        const std::function<void(const Lattice1Knot&)>& visit;
        detail::DfsState* st = nullptr;

        bool stopped() const { return false; }
        bool prune_weight(std::int64_t) const { return false; }
        bool descend_past(int) const { return true; }
        void emit_prefix(detail::DfsState&) const {}

        void complete(const std::vector<Point4>& path, const Point4& landing, std::int64_t) {
            // Enumerate all plane returns from `landing` to the origin.
            std::vector<Point4> cycle = path;
            cycle.push_back(landing);
            plane_dfs(cycle, landing);
        }

        void plane_dfs(std::vector<Point4>& cycle, const Point4& at) {
            const int steps = int(cycle.size()) - 1;
            if (std::abs(at[0]) + std::abs(at[1]) == 1 && steps + 1 <= cons.max_len) {
                const Lattice1Knot canon = canonical_form(Lattice1Knot{cycle});
                if (seen.insert(detail::hash_points(canon.vertices)).second) visit(canon);
            }
            static constexpr std::int64_t kDirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (const auto& d : kDirs) {
                const Point4 np{at[0] + d[0], at[1] + d[1], 0, 0};
                if (!st->board.in_range(np)) continue;
                char& cell = st->board.at(np);
                if (cell) continue;
                const std::int64_t exx =
                    std::max(st->maxx, np[0]) - std::min(st->minx, np[0]) + 1;
                const std::int64_t exy =
                    std::max(st->maxy, np[1]) - std::min(st->miny, np[1]) + 1;
                if (!fit.fits(exx, exy)) continue;
                if (steps + 1 + std::abs(np[0]) + std::abs(np[1]) > cons.max_len) continue;
                const auto sminx = st->minx, smaxx = st->maxx, sminy = st->miny, smaxy = st->maxy;
                st->minx = std::min(st->minx, np[0]);
                st->maxx = std::max(st->maxx, np[0]);
                st->miny = std::min(st->miny, np[1]);
                st->maxy = std::max(st->maxy, np[1]);
                cell = 1;
                cycle.push_back(np);
                plane_dfs(cycle, np);
                cycle.pop_back();
                cell = 0;
                st->minx = sminx;
                st->maxx = smaxx;
                st->miny = sminy;
                st->maxy = smaxy;
            }
        }
    };

    detail::DfsState st = detail::fresh_state(cons);
    Emitter emitter{cons, fit, seen, visit, &st};
    detail::arc_dfs(cons, fit, st, emitter);
}

// ---------------------------------------------------------------------------
// certification / minimization engine

namespace detail {

struct SharedResults {
    std::mutex mu;
    std::unordered_set<Hash128, Hash128Hash> classes;
    std::vector<KnottedCycle> knotted;
    std::atomic<std::int64_t> best_weight{INT64_MAX};
    std::atomic<bool> stop{false};
    std::chrono::steady_clock::time_point deadline{};
    bool use_deadline = false;
    bool expired = false;
};

inline std::uint64_t constraints_fingerprint(const SearchConstraints& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mixin = [&h](std::int64_t v) { h = mix64(h ^ std::uint64_t(v)); };
    mixin(c.max_height);
    mixin(c.max_zsum);
    mixin(c.max_len);
    mixin(c.footprint_w);
    mixin(c.footprint_d);
    mixin(c.require_knotted ? 1 : 0);
    return h;
}

struct Checkpoint {
    std::uint64_t fingerprint = 0;
    std::vector<char> finished;  // one per prefix
    std::uint64_t classes_count = 0;
    std::vector<Hash128> class_hashes;
    std::vector<KnottedCycle> knotted;
    double elapsed = 0;

    bool load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) return false;
        char magic[8];
        in.read(magic, 8);
        if (!in || std::memcmp(magic, "GKCKPT1\n", 8) != 0) return false;
        auto rd64 = [&in]() {
            std::uint64_t v = 0;
            in.read(reinterpret_cast<char*>(&v), 8);
            return v;
        };
        fingerprint = rd64();
        finished.assign(rd64(), 0);
        in.read(finished.data(), std::streamsize(finished.size()));
        classes_count = rd64();
        class_hashes.resize(rd64());
        for (Hash128& h : class_hashes) {
            h.a = rd64();
            h.b = rd64();
        }
        knotted.resize(rd64());
        for (KnottedCycle& k : knotted) {
            k.knot.vertices.resize(rd64());
            for (Point4& p : k.knot.vertices)
                for (int i = 0; i < 4; ++i) p[i] = std::int64_t(rd64());
            k.determinant = std::int64_t(rd64());
            k.reduced_area = std::int64_t(rd64());
            k.zsum = std::int64_t(rd64());
            k.arc_vertices = int(rd64());
        }
        std::uint64_t bits = rd64();
        std::memcpy(&elapsed, &bits, 8);
        return bool(in);
    }

    void save(const std::string& path) const {
        const std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out.write("GKCKPT1\n", 8);
            auto wr64 = [&out](std::uint64_t v) {
                out.write(reinterpret_cast<const char*>(&v), 8);
            };
            wr64(fingerprint);
            wr64(finished.size());
            out.write(finished.data(), std::streamsize(finished.size()));
            wr64(classes_count);
            wr64(class_hashes.size());
            for (const Hash128& h : class_hashes) {
                wr64(h.a);
                wr64(h.b);
            }
            wr64(knotted.size());
            for (const KnottedCycle& k : knotted) {
                wr64(k.knot.vertices.size());
                for (const Point4& p : k.knot.vertices)
                    for (int i = 0; i < 4; ++i) wr64(std::uint64_t(p[i]));
                wr64(std::uint64_t(k.determinant));
                wr64(std::uint64_t(k.reduced_area));
                wr64(std::uint64_t(k.zsum));
                wr64(std::uint64_t(k.arc_vertices));
            }
            std::uint64_t bits = 0;
            std::memcpy(&bits, &elapsed, 8);
            wr64(bits);
        }
        std::rename(tmp.c_str(), path.c_str());
    }
};

// Completion handler shared by certify and minimize: canonicalize the arc,
// dedupe, screen knottedness via the knot determinant.
inline void process_arc(const SearchConstraints& cons, SharedResults& shared, bool minimizing,
                        const std::vector<Point4>& path, const Point4& landing,
                        std::int64_t zsum) {
    std::vector<Point4> arc = path;
    arc.push_back(landing);
    const std::vector<Point4> canon = canonical_arc_form(arc);
    const Hash128 h = hash_points(canon);
    {
        std::lock_guard<std::mutex> lock(shared.mu);
        if (!shared.classes.insert(h).second) return;
    }
    const Lattice1Knot knot = close_arc(canon);
    const std::int64_t det = knot_determinant(project_diagram(knot));
    if (det == 1) return;

    KnottedCycle found;
    found.knot = canonical_form(knot);
    found.determinant = det;
    found.zsum = zsum;
    found.arc_vertices = int(canon.size());
    found.reduced_area = 8 * zsum - 4 * std::int64_t(canon.size()) + 6;
    std::lock_guard<std::mutex> lock(shared.mu);
    if (minimizing) {
        std::int64_t cur = shared.best_weight.load(std::memory_order_relaxed);
        while (found.reduced_area < cur &&
               !shared.best_weight.compare_exchange_weak(cur, found.reduced_area)) {
        }
    }
    shared.knotted.push_back(std::move(found));
}

struct EngineVisitor {
    const SearchConstraints* cons = nullptr;
    SharedResults* shared = nullptr;
    bool minimizing = false;
    int prefix_depth = -1;  // < 0: never emit prefixes
    std::vector<std::vector<Point4>>* prefixes = nullptr;
    std::uint64_t tick = 0;

    bool stopped() {
        if ((++tick & 0xfff) == 0 && shared->use_deadline &&
            std::chrono::steady_clock::now() > shared->deadline) {
            shared->expired = true;
            shared->stop.store(true, std::memory_order_relaxed);
        }
        return shared->stop.load(std::memory_order_relaxed);
    }
    bool prune_weight(std::int64_t lower_bound) const {
        if (!minimizing) return false;
        return lower_bound > shared->best_weight.load(std::memory_order_relaxed) ||
               lower_bound > 8 * cons->max_zsum - 4 * (cons->max_len - 1) + 6 + 4 * cons->max_len;
    }
    bool descend_past(int depth) const { return prefix_depth < 0 || depth < prefix_depth; }
    void emit_prefix(DfsState& st) const { prefixes->push_back(st.path); }
    void complete(const std::vector<Point4>& path, const Point4& landing, std::int64_t zsum) {
        process_arc(*cons, *shared, minimizing, path, landing, zsum);
    }
};

}  // namespace detail

// Exhaustive constrained search. With `minimize` the reduced-area objective
// prunes the tree (sound for the minimum; the class census then covers only
// the surviving subtrees). Without it, every canonical arc class within the
// constraints is visited and screened.
inline CertificateReport run_search(SearchConstraints cons, bool minimize) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();

    if (cons.max_height < 1 || cons.max_zsum < 1 || cons.max_len < 4 || cons.footprint_w < 1 ||
        cons.footprint_d < 1)
        throw Error(Fault::BadInput, "all search bounds must be >= 1 (max_len >= 4)");
    if (std::max(cons.footprint_w, cons.footprint_d) > 24)
        throw Error(Fault::BadInput, "footprint too large for the dense search board");
    if (cons.jobs <= 0) {
        if (const char* env = std::getenv("GRIDKNOT_JOBS")) cons.jobs = std::max(1, atoi(env));
        else cons.jobs = std::max(1u, std::thread::hardware_concurrency());
    }

    detail::SharedResults shared;
    if (cons.budget_seconds > 0) {
        shared.use_deadline = true;
        shared.deadline =
            t0 + std::chrono::microseconds(std::int64_t(cons.budget_seconds * 1e6));
    }

    detail::Checkpoint ckpt;
    double prior_elapsed = 0;
    bool resumed = false;
    if (!cons.checkpoint_path.empty() && ckpt.load(cons.checkpoint_path)) {
        if (ckpt.fingerprint != detail::constraints_fingerprint(cons))
            throw Error(Fault::BadInput, "checkpoint belongs to different constraints");
        shared.classes.insert(ckpt.class_hashes.begin(), ckpt.class_hashes.end());
        shared.knotted = ckpt.knotted;
        for (const KnottedCycle& k : shared.knotted)
            shared.best_weight.store(
                std::min(shared.best_weight.load(), k.reduced_area));
        prior_elapsed = ckpt.elapsed;
        resumed = true;
    }

    const detail::FootprintFit fit = detail::footprint_fit(cons);

    // Phase 1: walk to the split depth, emitting subtree roots. Completions
    // above the split are handled inline; both are deterministic in the
    // constraints, so a resumed run regenerates the identical prefix list.
    std::vector<std::vector<Point4>> prefixes;
    {
        detail::EngineVisitor vis;
        vis.cons = &cons;
        vis.shared = &shared;
        vis.minimizing = minimize;
        vis.prefix_depth = cons.split_depth;
        vis.prefixes = &prefixes;
        detail::DfsState st = detail::fresh_state(cons);
        detail::arc_dfs(cons, fit, st, vis);
    }
    if (resumed && ckpt.finished.size() != prefixes.size())
        throw Error(Fault::BadInput, "checkpoint prefix table does not match");
    if (!resumed) ckpt.finished.assign(prefixes.size(), 0);

    // Phase 2: workers take unfinished subtrees.
    std::atomic<std::size_t> next{0};
    std::mutex done_mu;
    auto worker = [&]() {
        detail::EngineVisitor vis;
        vis.cons = &cons;
        vis.shared = &shared;
        vis.minimizing = minimize;
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= prefixes.size()) return;
            if (ckpt.finished[i]) continue;
            if (shared.stop.load(std::memory_order_relaxed)) return;
            detail::DfsState st = detail::state_from_path(cons, prefixes[i]);
            detail::arc_dfs(cons, fit, st, vis);
            if (!shared.stop.load(std::memory_order_relaxed)) {
                std::lock_guard<std::mutex> lock(done_mu);
                ckpt.finished[i] = 1;
            }
        }
    };
    {
        std::vector<std::thread> pool;
        const int threads = std::max(1, std::min<int>(cons.jobs, int(prefixes.size()) + 1));
        pool.reserve(std::size_t(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    CertificateReport report;
    report.constraints = cons;
    report.completed = !shared.expired;
    report.cycles_enumerated = shared.classes.size();
    report.knotted_found = shared.knotted;
    std::sort(report.knotted_found.begin(), report.knotted_found.end(),
              [](const KnottedCycle& a, const KnottedCycle& b) {
                  if (a.reduced_area != b.reduced_area) return a.reduced_area < b.reduced_area;
                  return detail::lex_less(a.knot.vertices, b.knot.vertices);
              });
    if (!report.knotted_found.empty())
        report.min_reduced_area = report.knotted_found.front().reduced_area;
    report.assumptions = {
        "knottedness screen: a cycle counts as knotted iff its diagram determinant is != 1; "
        "at these lengths the unknot is the only determinant-1 type that can occur",
        "plane closure: cycles are ranked by their arcs; each arc is closed with a minimal "
        "plane return, which cannot change the knot type",
        "footprint and height caps bound the census; the certificate speaks only for the "
        "constrained region"};
    report.wall_seconds =
        prior_elapsed + std::chrono::duration<double>(clock::now() - t0).count();

    if (!report.completed && !cons.checkpoint_path.empty()) {
        ckpt.fingerprint = detail::constraints_fingerprint(cons);
        ckpt.classes_count = shared.classes.size();
        ckpt.class_hashes.assign(shared.classes.begin(), shared.classes.end());
        ckpt.knotted = shared.knotted;
        ckpt.elapsed = report.wall_seconds;
        ckpt.save(cons.checkpoint_path);
    }
    return report;
}

// Census of the constrained region with the determinant screen.
inline CertificateReport certify_lower_bound(const SearchConstraints& cons) {
    return run_search(cons, /*minimize=*/false);
}

struct MinSpunResult {
    KnottedCycle best;
    LatticeArc arc;           // denominator-1 arc of the best cycle
    Rational cspin_area;      // 8 * zsum
    std::int64_t rcspin_area; // 8 * zsum - 4n + 6
    SpunSurface cspin;
    SpunSurface rcspin;
    CertificateReport report;
};

// Finds a knotted cycle minimizing the reduced spun area within the
// constraints and builds both spun surfaces for it.
inline MinSpunResult find_min_spun(SearchConstraints cons) {
    cons.require_knotted = true;
    CertificateReport report = run_search(cons, /*minimize=*/true);
    if (report.knotted_found.empty())
        throw Error(Fault::NotFound, "no knotted cycle within the constraints");

    MinSpunResult result;
    result.best = report.knotted_found.front();  // sorted: minimal, then lexicographic
    result.report = std::move(report);
    result.arc = arc_from_knot(result.best.knot);
    result.cspin_area = area_formula(result.arc);
    result.rcspin_area = upper_bound_formula(result.arc);
    result.cspin = build_cspin(result.arc);
    result.rcspin = build_rcspin(reduce_arc(result.arc));
    return result;
}

}  // namespace gridknot
