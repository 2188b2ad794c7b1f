#ifndef ORIWHEEL_PATTERN_HPP
#define ORIWHEEL_PATTERN_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <vector>

#include "oriwheel/cell.hpp"
#include "oriwheel/errors.hpp"
#include "oriwheel/geometry.hpp"

namespace oriwheel {

enum class CreaseKind { Mountain, Valley, Border };

// S1/S2: the long facets on the l_u side, S3/S4: the short facets on the
// l_t side, S5/S6: the hub plates backing the left/right side borders.
enum class FacetRole { S1, S2, S3, S4, S5, S6 };

inline const char* to_string(CreaseKind k) {
    switch (k) {
        case CreaseKind::Mountain: return "mountain";
        case CreaseKind::Valley: return "valley";
        default: return "border";
    }
}

inline const char* to_string(FacetRole r) {
    switch (r) {
        case FacetRole::S1: return "S1";
        case FacetRole::S2: return "S2";
        case FacetRole::S3: return "S3";
        case FacetRole::S4: return "S4";
        case FacetRole::S5: return "S5";
        default: return "S6";
    }
}

struct CreasePattern {
    struct Edge {
        int v0, v1;
        CreaseKind kind;
        bool overlay = false; // outline of a glued-on plate
    };
    struct Facet {
        std::vector<int> verts; // CCW in the pattern plane
        FacetRole role;
        int cell_col = 0; // width-wise cell index
        int cell_row = 0; // circumferential cell index
        bool overlay = false; // glued-on plate, not part of the folding sheet
    };

    std::vector<Vec2> vertices; // mm
    std::vector<Edge> edges;
    std::vector<Facet> facets;
    std::vector<int> interior_vertices; // the crease-bearing (Miura) vertices

    Vec2 bbox_min() const {
        Vec2 lo{1e300, 1e300};
        for (const auto& v : vertices) {
            lo.x = std::min(lo.x, v.x);
            lo.y = std::min(lo.y, v.y);
        }
        return lo;
    }
    Vec2 bbox_max() const {
        Vec2 hi{-1e300, -1e300};
        for (const auto& v : vertices) {
            hi.x = std::max(hi.x, v.x);
            hi.y = std::max(hi.y, v.y);
        }
        return hi;
    }

    int count_edges(CreaseKind k) const {
        int n = 0;
        for (const auto& e : edges)
            if (e.kind == k) ++n;
        return n;
    }
};

namespace detail {

/// Shared builder for a n_width x n_circ grid of cells, plus hub plates
/// overlaid on the outermost side borders.
inline CreasePattern build_grid(const CellParams& cell, int n_width, int n_circ) {
    cell.validate();
    CreasePattern p;
    const double a = cell.length();
    const double b = cell.b;
    const double rise = b * std::tan(cell.beta); // diagonal rise toward the upper margin
    const double plate_w = 0.5 * b;

    // Vertex index maps keyed by lattice coordinates.
    std::map<std::pair<int, int>, int> corner, margin_center, dpoint, tvert;
    auto add_vertex = [&](double x, double y) {
        p.vertices.push_back({x, y});
        return static_cast<int>(p.vertices.size()) - 1;
    };
    for (int i = 0; i <= n_width; ++i)
        for (int j = 0; j <= n_circ; ++j)
            corner[{i, j}] = add_vertex(2.0 * b * i, a * j);
    for (int i = 0; i < n_width; ++i)
        for (int j = 0; j <= n_circ; ++j)
            margin_center[{i, j}] = add_vertex(2.0 * b * i + b, a * j);
    for (int i = 0; i <= n_width; ++i)
        for (int j = 0; j < n_circ; ++j)
            dpoint[{i, j}] = add_vertex(2.0 * b * i, a * j + cell.l_u + rise);
    for (int i = 0; i < n_width; ++i)
        for (int j = 0; j < n_circ; ++j)
            tvert[{i, j}] = add_vertex(2.0 * b * i + b, a * j + cell.l_u);

    auto edge = [&](int v0, int v1, CreaseKind k, bool overlay = false) {
        p.edges.push_back({v0, v1, k, overlay});
    };

    // Cell creases: one mountain (T to upper margin) and three valleys.
    for (int i = 0; i < n_width; ++i) {
        for (int j = 0; j < n_circ; ++j) {
            int t = tvert[{i, j}];
            edge(t, margin_center[{i, j + 1}], CreaseKind::Mountain);
            edge(t, margin_center[{i, j}], CreaseKind::Valley);
            edge(t, dpoint[{i + 1, j}], CreaseKind::Valley);
            edge(t, dpoint[{i, j}], CreaseKind::Valley);
            p.interior_vertices.push_back(t);
        }
    }
    // Margins (facet boundaries, not folded creases).
    for (int i = 0; i < n_width; ++i) {
        for (int j = 0; j <= n_circ; ++j) {
            edge(corner[{i, j}], margin_center[{i, j}], CreaseKind::Border);
            edge(margin_center[{i, j}], corner[{i + 1, j}], CreaseKind::Border);
        }
    }
    // Side borders, split at the diagonal endpoints.
    for (int i = 0; i <= n_width; ++i) {
        for (int j = 0; j < n_circ; ++j) {
            edge(corner[{i, j}], dpoint[{i, j}], CreaseKind::Border);
            edge(dpoint[{i, j}], corner[{i, j + 1}], CreaseKind::Border);
        }
    }

    auto facet = [&](std::vector<int> vs, FacetRole r, int ci, int cj, bool overlay = false) {
        p.facets.push_back({std::move(vs), r, ci, cj, overlay});
    };
    for (int i = 0; i < n_width; ++i) {
        for (int j = 0; j < n_circ; ++j) {
            int t = tvert[{i, j}];
            int mlo = margin_center[{i, j}], mup = margin_center[{i, j + 1}];
            int dl = dpoint[{i, j}], dr = dpoint[{i + 1, j}];
            int ll = corner[{i, j}], lr = corner[{i + 1, j}];
            int ul = corner[{i, j + 1}], ur = corner[{i + 1, j + 1}];
            facet({t, mlo, lr, dr}, FacetRole::S1, i, j);
            facet({t, dl, ll, mlo}, FacetRole::S2, i, j);
            facet({t, dr, ur, mup}, FacetRole::S3, i, j);
            facet({t, mup, ul, dl}, FacetRole::S4, i, j);
        }
    }

    // Hub plates: rectangles glued over the sheet along the outer side
    // borders, one pair per outermost cell. Their outlines are overlay
    // geometry and take no part in the fold.
    for (int j = 0; j < n_circ; ++j) {
        double y0 = a * j, y1 = a * (j + 1);
        int a0 = add_vertex(0.0, y0), a1 = add_vertex(plate_w, y0);
        int a2 = add_vertex(plate_w, y1), a3 = add_vertex(0.0, y1);
        edge(a0, a1, CreaseKind::Border, true);
        edge(a1, a2, CreaseKind::Border, true);
        edge(a2, a3, CreaseKind::Border, true);
        edge(a3, a0, CreaseKind::Border, true);
        facet({a0, a1, a2, a3}, FacetRole::S5, 0, j, true);

        double xr = 2.0 * b * n_width;
        int b0 = add_vertex(xr - plate_w, y0), b1 = add_vertex(xr, y0);
        int b2 = add_vertex(xr, y1), b3 = add_vertex(xr - plate_w, y1);
        edge(b0, b1, CreaseKind::Border, true);
        edge(b1, b2, CreaseKind::Border, true);
        edge(b2, b3, CreaseKind::Border, true);
        edge(b3, b0, CreaseKind::Border, true);
        facet({b0, b1, b2, b3}, FacetRole::S6, n_width - 1, j, true);
    }
    return p;
}

} // namespace detail

/// One-cell pattern: facets S1..S4 around the interior vertex T plus the
/// S5/S6 hub plates. Bounding box is exactly (2b) x (l_t + l_u).
inline CreasePattern build_unit_cell(const CellParams& cell) {
    return detail::build_grid(cell, 1, 1);
}

/// n_width x n_circ tiling with shared edges deduplicated.
inline CreasePattern tile_pattern(const WheelConfig& config) {
    config.validate();
    return detail::build_grid(config.cell, config.n_width, config.n_circ);
}

// --- validation helpers -----------------------------------------------------

/// Incident crease edges (mountain/valley only) at a vertex.
inline std::vector<CreasePattern::Edge> creases_at(const CreasePattern& p, int v) {
    std::vector<CreasePattern::Edge> out;
    for (const auto& e : p.edges)
        if (e.kind != CreaseKind::Border && (e.v0 == v || e.v1 == v)) out.push_back(e);
    return out;
}

/// Maekawa: |#mountain - #valley| == 2 at an interior vertex.
inline bool maekawa_ok(const CreasePattern& p, int v) {
    int m = 0, va = 0;
    for (const auto& e : creases_at(p, v))
        (e.kind == CreaseKind::Mountain ? m : va)++;
    return std::abs(m - va) == 2;
}

/// Kawasaki: alternating sector angles around an interior vertex sum to pi.
inline bool kawasaki_ok(const CreasePattern& p, int v, double tol = 1e-12) {
    auto cs = creases_at(p, v);
    if (cs.size() != 4) return false;
    std::vector<double> ang;
    for (const auto& e : cs) {
        int w = (e.v0 == v) ? e.v1 : e.v0;
        Vec2 d = p.vertices[w] - p.vertices[v];
        ang.push_back(std::atan2(d.y, d.x));
    }
    std::sort(ang.begin(), ang.end());
    double odd = 0.0, even = 0.0;
    for (int k = 0; k < 4; ++k) {
        double next = (k == 3) ? ang[0] + 2.0 * kPi : ang[k + 1];
        ((k % 2 == 0) ? even : odd) += next - ang[k];
    }
    return std::abs(even - kPi) <= tol && std::abs(odd - kPi) <= tol;
}

/// Flat developability: facet corner angles around the vertex sum to 2*pi.
inline bool developable_ok(const CreasePattern& p, int v, double tol = 1e-12) {
    double sum = 0.0;
    for (const auto& f : p.facets) {
        if (f.overlay) continue;
        int n = static_cast<int>(f.verts.size());
        for (int k = 0; k < n; ++k) {
            if (f.verts[k] != v) continue;
            Vec2 prev = p.vertices[f.verts[(k + n - 1) % n]] - p.vertices[v];
            Vec2 next = p.vertices[f.verts[(k + 1) % n]] - p.vertices[v];
            sum += std::abs(signed_angle(next, prev));
        }
    }
    return std::abs(sum - 2.0 * kPi) <= tol;
}

/// Mountain/valley census of one cell's own creases (the four at its T).
inline std::pair<int, int> cell_crease_census(const CreasePattern& p, int t_vertex) {
    int m = 0, v = 0;
    for (const auto& e : creases_at(p, t_vertex))
        (e.kind == CreaseKind::Mountain ? m : v)++;
    return {m, v};
}

/// True if any two sheet edges properly cross (interior intersection).
/// Overlay plate outlines are not part of the folding sheet and are skipped.
inline bool edges_cross(const CreasePattern& p) {
    auto proper = [&](const CreasePattern::Edge& a, const CreasePattern::Edge& b) {
        if (a.v0 == b.v0 || a.v0 == b.v1 || a.v1 == b.v0 || a.v1 == b.v1) return false;
        Vec2 p1 = p.vertices[a.v0], p2 = p.vertices[a.v1];
        Vec2 q1 = p.vertices[b.v0], q2 = p.vertices[b.v1];
        auto orient = [](const Vec2& o, const Vec2& u, const Vec2& w) {
            return (u - o).cross(w - o);
        };
        double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
        double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
        return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
    };
    for (size_t i = 0; i < p.edges.size(); ++i) {
        if (p.edges[i].overlay) continue;
        for (size_t j = i + 1; j < p.edges.size(); ++j) {
            if (p.edges[j].overlay) continue;
            if (proper(p.edges[i], p.edges[j])) return true;
        }
    }
    return false;
}

} // namespace oriwheel

#endif // ORIWHEEL_PATTERN_HPP
