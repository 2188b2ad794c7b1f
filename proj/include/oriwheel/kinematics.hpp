#ifndef ORIWHEEL_KINEMATICS_HPP
#define ORIWHEEL_KINEMATICS_HPP

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oriwheel/cell.hpp"
#include "oriwheel/errors.hpp"
#include "oriwheel/geometry.hpp"
#include "oriwheel/pattern.hpp"

namespace oriwheel {

/// One rigidly folded unit cell. theta_w is the dihedral angle along the
/// central crease (pi = flat, 0 = fully folded). The embedding places T at
/// the origin with the mirror plane x = 0; x is the wheel-axis direction.
struct FoldedCell {
    // vertex indices
    enum : int { T = 0, MUp, MLo, DR, DL, UR, UL, LR, LL, kVertexCount };

    std::array<Vec3, kVertexCount> vertices{};
    double theta_w = kPi;
    CellParams cell{};

    struct Facet {
        std::array<int, 4> v;
        FacetRole role;
    };
    /// S1/S2 are the l_u-side facets sharing the lower central crease,
    /// S3/S4 the l_t-side pair.
    static const std::array<Facet, 4>& facets() {
        static const std::array<Facet, 4> f = {{
            {{T, MLo, LR, DR}, FacetRole::S1},
            {{T, DL, LL, MLo}, FacetRole::S2},
            {{T, DR, UR, MUp}, FacetRole::S3},
            {{T, MUp, UL, DL}, FacetRole::S4},
        }};
        return f;
    }

    /// Flat-pattern positions of the same vertices (x = width direction),
    /// relative to T. Edge lengths of the embedding must match these.
    static std::array<Vec2, kVertexCount> pattern_positions(const CellParams& c) {
        double rise = c.b * std::tan(c.beta);
        return {Vec2{0, 0},          Vec2{0, c.l_t},       Vec2{0, -c.l_u},
                Vec2{c.b, rise},     Vec2{-c.b, rise},     Vec2{c.b, c.l_t},
                Vec2{-c.b, c.l_t},   Vec2{c.b, -c.l_u},    Vec2{-c.b, -c.l_u}};
    }
};

/// Rigid fold of the unit cell at dihedral theta_w in [0, pi].
///
/// The fold has a single degree of freedom. With s = sin(beta) and the
/// half-kink angle delta of the central crease polyline,
///   cos^2(delta) = 2 s^2 / (1 + s^2 + cos(theta_w) cos^2(beta)),
/// and the four crease directions follow from the sector angles at T.
inline FoldedCell fold_cell(const CellParams& cell, double theta_w) {
    cell.validate();
    if (!(theta_w >= -1e-12 && theta_w <= kPi + 1e-12))
        throw FoldInfeasible("theta_w outside [0, pi]");
    theta_w = std::clamp(theta_w, 0.0, kPi);

    const double s = std::sin(cell.beta);
    const double cb = std::cos(cell.beta);
    const double c2 = 2.0 * s * s / (1.0 + s * s + std::cos(theta_w) * cb * cb);
    const double c = std::sqrt(c2);                        // cos(delta)
    const double t = std::sqrt(std::max(0.0, 1.0 - c2));   // sin(delta)

    const Vec3 u{0.0, c, t};
    const Vec3 d{0.0, -c, t};
    const double ry = s / c;
    const double rx = std::sqrt(std::max(0.0, 1.0 - ry * ry));
    const Vec3 r{rx, ry, 0.0};

    // In-facet directions perpendicular to the creases bounding S3 and S1.
    const Vec3 p1 = (u - s * r) / cb;
    const Vec3 q1 = (r + s * d) / cb;

    const double a1 = cell.b * cb + cell.l_t * s;
    const double a2 = cell.l_t * cb - cell.b * s;

    FoldedCell out;
    out.theta_w = theta_w;
    out.cell = cell;
    auto& v = out.vertices;
    v[FoldedCell::T] = {0, 0, 0};
    v[FoldedCell::MUp] = cell.l_t * u;
    v[FoldedCell::MLo] = cell.l_u * d;
    v[FoldedCell::DR] = (cell.b / cb) * r;
    v[FoldedCell::UR] = a1 * r + a2 * p1;
    v[FoldedCell::LR] = cell.l_u * d + cell.b * q1;
    v[FoldedCell::DL] = mirror_x(v[FoldedCell::DR]);
    v[FoldedCell::UL] = mirror_x(v[FoldedCell::UR]);
    v[FoldedCell::LL] = mirror_x(v[FoldedCell::LR]);
    return out;
}

/// The closed wheel: n_circ x n_width folded cells placed around the axle.
/// The axle is the x axis of the mesh frame. Adjacent width-wise columns are
/// mirror images; ring-wise cells are rotated by the per-cell step angle
/// (magnitude gamma). closure_residual measures the interface gap between
/// the last and first cells; it vanishes only at the closure fold angle.
struct WheelMesh {
    struct Facet {
        std::array<int, 4> v;
        FacetRole role;
        int col = 0;    // width-wise cell index
        int ring_k = 0; // circumferential cell index
    };

    std::vector<Vec3> vertices;
    std::vector<Facet> facets;
    Vec3 axis{1, 0, 0};
    double theta1 = kPi;
    double closure_residual = 0.0;
    double step_angle = 0.0; // signed per-cell rotation about the axis
    WheelConfig config{};

    double cell_axial_extent = 0.0; // one column's width along the axis
};

namespace detail {

/// Signed per-cell placement rotation of the bottom->top interface isometry,
/// measured from the folded geometry alone.
inline double placement_rotation(const FoldedCell& fc) {
    auto yz = [](const Vec3& p) { return Vec2{p.y, p.z}; };
    Vec2 v1 = yz(fc.vertices[FoldedCell::LR]) - yz(fc.vertices[FoldedCell::MLo]);
    Vec2 v2 = yz(fc.vertices[FoldedCell::UR]) - yz(fc.vertices[FoldedCell::MUp]);
    return signed_angle(v1, v2);
}

/// Axle position in the cell's local yz plane: the circumcenter of the
/// margin chord M_lo -> M_up subtending the per-cell angle gamma, taken on
/// the side closer to T (the groove bottom is the innermost point).
inline Vec2 axle_center(const FoldedCell& fc, double gamma) {
    Vec2 mlo{fc.vertices[FoldedCell::MLo].y, fc.vertices[FoldedCell::MLo].z};
    Vec2 mup{fc.vertices[FoldedCell::MUp].y, fc.vertices[FoldedCell::MUp].z};
    Vec2 chord = mup - mlo;
    double half = 0.5 * chord.norm();
    double radius = half / std::sin(0.5 * gamma);
    double q = std::sqrt(std::max(0.0, radius * radius - half * half));
    Vec2 mid = (mlo + mup) * 0.5;
    Vec2 dir{chord.x / (2.0 * half), chord.y / (2.0 * half)};
    Vec2 perp{-dir.y, dir.x};
    Vec2 ca = mid + q * perp, cb = mid - q * perp;
    double da = ca.norm(), db = cb.norm(); // distance to T (origin)
    if (std::abs(da - db) < 1e-9 * fc.cell.length()) return (ca.y < cb.y) ? ca : cb;
    return (da < db) ? ca : cb;
}

} // namespace detail

inline WheelMesh assemble_ring(const WheelConfig& config, double theta1) {
    config.validate();
    const FoldedCell fc = fold_cell(config.cell, theta1);
    const int n = config.n_circ;
    const int m = config.n_width;
    const double gamma = config.gamma();

    const Vec2 c0 = detail::axle_center(fc, gamma);
    // Winding sense: the signed angle of the margin chord about the axle.
    Vec2 alo = Vec2{fc.vertices[FoldedCell::MLo].y, fc.vertices[FoldedCell::MLo].z} - c0;
    Vec2 aup = Vec2{fc.vertices[FoldedCell::MUp].y, fc.vertices[FoldedCell::MUp].z} - c0;
    double step = signed_angle(alo, aup); // +-gamma by construction

    const double w0 = 2.0 * fc.vertices[FoldedCell::DR].x; // column axial extent
    const double W = m * w0;

    // Cell-local -> wheel frame at ring index k, column i (odd columns mirrored).
    auto place = [&](const Vec3& p, int i, int k) {
        double x = -0.5 * W + i * w0 + 0.5 * w0 + ((i % 2 == 0) ? p.x : -p.x);
        Vec3 q{x, p.y - c0.x, p.z - c0.y};
        return rotate_x(q, step * k);
    };

    WheelMesh mesh;
    mesh.theta1 = theta1;
    mesh.config = config;
    mesh.step_angle = step;
    mesh.cell_axial_extent = w0;

    auto add = [&](const Vec3& p) {
        mesh.vertices.push_back(p);
        return static_cast<int>(mesh.vertices.size()) - 1;
    };

    // Canonical shared vertices. Ring-shared points are owned by the cell
    // below (its bottom interface); column-shared points coincide exactly by
    // the mirror construction.
    std::vector<int> tv(m * n), mv(m * n), dv((m + 1) * n), cv((m + 1) * n);
    auto idm = [&](int i, int k) { return i * n + k; };
    const auto& V = fc.vertices;
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < n; ++k) {
            tv[idm(i, k)] = add(place(V[FoldedCell::T], i, k));
            mv[idm(i, k)] = add(place(V[FoldedCell::MLo], i, k));
        }
    }
    for (int bi = 0; bi <= m; ++bi) {
        for (int k = 0; k < n; ++k) {
            // Owner column for a boundary: the column whose local point sits
            // on that boundary. Interior boundaries coincide from both sides.
            int i = (bi < m) ? bi : m - 1;
            const Vec3& dloc = (bi < m) ? V[FoldedCell::DL] : V[FoldedCell::DR];
            const Vec3& cloc = (bi < m) ? V[FoldedCell::LL] : V[FoldedCell::LR];
            dv[bi * n + k] = add(place(dloc, i, k));
            cv[bi * n + k] = add(place(cloc, i, k));
        }
    }

    auto quad = [&](int a, int b, int c, int d, FacetRole role, int i, int k) {
        WheelMesh::Facet f{{a, b, c, d}, role, i, k};
        if (i % 2 == 1) std::swap(f.v[1], f.v[3]); // keep consistent winding
        mesh.facets.push_back(f);
    };
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < n; ++k) {
            int kn = (k + 1) % n;
            int t = tv[idm(i, k)];
            int mlo = mv[idm(i, k)], mup = mv[idm(i, kn)];
            int dl = dv[i * n + k], dr = dv[(i + 1) * n + k];
            int ll = cv[i * n + k], lr = cv[(i + 1) * n + k];
            int ul = cv[i * n + kn], ur = cv[(i + 1) * n + kn];
            quad(t, mlo, lr, dr, FacetRole::S1, i, k);
            quad(t, dl, ll, mlo, FacetRole::S2, i, k);
            quad(t, dr, ur, mup, FacetRole::S3, i, k);
            quad(t, mup, ul, dl, FacetRole::S4, i, k);
        }
    }

    // Interface gap between the last cell's top margin and the first cell's
    // bottom margin (equal at every interface by symmetry).
    double res = 0.0;
    const int last = n - 1;
    res = std::max(res, dist(place(V[FoldedCell::MUp], 0, last), place(V[FoldedCell::MLo], 0, 0)));
    res = std::max(res, dist(place(V[FoldedCell::UL], 0, last), place(V[FoldedCell::LL], 0, 0)));
    res = std::max(res, dist(place(V[FoldedCell::UR], 0, last), place(V[FoldedCell::LR], 0, 0)));
    mesh.closure_residual = res;
    return mesh;
}

/// Axial extent of the folded wheel (its width), mm.
inline double measure_width(const WheelMesh& mesh) {
    double lo = 1e300, hi = -1e300;
    for (const auto& v : mesh.vertices) {
        lo = std::min(lo, v.x);
        hi = std::max(hi, v.x);
    }
    return hi - lo;
}

/// (outer, inner) radii: max and min vertex distance from the axle.
inline std::pair<double, double> measure_radius(const WheelMesh& mesh) {
    double ro = 0.0, ri = 1e300;
    for (const auto& v : mesh.vertices) {
        double r = std::hypot(v.y, v.z);
        ro = std::max(ro, r);
        ri = std::min(ri, r);
    }
    return {ro, ri};
}

/// Fold angle at which the ring closes, found by a bracketed bisection on
/// the per-cell placement rotation measured from the folded geometry. This
/// route never evaluates the closed-form closure expression; it is the
/// geometric oracle that the closed form is checked against.
inline double solve_closure(const WheelConfig& config, double tol_scale = 1e-9,
                            int max_iter = 200) {
    config.validate();
    const double gamma = config.gamma();
    const double a = config.cell.length();
    // Below pi by enough that cos(theta) is distinguishable from -1; the
    // placement rotation is degenerate at the exactly flat state.
    const double hi_cap = kPi - 1e-5;

    auto defect = [&](double th) {
        FoldedCell fc = fold_cell(config.cell, th);
        return std::abs(detail::placement_rotation(fc)) - gamma;
    };
    auto residual = [&](double th) { return assemble_ring(config, th).closure_residual; };

    double lo = config.theta_lo;
    double hi = std::min(config.theta_hi, hi_cap);
    double flo = defect(lo), fhi = defect(hi);
    const double tol = tol_scale * a;

    if (flo > 0.0 || fhi < 0.0) {
        // No sign change: closure may still sit at an endpoint of the range.
        double th = (flo > 0.0) ? lo : hi;
        if (residual(th) <= tol) return th;
        throw NoClosure("ring closure not reachable within theta range");
    }
    for (int it = 0; it < max_iter; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = defect(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-15) break;
    }
    double theta = 0.5 * (lo + hi);
    if (residual(theta) > tol)
        throw NoClosure("closure residual above tolerance after root-find");
    return theta;
}

/// Wavefront OBJ export; facets are triangulated.
inline void export_mesh(const WheelMesh& mesh, const std::string& path) {
    if (path.empty()) throw IoError("empty OBJ output path");
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f.precision(9);
    f << std::fixed;
    f << "# origami wheel mesh, units mm\n";
    f << "# vertices " << mesh.vertices.size() << " quads " << mesh.facets.size() << "\n";
    for (const auto& v : mesh.vertices) f << "v " << v.x << " " << v.y << " " << v.z << "\n";
    for (const auto& fc : mesh.facets) {
        f << "f " << fc.v[0] + 1 << " " << fc.v[1] + 1 << " " << fc.v[2] + 1 << "\n";
        f << "f " << fc.v[0] + 1 << " " << fc.v[2] + 1 << " " << fc.v[3] + 1 << "\n";
    }
    if (!f) throw IoError("write failed: " + path);
}

struct ObjData {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> tris;
};

inline ObjData import_obj(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open for reading: " + path);
    ObjData out;
    std::string line;
    while (std::getline(f, line)) {
        std::istringstream is(line);
        std::string tag;
        is >> tag;
        if (tag == "v") {
            Vec3 v;
            is >> v.x >> v.y >> v.z;
            out.vertices.push_back(v);
        } else if (tag == "f") {
            std::array<int, 3> t{};
            is >> t[0] >> t[1] >> t[2];
            for (auto& i : t) --i;
            out.tris.push_back(t);
        }
    }
    return out;
}

} // namespace oriwheel

#endif // ORIWHEEL_KINEMATICS_HPP
