#ifndef ORIWHEEL_TERRA_HPP
#define ORIWHEEL_TERRA_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "oriwheel/errors.hpp"
#include "oriwheel/geometry.hpp"
#include "oriwheel/kinematics.hpp"

namespace oriwheel {
namespace terra {

/// Bekker-style pressure-sinkage soil with Coulomb friction.
/// Pressure p = k_sink * depth^n_exp (N/mm^2 with depth in mm).
struct TerrainParams {
    double k_sink = 4.0e-4; // N/mm^(2+n_exp)
    double n_exp = 1.0;
    double mu = 0.2;
    double slope = 0.0; // rad, incline of the travel direction
    double g = 9810.0;  // mm/s^2

    void validate() const {
        if (!(k_sink > 0.0)) throw InvalidParams("k_sink must be positive");
        if (!(n_exp > 0.0)) throw InvalidParams("n_exp must be positive");
        if (!(mu >= 0.0)) throw InvalidParams("mu must be >= 0");
        if (!(std::abs(slope) < kPi / 2.0)) throw InvalidParams("|slope| must be < pi/2");
        if (!(g > 0.0)) throw InvalidParams("g must be positive");
    }

    TerrainParams with_slope(double s) const {
        TerrainParams t = *this;
        t.slope = s;
        return t;
    }

    /// Soil constants fitted against the reference wheel behaviors
    /// (see calibrate and the calibration test).
    static TerrainParams calibrated_default();
};

// 1 N = 1e6 g*mm/s^2.
constexpr double kNewtonToGramMm = 1e6;

/// Weight of a mass in N under the default gravity.
inline double weight_newton(double mass_g, double g = 9810.0) {
    return mass_g * g / kNewtonToGramMm;
}

/// One contact plate of the discretized wheel, in the wheel frame
/// (axle along x through the origin).
struct Plate {
    Vec3 centroid;
    Vec3 normal; // unit, oriented toward the sheet's sand-facing side
    double area;
    FacetRole role;
    int col = 0;
    int ring_k = 0;
};

namespace detail {

inline void subdivide(const Vec3& a, const Vec3& b, const Vec3& c, double resolution, int depth,
                      const WheelMesh::Facet& src, std::vector<Plate>& out) {
    double longest = std::max({dist(a, b), dist(b, c), dist(c, a)});
    if (longest > resolution && depth < 8) {
        Vec3 ab = (a + b) / 2.0, bc = (b + c) / 2.0, ca = (c + a) / 2.0;
        subdivide(a, ab, ca, resolution, depth + 1, src, out);
        subdivide(ab, b, bc, resolution, depth + 1, src, out);
        subdivide(ca, bc, c, resolution, depth + 1, src, out);
        subdivide(ab, bc, ca, resolution, depth + 1, src, out);
        return;
    }
    Vec3 n = (b - a).cross(c - a);
    double n2 = n.norm();
    if (n2 <= 0.0) return;
    out.push_back({(a + b + c) / 3.0, n / n2, 0.5 * n2, src.role, src.col, src.ring_k});
}

} // namespace detail

/// Triangulates the mesh facets into contact plates with area, centroid and
/// an outward unit normal. Each quad is fanned around its centroid (which
/// keeps mirror-symmetric meshes exactly symmetric) and subdivided until no
/// edge exceeds `resolution`. Normals follow the facet winding; the global
/// sign is fixed so that the area-weighted radial component is outward.
inline std::vector<Plate> discretize_wheel(const WheelMesh& mesh, double resolution) {
    if (!(resolution > 0.0)) throw InvalidParams("resolution must be positive");
    std::vector<Plate> plates;
    for (const auto& f : mesh.facets) {
        const Vec3& a = mesh.vertices[f.v[0]];
        const Vec3& b = mesh.vertices[f.v[1]];
        const Vec3& c = mesh.vertices[f.v[2]];
        const Vec3& d = mesh.vertices[f.v[3]];
        Vec3 center = (a + b + c + d) / 4.0;
        detail::subdivide(a, b, center, resolution, 0, f, plates);
        detail::subdivide(b, c, center, resolution, 0, f, plates);
        detail::subdivide(c, d, center, resolution, 0, f, plates);
        detail::subdivide(d, a, center, resolution, 0, f, plates);
    }
    double radial = 0.0;
    for (const auto& p : plates) {
        Vec3 r{0.0, p.centroid.y, p.centroid.z};
        radial += p.normal.dot(r) * p.area;
    }
    if (radial < 0.0)
        for (auto& p : plates) p.normal = -p.normal;
    return plates;
}

/// Wheel state in the surface frame: y is travel along the surface, z is the
/// surface normal (sand occupies z < 0), the axle is parallel to x.
struct Pose {
    double spin = 0.0;   // rad, wheel rotation about the axle
    double z_axle = 0.0; // mm, axle height above the sand surface
};

struct Velocity {
    double vy = 0.0;    // mm/s along the surface
    double vz = 0.0;    // mm/s normal
    double omega = 0.0; // rad/s
};

struct SoilForces {
    Vec3 force{};        // N, on the wheel (x component cancels by symmetry)
    double torque = 0.0; // N*mm about the axle
    double contact_area = 0.0;
    int engaged = 0;
};

/// Plate-sum soil reaction. A plate is engaged when its centroid is below
/// the surface and it presses into (or rests against) the sand, i.e. the
/// relative velocity along its sand-facing normal is non-negative (up to a
/// small static tolerance); retreating plates are free, which is what makes the
/// contact dissipative and the digging/pushing directions inequivalent.
/// Positive omega rolls the wheel toward +y.
inline SoilForces plate_forces(const std::vector<Plate>& plates, const Pose& pose,
                               const Velocity& vel, const TerrainParams& terrain) {
    SoilForces out;
    const double cs = std::cos(pose.spin), sn = std::sin(pose.spin);
    for (const auto& p : plates) {
        // rotate about the axle, then lift to axle height
        double ry = cs * p.centroid.y - sn * p.centroid.z;
        double rz = sn * p.centroid.y + cs * p.centroid.z;
        double depth = -(pose.z_axle + rz);
        if (depth <= 0.0) continue;
        Vec3 n{p.normal.x, cs * p.normal.y - sn * p.normal.z, sn * p.normal.y + cs * p.normal.z};
        Vec3 v{0.0, vel.vy + vel.omega * rz, vel.vz - vel.omega * ry};
        double vn = v.dot(n);
        if (vn < -1e-9 * (1.0 + v.norm())) continue;
        double pressure = terrain.k_sink * std::pow(depth, terrain.n_exp);
        Vec3 f = (-pressure * p.area) * n;
        double vt2 = v.dot(v) - vn * vn;
        if (vt2 > 1e-18) {
            Vec3 vt = v - vn * n;
            f += (-terrain.mu * pressure * p.area / std::sqrt(vt2)) * vt;
        }
        out.force += f;
        out.torque += ry * f.z - rz * f.y;
        out.contact_area += p.area;
        ++out.engaged;
    }
    return out;
}

enum class Mode { SandPushing, SandDigging };

inline const char* to_string(Mode m) {
    return m == Mode::SandPushing ? "SandPushing" : "SandDigging";
}

/// A wheel, its share of the robot load, and the prescribed spin rate.
/// omega > 0 drives travel toward +y with the pushing mechanism; omega < 0
/// is the digging direction.
struct WheelLoadCase {
    std::vector<Plate> plates;
    double r_outer;  // mm
    double load;     // N, vertical per-wheel load
    double omega;    // rad/s
    double mass;     // g, per-wheel share

    void validate() const {
        if (plates.empty()) throw InvalidParams("empty plate set");
        if (!(load > 0.0)) throw InvalidParams("load must be positive");
        if (!(mass > 0.0)) throw InvalidParams("mass must be positive");
        if (!(r_outer > 0.0)) throw InvalidParams("r_outer must be positive");
    }
};

inline WheelLoadCase make_load_case(const WheelMesh& mesh, double load_N, double omega,
                                    double mass_g, double resolution = 10.0) {
    WheelLoadCase c{discretize_wheel(mesh, resolution), measure_radius(mesh).first, load_N, omega,
                    mass_g};
    c.validate();
    return c;
}

struct Sample {
    double t;      // s
    double x;      // mm, travel
    double z;      // mm, sinkage depth of the lowest point (>= 0)
    double vx;     // mm/s
    double vz;     // mm/s
    double thrust; // N, soil force along travel
    double normal; // N, soil force along the surface normal
};

struct Trajectory {
    std::vector<Sample> samples;
    double dt = 1e-3;
    Mode mode = Mode::SandPushing;
    bool diverged = false;

    const Sample& back() const { return samples.back(); }
};

/// Semi-implicit time stepping of (x, z, vx, vz) under the projected load,
/// plate-sum soil forces and prescribed spin. z0_sinkage sets the initial
/// burial depth of the lowest point. Deterministic.
inline Trajectory simulate(const WheelLoadCase& cse, const TerrainParams& terrain,
                           double duration, double dt, double z0_sinkage = 0.0,
                           const std::function<bool(const Sample&)>& stop = {}) {
    cse.validate();
    terrain.validate();
    if (!(dt > 0.0) || dt > 2e-3 + 1e-15) throw InvalidParams("dt must be in (0, 2e-3] s");
    if (!(duration > 0.0)) throw InvalidParams("duration must be positive");

    Trajectory traj;
    traj.dt = dt;
    traj.mode = cse.omega >= 0.0 ? Mode::SandPushing : Mode::SandDigging;

    const double wy = -cse.load * std::sin(terrain.slope);
    const double wz = -cse.load * std::cos(terrain.slope);
    const long steps = static_cast<long>(std::ceil(duration / dt));
    traj.samples.reserve(steps + 1);

    double x = 0.0, z_axle = cse.r_outer - z0_sinkage, vy = 0.0, vz = 0.0, spin = 0.0;
    for (long i = 0; i <= steps; ++i) {
        SoilForces sf = plate_forces(cse.plates, {spin, z_axle}, {vy, vz, cse.omega}, terrain);
        Sample s{i * dt, x, std::max(0.0, cse.r_outer - z_axle), vy, vz, sf.force.y, sf.force.z};
        if (!std::isfinite(x) || !std::isfinite(z_axle) || !std::isfinite(vy) ||
            !std::isfinite(vz)) {
            traj.diverged = true;
            break;
        }
        traj.samples.push_back(s);
        if (stop && stop(s)) break;
        double ay = (wy + sf.force.y) * kNewtonToGramMm / cse.mass;
        double az = (wz + sf.force.z) * kNewtonToGramMm / cse.mass;
        vy += ay * dt;
        vz += az * dt;
        x += vy * dt;
        z_axle += vz * dt;
        spin -= cse.omega * dt; // positive omega rolls toward +y
    }
    if (traj.samples.empty()) {
        traj.diverged = true;
        traj.samples.push_back({0, 0, z0_sinkage, 0, 0, 0, 0});
    }
    return traj;
}

struct TraverseMetrics {
    double t_pt;  // s, +inf when the wheel never escapes
    double d_pt;  // mm, travel at the probe time
    bool escaped;
};

/// Escape time from an initial burial and travel at the probe window.
/// Escape means the sinkage drops below `threshold` (default half the
/// initial burial).
inline TraverseMetrics traverse_metrics(const Trajectory& traj, double start_sink = 30.0,
                                        double window = 8.0, double threshold = -1.0) {
    if (threshold < 0.0) threshold = 0.5 * start_sink;
    if (traj.samples.empty() || traj.samples.back().t < window)
        throw InvalidParams("trajectory shorter than the probe window");

    TraverseMetrics m{std::numeric_limits<double>::infinity(), 0.0, false};
    for (size_t i = 0; i < traj.samples.size(); ++i) {
        if (traj.samples[i].z <= threshold) {
            if (i == 0) {
                m.t_pt = traj.samples[0].t;
            } else {
                const Sample& a = traj.samples[i - 1];
                const Sample& b = traj.samples[i];
                double f = (a.z - threshold) / std::max(1e-30, a.z - b.z);
                m.t_pt = a.t + f * (b.t - a.t);
            }
            m.escaped = true;
            break;
        }
    }
    for (size_t i = 1; i < traj.samples.size(); ++i) {
        if (traj.samples[i].t >= window) {
            const Sample& a = traj.samples[i - 1];
            const Sample& b = traj.samples[i];
            double f = (window - a.t) / std::max(1e-30, b.t - a.t);
            m.d_pt = a.x + f * (b.x - a.x);
            break;
        }
    }
    return m;
}

struct ClimbResult {
    bool passed;
    Trajectory trajectory;
};

/// Pass iff the wheel travels `length` mm up the slope before sinking to the
/// chassis-contact depth or running out of time.
inline ClimbResult slope_climb(const WheelLoadCase& cse, const TerrainParams& terrain,
                               double length, double time_budget = 30.0, double dt = 1e-3,
                               double chassis_depth = 30.0) {
    if (!(terrain.slope >= 0.0 && terrain.slope < kPi / 4.0))
        throw InvalidParams("slope must be in [0, pi/4)");
    bool failed_depth = false;
    auto stop = [&](const Sample& s) {
        if (s.z >= chassis_depth) {
            failed_depth = true;
            return true;
        }
        return s.x >= length;
    };
    Trajectory traj = simulate(cse, terrain, time_budget, dt, 0.0, stop);
    bool passed = !failed_depth && !traj.diverged && traj.back().x >= length;
    return {passed, std::move(traj)};
}

/// Static uplift at rest: all submerged plates bear, none slide.
inline double static_uplift(const std::vector<Plate>& plates, double z_sink, double r_outer,
                            const TerrainParams& terrain) {
    SoilForces sf = plate_forces(plates, {0.0, r_outer - z_sink}, {0.0, 0.0, 0.0}, terrain);
    return sf.force.z;
}

/// Static sinkage by bisection on the vertical force balance.
inline double static_sinkage(const std::vector<Plate>& plates, double r_outer, double load_normal,
                             const TerrainParams& terrain, double tol = 1e-9) {
    double lo = 0.0, hi = r_outer;
    if (static_uplift(plates, hi, r_outer, terrain) < load_normal) return hi;
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        (static_uplift(plates, mid, r_outer, terrain) < load_normal ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct CapacityOptions {
    double robot_mass = 1348.5; // g, unloaded robot
    int wheels = 4;
    double omega = 6.28;       // rad/s, pushing direction
    double start_sink = 30.0;  // mm
    double escape_z = 15.0;    // mm, sinkage the wheel must rise above
    double budget = 8.0;       // s
    double dt = 1e-3;
    double max_added = 3000.0; // g
    double tol = 25.0;         // g
};

/// Largest added mass (g) with which the wheel still escapes the initial
/// burial within the time budget; bisection over the added load.
inline double load_capacity(const WheelMesh& mesh, const TerrainParams& terrain,
                            const CapacityOptions& opt = {}) {
    auto escapes = [&](double added_g) {
        double share = (opt.robot_mass + added_g) / opt.wheels;
        WheelLoadCase cse = make_load_case(mesh, weight_newton(share, terrain.g), opt.omega, share);
        auto stop = [&](const Sample& s) { return s.z <= opt.escape_z; };
        Trajectory t =
            simulate(cse, terrain, opt.budget, opt.dt, opt.start_sink, stop);
        return !t.diverged && t.back().z <= opt.escape_z;
    };
    if (!escapes(0.0)) return 0.0;
    double lo = 0.0, hi = opt.max_added;
    if (escapes(hi)) return hi;
    while (hi - lo > opt.tol) {
        double mid = 0.5 * (lo + hi);
        (escapes(mid) ? lo : hi) = mid;
    }
    return lo;
}

/// Loading-carrying ratio in percent.
inline double load_ratio(double carried_g, double robot_mass_g) {
    if (!(robot_mass_g > 0.0)) throw InvalidParams("robot mass must be positive");
    return carried_g / robot_mass_g * 100.0;
}

// --- calibration -------------------------------------------------------------

struct Anchor {
    enum class Kind { StaticSinkage, SlopeOutcome, SinkageBand };
    Kind kind;
    const WheelMesh* mesh; // not owned
    double load_N;
    double omega = 6.28;
    double slope = 0.0;       // rad
    double lo = 0.0, hi = 0.0; // target interval, mm
    bool expect_pass = true;   // SlopeOutcome
    double weight = 1.0;
    double climb_length = 2000.0; // mm, SlopeOutcome course length
};

struct CalibrationReport {
    TerrainParams params;
    double score; // 0 = all anchors satisfied
    std::vector<double> anchor_scores;
};

namespace detail {

inline double anchor_score(const Anchor& a, const TerrainParams& tp) {
    switch (a.kind) {
        case Anchor::Kind::StaticSinkage: {
            auto plates = discretize_wheel(*a.mesh, 10.0);
            double r = measure_radius(*a.mesh).first;
            double z = static_sinkage(plates, r, a.load_N * std::cos(tp.slope), tp);
            if (z >= a.lo && z <= a.hi) return 0.0;
            double d = (z < a.lo) ? (a.lo - z) : (z - a.hi);
            return d * d / (a.hi * a.hi);
        }
        case Anchor::Kind::SlopeOutcome: {
            WheelLoadCase cse = make_load_case(*a.mesh, a.load_N, a.omega, 340.0);
            ClimbResult r = slope_climb(cse, tp.with_slope(a.slope), a.climb_length, 10.0, 1e-3);
            return (r.passed == a.expect_pass) ? 0.0 : 1.0;
        }
        case Anchor::Kind::SinkageBand: {
            WheelLoadCase cse = make_load_case(*a.mesh, a.load_N, a.omega, 340.0);
            Trajectory t = simulate(cse, tp.with_slope(a.slope), 6.0, 1e-3);
            if (t.diverged) return 10.0;
            double zmin = 1e300, zmax = -1e300;
            for (const auto& s : t.samples) {
                if (s.t < 1.5) continue; // transient
                zmin = std::min(zmin, s.z);
                zmax = std::max(zmax, s.z);
            }
            double pen = 0.0;
            if (zmax > a.hi) pen += (zmax - a.hi) * (zmax - a.hi) / (a.hi * a.hi);
            if (zmin < a.lo) pen += (a.lo - zmin) * (a.lo - zmin) / (a.hi * a.hi);
            return pen;
        }
    }
    return 0.0;
}

} // namespace detail

struct CalibrateOptions {
    double k_lo = 1e-6, k_hi = 1e-2; // k_sink grid bounds (log-spaced)
    int grid_k = 7;
    double mu_lo = 0.1, mu_hi = 0.7; // mu grid bounds (linear)
    int grid_mu = 4;
    int refine_rounds = 4;
    double fail_threshold = 1e-3;
};

/// Fits (k_sink, mu) on a log/linear grid with local refinement so that all
/// anchors hold. Throws CalibrationFailed when no parameter cell satisfies
/// them to within the tolerance.
inline CalibrationReport calibrate(const std::vector<Anchor>& anchors,
                                   const TerrainParams& base = {},
                                   const CalibrateOptions& opt = {}) {
    if (anchors.empty()) throw InvalidParams("anchor set must be non-empty");
    auto total = [&](double k, double mu) {
        TerrainParams tp = base;
        tp.k_sink = k;
        tp.mu = mu;
        double s = 0.0;
        for (const auto& a : anchors) s += a.weight * detail::anchor_score(a, tp);
        return s;
    };

    double best_k = base.k_sink, best_mu = base.mu;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < opt.grid_k; ++i) {
        double k = (opt.grid_k == 1)
                       ? opt.k_lo
                       : opt.k_lo * std::pow(opt.k_hi / opt.k_lo, double(i) / (opt.grid_k - 1));
        for (int j = 0; j < opt.grid_mu; ++j) {
            double mu = (opt.grid_mu == 1)
                            ? base.mu
                            : opt.mu_lo + (opt.mu_hi - opt.mu_lo) * double(j) / (opt.grid_mu - 1);
            double s = total(k, mu);
            if (s < best) {
                best = s;
                best_k = k;
                best_mu = mu;
            }
        }
    }
    double span_k = std::pow(opt.k_hi / opt.k_lo, 0.5 / std::max(1, opt.grid_k - 1));
    double span_mu = (opt.grid_mu > 1) ? 0.5 * (opt.mu_hi - opt.mu_lo) / (opt.grid_mu - 1) : 0.0;
    for (int r = 0; r < opt.refine_rounds && best > 0.0; ++r) {
        for (double fk : {1.0 / span_k, 1.0, span_k}) {
            for (double dmu : {-span_mu, 0.0, span_mu}) {
                double k = best_k * fk, mu = std::max(0.0, best_mu + dmu);
                if (fk == 1.0 && dmu == 0.0) continue;
                double s = total(k, mu);
                if (s < best) {
                    best = s;
                    best_k = k;
                    best_mu = mu;
                }
            }
        }
        span_k = std::sqrt(span_k);
        span_mu *= 0.5;
    }
    if (best > opt.fail_threshold)
        throw CalibrationFailed("no soil parameters satisfy the anchor set");

    CalibrationReport rep;
    rep.params = base;
    rep.params.k_sink = best_k;
    rep.params.mu = best_mu;
    rep.score = best;
    for (const auto& a : anchors) rep.anchor_scores.push_back(detail::anchor_score(a, rep.params));
    return rep;
}

/// Trajectory CSV (header: t_s,x_mm,z_mm,vx_mm_s,vz_mm_s,thrust_N,normal_N).
inline void export_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f.precision(10);
    f << "t_s,x_mm,z_mm,vx_mm_s,vz_mm_s,thrust_N,normal_N\n";
    for (const auto& s : traj.samples)
        f << s.t << "," << s.x << "," << s.z << "," << s.vx << "," << s.vz << "," << s.thrust
          << "," << s.normal << "\n";
    if (!f) throw IoError("write failed: " + path);
}

/// Simple faceted cylinder stand-in wheel (symmetric control body).
inline WheelMesh make_cylinder_mesh(double radius, double width, int n_seg = 48) {
    if (!(radius > 0.0) || !(width > 0.0) || n_seg < 8)
        throw InvalidParams("bad cylinder parameters");
    WheelMesh mesh;
    mesh.theta1 = kPi;
    mesh.closure_residual = 0.0;
    for (int side = 0; side < 2; ++side) {
        double x = (side == 0 ? -0.5 : 0.5) * width;
        for (int k = 0; k < n_seg; ++k) {
            double ang = (k + 0.5) * 2.0 * kPi / n_seg;
            mesh.vertices.push_back({x, radius * std::sin(ang), -radius * std::cos(ang)});
        }
    }
    for (int k = 0; k < n_seg; ++k) {
        int kn = (k + 1) % n_seg;
        mesh.facets.push_back({{k, kn, n_seg + kn, n_seg + k}, FacetRole::S1, 0, k});
    }
    return mesh;
}

/// Soil fitted so the reference wheel reproduces the qualitative sand
/// behaviors: sinkage decreasing with width, escape and travel metrics
/// ordered by width, a 17-degree slope passable only at full width with a
/// bounded 5..15 mm sinkage band. See the calibration tests.
inline TerrainParams TerrainParams::calibrated_default() {
    TerrainParams t;
    t.k_sink = 5.0e-4;
    t.n_exp = 1.0;
    t.mu = 0.2;
    return t;
}

} // namespace terra
} // namespace oriwheel

#endif // ORIWHEEL_TERRA_HPP
