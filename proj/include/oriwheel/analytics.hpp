#ifndef ORIWHEEL_ANALYTICS_HPP
#define ORIWHEEL_ANALYTICS_HPP

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "oriwheel/cell.hpp"
#include "oriwheel/errors.hpp"
#include "oriwheel/geometry.hpp"
#include "oriwheel/kinematics.hpp"

namespace oriwheel {

/// Closed-form ring-closure fold angle:
///   theta1 = 2 * arccos(1 / (tan(gamma/2) * tan(phi))),
/// gamma = 2*pi/n_circ, phi = pi/2 - beta. Throws Infeasible when the
/// arccos argument exceeds 1 (the ring cannot close for these parameters).
inline double closure_fold_angle(int n_circ, double beta) {
    if (n_circ < 3) throw InvalidParams("n_circ must be >= 3");
    if (!(beta > 0.0) || !(beta < kPi / 2.0)) throw InvalidParams("beta must be strictly acute");
    const double gamma = 2.0 * kPi / n_circ;
    const double phi = kPi / 2.0 - beta;
    const double arg = 1.0 / (std::tan(0.5 * gamma) * std::tan(phi));
    if (arg > 1.0 + 1e-12) throw Infeasible("tan(gamma/2)*tan(phi) < 1: ring cannot close");
    return 2.0 * std::acos(std::clamp(arg, -1.0, 1.0));
}

/// Domain predicate of the closure formula: tan(pi/n_circ)*tan(pi/2-beta) >= 1,
/// equivalently n_circ <= pi/beta.
inline bool feasibility(const CellParams& cell, int n_circ) {
    if (n_circ < 3) return false;
    return std::tan(kPi / n_circ) * std::tan(kPi / 2.0 - cell.beta) >= 1.0 - 1e-12;
}

/// Literal evaluation of the printed cell-count bound, n > pi/arctan((l_u-l_t)/2),
/// with lengths in mm. Dimensionally inconsistent as printed; exposed for
/// comparison output only and never used as a feasibility gate.
inline double literal_min_cell_count(const CellParams& cell) {
    return kPi / std::atan(0.5 * (cell.l_u - cell.l_t));
}

/// Axial wheel width l_b = 2 * n_width * b * sin(theta1 / 2), mm.
inline double wheel_width(int n_width, double b, double theta1) {
    if (n_width < 1) throw InvalidParams("n_width must be >= 1");
    if (!(b > 0.0)) throw InvalidParams("b must be positive");
    if (!(theta1 >= 0.0 && theta1 <= kPi + 1e-12)) throw InvalidParams("theta1 outside [0, pi]");
    return 2.0 * n_width * b * std::sin(0.5 * theta1);
}

/// Dimensionless inputs of the closed-form radius model. l_1 and l_2 are
/// auxiliary construction lengths that are not derivable from the cell
/// parameters alone, so they are taken as explicit inputs.
struct Eq4Inputs {
    double l_1; // mm
    double l_2; // mm

    void validate() const {
        if (!(l_1 > 0.0) || !(l_2 > 0.0)) throw InvalidParams("eq4 lengths must be positive");
    }
};

struct Eq4Result {
    double r_d;               // mm
    double hollow_term;       // first term (hollow-part radius analog)
    double solid_term;        // second term (solid-part radius analog)
    bool beta_flag;           // true when beta >= pi/4 (cos(2*beta) <= 0)
    bool y_flag;              // true when y >= 1 (unphysical groove)
};

/// Literal evaluation of the closed-form outer radius
///   r_d = b(l2s*sin2b + cos2b)*sqrt(x^2*l2s^2+1) / (l2s*x*sin2b + cos2b)
///       + (l_u-l_t)/2 * sqrt((1-y)^2 + cot(beta)^2)
/// with l2s = l_t/b, x = l_1/l_t, y = 2*l_2/(l_u-l_t).
inline Eq4Result wheel_radius_eq4(const CellParams& cell, const Eq4Inputs& in) {
    cell.validate();
    in.validate();
    if (!(cell.l_u > cell.l_t))
        throw InvalidParams("l_u must exceed l_t (y undefined otherwise)");

    const double lambda2 = cell.l_t / cell.b;
    const double x = in.l_1 / cell.l_t;
    const double y = 2.0 * in.l_2 / (cell.l_u - cell.l_t);
    const double s2b = std::sin(2.0 * cell.beta);
    const double c2b = std::cos(2.0 * cell.beta);

    Eq4Result r{};
    r.beta_flag = cell.beta >= kPi / 4.0;
    r.y_flag = y >= 1.0;
    r.hollow_term = cell.b * (lambda2 * s2b + c2b) * std::sqrt(x * x * lambda2 * lambda2 + 1.0) /
                    (lambda2 * x * s2b + c2b);
    const double cot = 1.0 / std::tan(cell.beta);
    r.solid_term = 0.5 * (cell.l_u - cell.l_t) * std::sqrt((1.0 - y) * (1.0 - y) + cot * cot);
    r.r_d = r.hollow_term + r.solid_term;
    return r;
}

struct AnalyticReport {
    double theta1_closure; // rad
    double gamma;          // rad
    double phi;            // rad
    double lb_min;         // mm, width at theta_lo
    double lb_max;         // mm, width at theta_hi
    double r_d;            // mm, outer radius
    bool feasible;
    double width_ratio;    // lb_max / lb_min
    double eq3_literal_n;  // comparison-only literal bound
    bool r_d_from_eq4;     // false: measured on the folded ring at closure
};

/// Aggregate evaluation: closure angle, width range over the actuation
/// interval, and the outer radius (closed form when eq4 inputs are given,
/// otherwise measured on the assembled ring at the closure angle).
inline AnalyticReport analyze(const WheelConfig& config,
                              const std::optional<Eq4Inputs>& eq4 = std::nullopt) {
    config.validate();
    AnalyticReport rep{};
    rep.gamma = config.gamma();
    rep.phi = kPi / 2.0 - config.cell.beta;
    rep.feasible = feasibility(config.cell, config.n_circ);
    rep.eq3_literal_n = literal_min_cell_count(config.cell);
    if (!rep.feasible) throw Infeasible("configuration cannot close into a ring");
    rep.theta1_closure = closure_fold_angle(config.n_circ, config.cell.beta);
    rep.lb_min = wheel_width(config.n_width, config.cell.b, config.theta_lo);
    rep.lb_max = wheel_width(config.n_width, config.cell.b, config.theta_hi);
    rep.width_ratio = rep.lb_max / rep.lb_min;
    if (eq4) {
        rep.r_d = wheel_radius_eq4(config.cell, *eq4).r_d;
        rep.r_d_from_eq4 = true;
    } else {
        WheelMesh mesh = assemble_ring(config, rep.theta1_closure);
        rep.r_d = measure_radius(mesh).first;
        rep.r_d_from_eq4 = false;
    }
    return rep;
}

/// Aligned plain-text table of the report.
inline std::string report_table(const AnalyticReport& r) {
    std::ostringstream os;
    os.precision(17);
    auto row = [&](const char* k, double v, const char* unit) {
        os << "  ";
        os << k;
        for (int i = static_cast<int>(std::string(k).size()); i < 18; ++i) os << ' ';
        os << v << " " << unit << "\n";
    };
    os << "analytic report\n";
    row("theta1_closure", r.theta1_closure, "rad");
    row("gamma", r.gamma, "rad");
    row("phi", r.phi, "rad");
    row("lb_min", r.lb_min, "mm");
    row("lb_max", r.lb_max, "mm");
    row("width_ratio", r.width_ratio, "");
    row("r_d", r.r_d, r.r_d_from_eq4 ? "mm (closed form)" : "mm (measured)");
    row("eq3_literal_n", r.eq3_literal_n, "(comparison only)");
    os << "  feasible          " << (r.feasible ? "yes" : "no") << "\n";
    return os.str();
}

} // namespace oriwheel

#endif // ORIWHEEL_ANALYTICS_HPP
