#ifndef ORIWHEEL_CELL_HPP
#define ORIWHEEL_CELL_HPP

#include <cmath>

#include "oriwheel/errors.hpp"
#include "oriwheel/geometry.hpp"

namespace oriwheel {

/// Geometry of one origami-wheel unit cell. Lengths in mm, angles in rad.
///
/// The interior vertex T sits on the cell's vertical centerline, at distance
/// l_t below the upper margin and l_u above the lower margin. The two diagonal
/// valley creases run from T to the side borders, rising b*tan(beta) toward
/// the upper margin; beta is the acute angle between the right diagonal
/// crease and the x axis (the width direction).
struct CellParams {
    double l_t;  // T to upper margin, mm
    double l_u;  // T to lower margin, mm
    double b;    // half width of the cell, mm
    double beta; // diagonal crease angle vs x axis, rad

    /// Cell length along the tiling (circumferential) direction.
    double length() const { return l_t + l_u; }

    void validate() const {
        if (!(l_t > 0.0) || !(l_u > 0.0) || !(b > 0.0))
            throw InvalidParams("cell lengths must be positive");
        if (!(beta > 0.0) || !(beta < kPi / 2.0))
            throw InvalidParams("beta must be strictly acute");
        if (!(l_u > l_t))
            throw InvalidParams("l_u must exceed l_t (degenerate cone otherwise)");
        // The diagonal creases must reach the side borders below the upper
        // margin, i.e. the supported facet topology.
        if (!(b * std::tan(beta) < l_t))
            throw InvalidParams("b*tan(beta) must be < l_t so the diagonals meet the side borders");
    }

    CellParams scaled(double s) const { return {l_t * s, l_u * s, b * s, beta}; }
};

/// A full wheel: one cell tiled n_width times across the axis and n_circ
/// times around the circumference, actuated over [theta_lo, theta_hi].
struct WheelConfig {
    CellParams cell;
    int n_circ;      // cells around the circumference, >= 3
    int n_width;     // cells across the width, >= 1
    double theta_lo; // fold-angle interval, rad, subset of (0, pi]
    double theta_hi;

    /// Per-cell central angle gamma = 2*pi/n_circ.
    double gamma() const { return 2.0 * kPi / n_circ; }

    /// Structural checks only; closure feasibility lives in analytics.
    void validate() const {
        cell.validate();
        if (n_circ < 3) throw InvalidParams("n_circ must be >= 3");
        if (n_width < 1) throw InvalidParams("n_width must be >= 1");
        if (!(theta_lo < theta_hi)) throw InvalidParams("theta_lo must be < theta_hi");
        if (!(theta_lo > 0.0) || !(theta_hi <= kPi + 1e-12))
            throw InvalidParams("theta range must lie in (0, pi]");
    }
};

} // namespace oriwheel

#endif // ORIWHEEL_CELL_HPP
