#include <catch_amalgamated.hpp>

#include "oriwheel/analytics.hpp"
#include "oriwheel/rng.hpp"

using namespace oriwheel;

namespace {
const CellParams kRefCell{10.0, 30.0, 18.0, 15.0 * kPi / 180.0};
const double kDeg = kPi / 180.0;
} // namespace

TEST_CASE("closure angle formula value") {
    double th = closure_fold_angle(8, 15.0 * kDeg);
    // 2*arccos(1/(tan 22.5 * tan 75))
    double arg = 1.0 / (std::tan(22.5 * kDeg) * std::tan(75.0 * kDeg));
    CHECK(th == Catch::Approx(2.0 * std::acos(arg)).margin(1e-15));
    CHECK(th == Catch::Approx(1.7346).margin(1e-3));
}

TEST_CASE("closure angle limits and domain") {
    CHECK(closure_fold_angle(8, kPi / 8.0) == Catch::Approx(0.0).margin(1e-7));
    CHECK_THROWS_AS(closure_fold_angle(8, 45.0 * kDeg), Infeasible);
    CHECK_THROWS_AS(closure_fold_angle(2, 0.1), InvalidParams);
}

TEST_CASE("feasibility predicate") {
    CHECK(feasibility(kRefCell, 8));
    CellParams steep = kRefCell;
    steep.beta = 45.0 * kDeg;
    CHECK_FALSE(feasibility(steep, 8));
    CellParams shallow = kRefCell;
    shallow.beta = 1e-4;
    for (int n = 3; n <= 64; ++n) CHECK(feasibility(shallow, n));
    // boundary beta = pi/n included
    CellParams boundary = kRefCell;
    boundary.beta = kPi / 8.0;
    CHECK(feasibility(boundary, 8));
}

TEST_CASE("closure angle decreases strictly with n_circ at fixed beta") {
    // More cells subtend a smaller per-cell angle, so the ring closes at a
    // deeper fold. Feasible range for beta = 15 deg is n <= 12.
    double prev = kPi;
    for (int n = 8; n <= 12; ++n) {
        double th = closure_fold_angle(n, 15.0 * kDeg);
        CHECK(th < prev);
        prev = th;
    }
    CHECK_THROWS_AS(closure_fold_angle(13, 15.0 * kDeg), Infeasible);
}

TEST_CASE("width formula anchors") {
    CHECK(wheel_width(2, 18.0, 0.0) == 0.0);
    CHECK(wheel_width(2, 18.0, kPi) == Catch::Approx(72.0).margin(1e-12));
    double th22 = 2.0 * std::asin(22.0 / 72.0);
    CHECK(wheel_width(2, 18.0, th22) == Catch::Approx(22.0).margin(1e-12));
    CHECK(th22 == Catch::Approx(35.586 * kDeg).margin(1e-3));
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
        double w = wheel_width(2, 18.0, i * kPi / 40.0);
        CHECK(w > prev - 1e-15);
        prev = w;
    }
}

TEST_CASE("closed-form radius: domain and flags") {
    CHECK_THROWS_AS(wheel_radius_eq4({20.0, 20.0, 18.0, 0.2}, {10.0, 5.0}), InvalidParams);
    CHECK_THROWS_AS(wheel_radius_eq4(kRefCell, {0.0, 5.0}), InvalidParams);
    Eq4Result r = wheel_radius_eq4(kRefCell, {12.0, 4.0});
    CHECK(r.r_d > 0.0);
    CHECK_FALSE(r.beta_flag);
    CHECK_FALSE(r.y_flag);
    Eq4Result r2 = wheel_radius_eq4(kRefCell, {12.0, 40.0});
    CHECK(r2.y_flag);
    CellParams steep{30.0, 40.0, 10.0, 0.8}; // beta past pi/4, diagonals still valid
    Eq4Result r3 = wheel_radius_eq4(steep, {12.0, 4.0});
    CHECK(r3.beta_flag);
}

TEST_CASE("closed-form radius is degree-1 homogeneous in lengths") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        double b = rng.uniform(5.0, 25.0), beta = rng.uniform(0.05, 0.4);
        double l_t = b * std::tan(beta) + rng.uniform(1.0, 20.0);
        double l_u = l_t + rng.uniform(1.0, 25.0);
        CellParams c{l_t, l_u, b, beta};
        Eq4Inputs in{rng.uniform(1.0, 30.0), rng.uniform(0.5, 10.0)};
        double s = rng.uniform(0.2, 5.0);
        double r1 = wheel_radius_eq4(c, in).r_d;
        double r2 = wheel_radius_eq4(c.scaled(s), {in.l_1 * s, in.l_2 * s}).r_d;
        REQUIRE(r2 == Catch::Approx(s * r1).epsilon(1e-12));
    }
}

TEST_CASE("analyze: paper-scale width range and ratio") {
    WheelConfig cfg{kRefCell, 8, 2, 2.0 * std::asin(22.0 / 72.0), kPi};
    AnalyticReport rep = analyze(cfg);
    CHECK(rep.lb_min == Catch::Approx(22.0).margin(1e-9));
    CHECK(rep.lb_max == Catch::Approx(72.0).margin(1e-9));
    CHECK(rep.width_ratio == Catch::Approx(72.0 / 22.0).margin(1e-9));
    CHECK(std::abs(rep.width_ratio - 3.27) <= 0.01);
    CHECK(rep.phi + cfg.cell.beta == Catch::Approx(kPi / 2.0).margin(1e-15));
    CHECK(rep.gamma == Catch::Approx(2.0 * kPi / 8.0).margin(1e-15));
    CHECK(rep.feasible);
    CHECK_FALSE(rep.r_d_from_eq4);
    CHECK(rep.r_d > 0.0);
}

TEST_CASE("analyze: degenerate actuation interval has ratio 1") {
    WheelConfig cfg{kRefCell, 8, 2, 1.2, 1.2 + 1e-15};
    AnalyticReport rep = analyze(cfg);
    CHECK(rep.width_ratio == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("analyze: closed-form radius used when inputs are provided") {
    WheelConfig cfg{kRefCell, 8, 2, 0.7, kPi};
    Eq4Inputs in{12.0, 4.0};
    AnalyticReport rep = analyze(cfg, in);
    CHECK(rep.r_d_from_eq4);
    CHECK(rep.r_d == Catch::Approx(wheel_radius_eq4(kRefCell, in).r_d).margin(1e-12));
}

TEST_CASE("analyze: infeasible configuration throws") {
    CellParams steep{24.0, 34.0, 18.0, 0.5};
    WheelConfig cfg{steep, 8, 2, 0.7, kPi};
    CHECK_THROWS_AS(analyze(cfg), Infeasible);
}

TEST_CASE("width formula equals the measured mesh width (oracle sweep)") {
    Rng rng(31);
    for (int i = 0; i < 10; ++i) {
        double b = rng.uniform(5.0, 25.0), beta = rng.uniform(0.1, 0.35);
        double l_t = b * std::tan(beta) + rng.uniform(1.0, 15.0);
        double l_u = l_t + rng.uniform(1.0, 20.0);
        int n = rng.uniform_int(6, 14);
        if (!(beta < kPi / n)) continue;
        WheelConfig cfg{{l_t, l_u, b, beta}, n, rng.uniform_int(1, 3), 1e-3, kPi};
        for (int k = 1; k <= 10; ++k) {
            double th = k * kPi / 10.0;
            double measured = measure_width(assemble_ring(cfg, th));
            double formula = wheel_width(cfg.n_width, b, th);
            REQUIRE(std::abs(measured - formula) <= 1e-6 * formula);
        }
    }
}

TEST_CASE("angle outputs are invariant under length scaling") {
    WheelConfig cfg{kRefCell, 8, 2, 0.7, kPi};
    AnalyticReport r1 = analyze(cfg);
    WheelConfig scaled{kRefCell.scaled(3.0), 8, 2, 0.7, kPi};
    AnalyticReport r2 = analyze(scaled);
    CHECK(r1.theta1_closure == Catch::Approx(r2.theta1_closure).margin(1e-15));
    CHECK(r1.gamma == r2.gamma);
    CHECK(r1.phi == r2.phi);
    CHECK(r2.lb_min == Catch::Approx(3.0 * r1.lb_min).epsilon(1e-12));
    CHECK(r2.r_d == Catch::Approx(3.0 * r1.r_d).epsilon(1e-9));
}

TEST_CASE("literal cell-count bound is exposed for comparison only") {
    double n_min = literal_min_cell_count(kRefCell);
    CHECK(n_min == Catch::Approx(kPi / std::atan(10.0)).margin(1e-12));
    // it plays no role in feasibility
    CHECK(feasibility(kRefCell, 3));
}
