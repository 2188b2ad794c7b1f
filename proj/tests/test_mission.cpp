#include <catch_amalgamated.hpp>

#include <sstream>

#include "oriwheel/mission.hpp"

using namespace oriwheel;

namespace {

RobotSpec default_spec() {
    CellParams cell{25.0, 35.0, 18.0, 15.0 * kPi / 180.0};
    WheelConfig wheel{cell, 8, 2, 2.0 * std::asin(22.0 / 72.0), kPi};
    return {wheel, 203.0, 1348.5, 0.5, 5.0};
}

int count_state(const MissionTrace& t, MissionState s) {
    int n = 0;
    for (const auto& e : t.events)
        if (e.state == s) ++n;
    return n;
}

} // namespace

TEST_CASE("robot width anchors: 347 and 247 mm") {
    RobotSpec spec = default_spec();
    CHECK(robot_width(spec, kPi) == Catch::Approx(347.0).margin(1e-9));
    CHECK(robot_width(spec, spec.wheel.theta_lo) == Catch::Approx(247.0).margin(1e-9));
    CHECK(robot_width(spec, kPi) / robot_width(spec, spec.wheel.theta_lo) ==
          Catch::Approx(347.0 / 247.0).margin(1e-12));
    CHECK(347.0 / 247.0 == Catch::Approx(1.40).margin(0.01));
}

TEST_CASE("sensing: zero noise is exact, seeds are reproducible") {
    ChannelScenario s{300.0, 0.0, 9, 7};
    CHECK(sense_channel(s) == 300.0);
    ChannelScenario s2{300.0, 2.0, 9, 7};
    double a = sense_channel(s2), b = sense_channel(s2);
    CHECK(a == b);
    s2.seed = 8;
    CHECK(sense_channel(s2) != a);
}

TEST_CASE("sensing: median keeps the error within 3 sigma almost surely") {
    const double sigma = 2.0, truth = 300.0;
    int ok = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        ChannelScenario s{truth, sigma, 9, static_cast<std::uint64_t>(i)};
        if (std::abs(sense_channel(s) - truth) < 3.0 * sigma) ++ok;
    }
    CHECK(ok >= static_cast<int>(0.99 * trials));
}

TEST_CASE("decision table: 400/300/200 mm") {
    RobotSpec spec = default_spec();
    CHECK(decide(spec, 400.0) == Decision::DirectPass);
    CHECK(decide(spec, 300.0) == Decision::FoldAndPass);
    CHECK(decide(spec, 200.0) == Decision::Return);
}

TEST_CASE("decision is monotone in the measured width with two thresholds") {
    RobotSpec spec = default_spec();
    int rank_prev = 0;
    int transitions = 0;
    for (double m = 150.0; m <= 450.0; m += 0.5) {
        Decision d = decide(spec, m);
        int rank = d == Decision::Return ? 0 : (d == Decision::FoldAndPass ? 1 : 2);
        CHECK(rank >= rank_prev);
        if (rank != rank_prev) ++transitions;
        rank_prev = rank;
    }
    CHECK(transitions == 2);
}

TEST_CASE("decision is translation consistent") {
    RobotSpec spec = default_spec();
    for (double delta : {-50.0, 30.0, 120.0}) {
        RobotSpec shifted = spec;
        shifted.frame_const += delta; // shifts both thresholds by delta
        for (double m : {200.0, 251.9, 252.1, 300.0, 351.9, 352.1, 400.0}) {
            CHECK(decide(spec, m) == decide(shifted, m + delta));
        }
    }
}

TEST_CASE("mission: fold-and-pass folds once, unfolds once, returns to width") {
    RobotSpec spec = default_spec();
    ChannelScenario sc{300.0, 0.0, 9, 1};
    MissionTrace t = run_mission(spec, sc, 600.0, 100.0);
    CHECK(t.decision == Decision::FoldAndPass);
    CHECK(count_state(t, MissionState::Folding) == 1);
    CHECK(count_state(t, MissionState::Unfolding) == 1);
    CHECK(count_state(t, MissionState::Through) == 1);
    REQUIRE(!t.events.empty());
    CHECK(t.events.back().state == MissionState::Done);
    CHECK(std::abs(t.events.back().width - t.events.front().width) <= 1e-9);

    // safety: the through width plus the margin fits the measured channel
    for (const auto& e : t.events) {
        if (e.state == MissionState::Through)
            CHECK(e.width + spec.safety_margin <= t.measured_width + 1e-9);
    }

    // kinematic timing: folding duration is exactly delta_theta / fold_rate
    double w_through = 0.0;
    double t_fold_start = 0.0, t_through = 0.0;
    for (const auto& e : t.events) {
        if (e.state == MissionState::Folding) t_fold_start = e.t;
        if (e.state == MissionState::Through) {
            t_through = e.t;
            w_through = e.width;
        }
    }
    double lb = 0.5 * (w_through - spec.frame_const);
    double theta_target = 2.0 * std::asin(lb / (2.0 * spec.wheel.n_width * spec.wheel.cell.b));
    double expect = (spec.wheel.theta_hi - theta_target) / spec.fold_rate;
    CHECK(t_through - t_fold_start == Catch::Approx(expect).margin(1e-12));
}

TEST_CASE("mission: wide channel passes directly without folding") {
    RobotSpec spec = default_spec();
    ChannelScenario sc{400.0, 0.0, 9, 1};
    MissionTrace t = run_mission(spec, sc, 600.0, 100.0);
    CHECK(t.decision == Decision::DirectPass);
    CHECK(count_state(t, MissionState::Folding) == 0);
    CHECK(count_state(t, MissionState::Through) == 1);
}

TEST_CASE("mission: narrow channel returns") {
    RobotSpec spec = default_spec();
    ChannelScenario sc{200.0, 0.0, 9, 1};
    MissionTrace t = run_mission(spec, sc, 600.0, 100.0);
    CHECK(t.decision == Decision::Return);
    CHECK(count_state(t, MissionState::Returning) == 1);
    CHECK(count_state(t, MissionState::Folding) == 0);
}

TEST_CASE("event timestamps are ordered and widths change at the fold rate") {
    RobotSpec spec = default_spec();
    ChannelScenario sc{280.0, 1.5, 9, 12};
    MissionTrace t = run_mission(spec, sc, 500.0, 80.0);
    for (size_t i = 1; i < t.events.size(); ++i) {
        const auto& a = t.events[i - 1];
        const auto& b = t.events[i];
        CHECK(b.t >= a.t);
        if (a.state == MissionState::Folding || a.state == MissionState::Unfolding) {
            // width change consistent with fold_rate over the interval
            double lb_a = 0.5 * (a.width - spec.frame_const);
            double lb_b = 0.5 * (b.width - spec.frame_const);
            double cap = 2.0 * spec.wheel.n_width * spec.wheel.cell.b;
            double th_a = 2.0 * std::asin(std::clamp(lb_a / cap, 0.0, 1.0));
            double th_b = 2.0 * std::asin(std::clamp(lb_b / cap, 0.0, 1.0));
            CHECK(std::abs(th_b - th_a) == Catch::Approx(spec.fold_rate * (b.t - a.t)).margin(1e-9));
        }
    }
}

TEST_CASE("unreachable width requests are rejected") {
    RobotSpec spec = default_spec();
    CHECK_THROWS_AS(detail::fold_angle_for_robot_width(spec, 240.0), InvalidParams);
    CHECK_THROWS_AS(detail::fold_angle_for_robot_width(spec, spec.frame_const - 1.0),
                    InvalidParams);
    CHECK(detail::fold_angle_for_robot_width(spec, 247.0) ==
          Catch::Approx(spec.wheel.theta_lo).margin(1e-9));
}

TEST_CASE("trace serializes as one JSON object per line") {
    RobotSpec spec = default_spec();
    MissionTrace t = run_mission(spec, {300.0, 0.0, 9, 1}, 600.0, 100.0);
    std::ostringstream os;
    write_trace_jsonl(t, os);
    std::istringstream is(os.str());
    std::string line;
    size_t lines = 0;
    while (std::getline(is, line)) {
        CHECK(line.front() == '{');
        CHECK(line.back() == '}');
        CHECK(line.find("\"state\":") != std::string::npos);
        ++lines;
    }
    CHECK(lines == t.events.size());
}
