#ifndef ORIWHEEL_MISSION_HPP
#define ORIWHEEL_MISSION_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oriwheel/analytics.hpp"
#include "oriwheel/cell.hpp"
#include "oriwheel/errors.hpp"
#include "oriwheel/rng.hpp"

namespace oriwheel {

/// Robot-level width model: W_robot = frame_const + 2 * l_b(theta1).
struct RobotSpec {
    WheelConfig wheel;
    double frame_const;       // mm, additive chassis width constant
    double mass = 1348.5;     // g
    double fold_rate = 0.5;   // rad/s, theta1 actuation speed
    double safety_margin = 5; // mm

    void validate() const {
        wheel.validate();
        if (!(frame_const > 0.0)) throw InvalidParams("frame_const must be positive");
        if (!(mass > 0.0)) throw InvalidParams("mass must be positive");
        if (!(fold_rate > 0.0)) throw InvalidParams("fold_rate must be positive");
        if (!(safety_margin >= 0.0)) throw InvalidParams("safety_margin must be >= 0");
    }
};

struct ChannelScenario {
    double channel_width;   // mm
    double sensor_sigma;    // mm, Gaussian noise std
    int n_readings = 9;     // odd
    std::uint64_t seed = 0;

    void validate() const {
        if (!(channel_width > 0.0)) throw InvalidParams("channel_width must be positive");
        if (!(sensor_sigma >= 0.0)) throw InvalidParams("sensor_sigma must be >= 0");
        if (n_readings < 1 || n_readings % 2 == 0)
            throw InvalidParams("n_readings must be odd and >= 1");
    }
};

enum class Decision { DirectPass, FoldAndPass, Return };

inline const char* to_string(Decision d) {
    switch (d) {
        case Decision::DirectPass: return "DirectPass";
        case Decision::FoldAndPass: return "FoldAndPass";
        default: return "Return";
    }
}

enum class MissionState { Initial, Sensing, Folding, Through, Unfolding, Returning, Done };

inline const char* to_string(MissionState s) {
    switch (s) {
        case MissionState::Initial: return "Initial";
        case MissionState::Sensing: return "Sensing";
        case MissionState::Folding: return "Folding";
        case MissionState::Through: return "Through";
        case MissionState::Unfolding: return "Unfolding";
        case MissionState::Returning: return "Returning";
        default: return "Done";
    }
}

struct MissionTrace {
    struct Event {
        double t;          // s, state entry time
        MissionState state;
        double width;      // mm, robot width on entry
    };
    std::vector<Event> events;
    Decision decision = Decision::Return;
    double measured_width = 0.0; // mm, fused sensor reading
    bool actuation_limited = false;
};

/// Overall robot width at fold angle theta1.
inline double robot_width(const RobotSpec& spec, double theta1) {
    if (!(theta1 >= spec.wheel.theta_lo - 1e-12 && theta1 <= spec.wheel.theta_hi + 1e-12))
        throw InvalidParams("theta1 outside the actuation range");
    return spec.frame_const +
           2.0 * wheel_width(spec.wheel.n_width, spec.wheel.cell.b, theta1);
}

/// Simulated ultrasonic ranging: median of n seeded Gaussian readings.
inline double sense_channel(const ChannelScenario& scenario) {
    scenario.validate();
    Rng rng(scenario.seed);
    std::vector<double> readings(scenario.n_readings);
    for (auto& r : readings) r = rng.gaussian(scenario.channel_width, scenario.sensor_sigma);
    auto mid = readings.begin() + readings.size() / 2;
    std::nth_element(readings.begin(), mid, readings.end());
    return *mid;
}

/// Three-way passing decision against the robot's width envelope.
/// DirectPass if measured >= W_max + margin, Return if measured < W_min + margin,
/// FoldAndPass otherwise.
inline Decision decide(const RobotSpec& spec, double measured) {
    spec.validate();
    if (!(measured > 0.0)) throw InvalidParams("measured width must be positive");
    const double w_min = robot_width(spec, spec.wheel.theta_lo);
    const double w_max = robot_width(spec, spec.wheel.theta_hi);
    if (measured >= w_max + spec.safety_margin) return Decision::DirectPass;
    if (measured < w_min + spec.safety_margin) return Decision::Return;
    return Decision::FoldAndPass;
}

namespace detail {

/// Fold angle at which the robot width equals `width`; throws when it is
/// not reachable within the actuation range.
inline double fold_angle_for_robot_width(const RobotSpec& spec, double width) {
    const double lb = 0.5 * (width - spec.frame_const);
    const double lb_cap = 2.0 * spec.wheel.n_width * spec.wheel.cell.b;
    if (!(lb > 0.0) || lb > lb_cap + 1e-12)
        throw InvalidParams("requested width outside the wheel envelope");
    double theta = 2.0 * std::asin(std::clamp(lb / lb_cap, 0.0, 1.0));
    if (theta < spec.wheel.theta_lo - 1e-9 || theta > spec.wheel.theta_hi + 1e-9)
        throw InvalidParams("requested width unreachable within theta range");
    return std::clamp(theta, spec.wheel.theta_lo, spec.wheel.theta_hi);
}

} // namespace detail

/// Executes the sensing/decision/passing sequence with kinematic timing.
/// Starts fully unfolded (the stable travel state) and, after a fold-and-pass,
/// unfolds back to the initial fold angle.
inline MissionTrace run_mission(const RobotSpec& spec, const ChannelScenario& scenario,
                                double channel_length, double speed) {
    spec.validate();
    scenario.validate();
    if (!(channel_length > 0.0) || !(speed > 0.0))
        throw InvalidParams("channel_length and speed must be positive");

    MissionTrace trace;
    const double theta0 = spec.wheel.theta_hi;
    const double w0 = robot_width(spec, theta0);
    double t = 0.0;
    auto emit = [&](MissionState s, double width) { trace.events.push_back({t, s, width}); };

    emit(MissionState::Initial, w0);
    emit(MissionState::Sensing, w0);
    const double measured = sense_channel(scenario);
    trace.measured_width = measured;
    trace.decision = decide(spec, measured);

    const double through_time = channel_length / speed;
    switch (trace.decision) {
        case Decision::DirectPass: {
            emit(MissionState::Through, w0);
            t += through_time;
            emit(MissionState::Done, w0);
            break;
        }
        case Decision::Return: {
            emit(MissionState::Returning, w0);
            t += through_time;
            emit(MissionState::Done, w0);
            break;
        }
        case Decision::FoldAndPass: {
            double theta_target = 0.0;
            try {
                theta_target =
                    detail::fold_angle_for_robot_width(spec, measured - spec.safety_margin);
            } catch (const InvalidParams&) {
                // Required width unreachable: behave as Return and flag it.
                trace.actuation_limited = true;
                trace.decision = Decision::Return;
                emit(MissionState::Returning, w0);
                t += through_time;
                emit(MissionState::Done, w0);
                return trace;
            }
            const double w_through = robot_width(spec, theta_target);
            const double fold_time = (theta0 - theta_target) / spec.fold_rate;
            emit(MissionState::Folding, w0);
            t += fold_time;
            emit(MissionState::Through, w_through);
            t += through_time;
            emit(MissionState::Unfolding, w_through);
            t += fold_time;
            emit(MissionState::Done, w0);
            break;
        }
    }
    return trace;
}

/// JSON-lines serialization, one event per line.
inline void write_trace_jsonl(const MissionTrace& trace, std::ostream& os) {
    os.precision(17);
    for (const auto& e : trace.events) {
        os << "{\"t\":" << e.t << ",\"state\":\"" << to_string(e.state)
           << "\",\"width_mm\":" << e.width << "}\n";
    }
}

inline void export_trace(const MissionTrace& trace, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    write_trace_jsonl(trace, f);
    if (!f) throw IoError("write failed: " + path);
}

} // namespace oriwheel

#endif // ORIWHEEL_MISSION_HPP
