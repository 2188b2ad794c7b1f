#ifndef ORIWHEEL_CONFIG_HPP
#define ORIWHEEL_CONFIG_HPP

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "oriwheel/analytics.hpp"
#include "oriwheel/cell.hpp"
#include "oriwheel/design.hpp"
#include "oriwheel/errors.hpp"
#include "oriwheel/mission.hpp"
#include "oriwheel/terra.hpp"

namespace oriwheel {

/// One simulated sand scenario of the sim command.
struct SimScenario {
    std::string name = "run";
    double width_mm = 72.0;   // folded wheel width; sets theta1
    double omega = 6.28;      // rad/s
    double slope_deg = 0.0;
    double duration = 9.0;    // s
    double dt = 1e-3;         // s
    double start_sinkage = 0.0; // mm
    double window = 8.0;        // s, travel probe time
    double escape_threshold = -1.0; // mm, default half the start sinkage
    double climb_length = 0.0;  // mm; > 0 with a slope turns the run into a climb
    double chassis_depth = 30.0; // mm, climb failure depth
};

/// The single declarative run document. Field-for-field schema; unknown
/// keys are rejected at load time.
struct RunConfig {
    std::uint64_t seed = 42;
    std::string out_dir = "out";

    CellParams cell{25.0, 35.0, 18.0, 15.0 * kPi / 180.0};
    WheelConfig wheel{cell, 8, 2, 2.0 * std::asin(22.0 / 72.0), kPi};

    double frame_const = 203.0;   // mm
    double robot_mass = 1348.5;   // g
    double fold_rate = 0.5;       // rad/s
    double safety_margin = 5.0;   // mm
    double robot_speed = 100.0;   // mm/s

    terra::TerrainParams terrain = terra::TerrainParams::calibrated_default();

    double sensor_sigma = 2.0; // mm
    int n_readings = 9;

    std::vector<double> channels_mm{400.0, 300.0, 200.0};
    double channel_length = 600.0; // mm

    double plate_resolution = 10.0; // mm
    std::vector<SimScenario> scenarios;

    std::optional<DesignTarget> design;

    RobotSpec robot_spec() const {
        return {wheel, frame_const, robot_mass, fold_rate, safety_margin};
    }

    void validate() const {
        wheel.validate();
        if (!feasibility(wheel.cell, wheel.n_circ))
            throw ValidationError("wheel configuration cannot close into a ring (beta too steep "
                                  "for n_circ)");
        robot_spec().validate();
        terrain.validate();
        if (n_readings < 1 || n_readings % 2 == 0)
            throw ValidationError("sense.n_readings must be odd");
        if (!(sensor_sigma >= 0.0)) throw ValidationError("sense.sigma_mm must be >= 0");
        if (!(channel_length > 0.0) || !(robot_speed > 0.0))
            throw ValidationError("mission lengths and speed must be positive");
        if (!(plate_resolution > 0.0)) throw ValidationError("sim.resolution_mm must be positive");
        for (const auto& s : scenarios) {
            if (!(s.width_mm > 0.0) ||
                s.width_mm > 2.0 * wheel.n_width * wheel.cell.b + 1e-9)
                throw ValidationError("scenario width outside the wheel envelope: " + s.name);
            if (!(s.dt > 0.0) || s.dt > 2e-3 + 1e-15)
                throw ValidationError("scenario dt must be in (0, 2e-3] s: " + s.name);
            if (!(s.duration > 0.0)) throw ValidationError("scenario duration must be positive");
        }
        if (design) design->validate();
    }
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& j, const std::set<std::string>& allowed,
                           const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ValidationError("unknown key '" + it.key() + "' in " + where);
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad value for '") + key + "': " + e.what());
    }
}

inline void read_angle_deg(const json& j, const char* key, double& out_rad) {
    double deg = out_rad * 180.0 / kPi;
    read(j, key, deg);
    out_rad = deg * kPi / 180.0;
}

} // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
    using detail::read;
    using detail::read_angle_deg;
    using detail::reject_unknown;
    RunConfig c;
    reject_unknown(j, {"seed", "out_dir", "cell", "wheel", "robot", "terrain", "sense", "mission",
                       "sim", "design"},
                   "config");
    read(j, "seed", c.seed);
    read(j, "out_dir", c.out_dir);

    if (j.contains("cell")) {
        const auto& jc = j.at("cell");
        reject_unknown(jc, {"l_t_mm", "l_u_mm", "b_mm", "beta_deg"}, "cell");
        read(jc, "l_t_mm", c.cell.l_t);
        read(jc, "l_u_mm", c.cell.l_u);
        read(jc, "b_mm", c.cell.b);
        read_angle_deg(jc, "beta_deg", c.cell.beta);
    }
    c.wheel.cell = c.cell;
    if (j.contains("wheel")) {
        const auto& jw = j.at("wheel");
        reject_unknown(jw, {"n_circ", "n_width", "theta_range_deg"}, "wheel");
        read(jw, "n_circ", c.wheel.n_circ);
        read(jw, "n_width", c.wheel.n_width);
        if (jw.contains("theta_range_deg")) {
            std::vector<double> r = jw.at("theta_range_deg").get<std::vector<double>>();
            if (r.size() != 2) throw ValidationError("wheel.theta_range_deg must have 2 entries");
            c.wheel.theta_lo = r[0] * kPi / 180.0;
            c.wheel.theta_hi = r[1] * kPi / 180.0;
        }
    }
    if (j.contains("robot")) {
        const auto& jr = j.at("robot");
        reject_unknown(jr,
                       {"frame_const_mm", "mass_g", "fold_rate_rad_s", "safety_margin_mm",
                        "speed_mm_s"},
                       "robot");
        read(jr, "frame_const_mm", c.frame_const);
        read(jr, "mass_g", c.robot_mass);
        read(jr, "fold_rate_rad_s", c.fold_rate);
        read(jr, "safety_margin_mm", c.safety_margin);
        read(jr, "speed_mm_s", c.robot_speed);
    }
    if (j.contains("terrain")) {
        const auto& jt = j.at("terrain");
        reject_unknown(jt, {"k_sink", "n_exp", "mu", "slope_deg", "g_mm_s2"}, "terrain");
        read(jt, "k_sink", c.terrain.k_sink);
        read(jt, "n_exp", c.terrain.n_exp);
        read(jt, "mu", c.terrain.mu);
        read_angle_deg(jt, "slope_deg", c.terrain.slope);
        read(jt, "g_mm_s2", c.terrain.g);
    }
    if (j.contains("sense")) {
        const auto& js = j.at("sense");
        reject_unknown(js, {"sigma_mm", "n_readings"}, "sense");
        read(js, "sigma_mm", c.sensor_sigma);
        read(js, "n_readings", c.n_readings);
    }
    if (j.contains("mission")) {
        const auto& jm = j.at("mission");
        reject_unknown(jm, {"channels_mm", "channel_length_mm"}, "mission");
        read(jm, "channels_mm", c.channels_mm);
        read(jm, "channel_length_mm", c.channel_length);
    }
    if (j.contains("sim")) {
        const auto& js = j.at("sim");
        reject_unknown(js, {"resolution_mm", "scenarios"}, "sim");
        read(js, "resolution_mm", c.plate_resolution);
        if (js.contains("scenarios")) {
            if (!js.at("scenarios").is_array())
                throw ValidationError("sim.scenarios must be an array");
            for (const auto& jsc : js.at("scenarios")) {
                reject_unknown(jsc,
                               {"name", "width_mm", "omega_rad_s", "slope_deg", "duration_s",
                                "dt_s", "start_sinkage_mm", "window_s", "escape_threshold_mm",
                                "climb_length_mm", "chassis_depth_mm"},
                               "sim.scenarios[]");
                SimScenario sc;
                read(jsc, "name", sc.name);
                read(jsc, "width_mm", sc.width_mm);
                read(jsc, "omega_rad_s", sc.omega);
                read(jsc, "slope_deg", sc.slope_deg);
                read(jsc, "duration_s", sc.duration);
                read(jsc, "dt_s", sc.dt);
                read(jsc, "start_sinkage_mm", sc.start_sinkage);
                read(jsc, "window_s", sc.window);
                read(jsc, "escape_threshold_mm", sc.escape_threshold);
                read(jsc, "climb_length_mm", sc.climb_length);
                read(jsc, "chassis_depth_mm", sc.chassis_depth);
                c.scenarios.push_back(sc);
            }
        }
    }
    if (j.contains("design")) {
        const auto& jd = j.at("design");
        reject_unknown(jd,
                       {"r_target_mm", "lb_min_mm", "lb_max_mm", "n_circ", "n_width", "tolerance",
                        "b_max_mm", "budget"},
                       "design");
        DesignTarget t{};
        read(jd, "r_target_mm", t.r_target);
        read(jd, "lb_min_mm", t.lb_min_req);
        read(jd, "lb_max_mm", t.lb_max_req);
        if (jd.contains("n_circ")) {
            auto r = jd.at("n_circ").get<std::vector<int>>();
            if (r.size() != 2) throw ValidationError("design.n_circ must have 2 entries");
            t.n_circ_min = r[0];
            t.n_circ_max = r[1];
        }
        if (jd.contains("n_width")) {
            auto r = jd.at("n_width").get<std::vector<int>>();
            if (r.size() != 2) throw ValidationError("design.n_width must have 2 entries");
            t.n_width_min = r[0];
            t.n_width_max = r[1];
        }
        read(jd, "tolerance", t.tolerance);
        read(jd, "b_max_mm", t.b_max);
        read(jd, "budget", t.budget);
        c.design = t;
    }
    try {
        c.validate();
    } catch (const InvalidParams& e) {
        throw ValidationError(e.what());
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

} // namespace oriwheel

#endif // ORIWHEEL_CONFIG_HPP
