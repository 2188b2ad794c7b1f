// Command-line front end for the origami wheel toolkit.
//
// Exit codes: 0 success, 2 validation error, 3 I/O error,
// 4 no feasible design / unconverged, 5 numerical divergence.
// Emitted file paths are listed on stdout one per line; informational
// measurement lines are prefixed with "# ".

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oriwheel/analytics.hpp"
#include "oriwheel/config.hpp"
#include "oriwheel/design.hpp"
#include "oriwheel/kinematics.hpp"
#include "oriwheel/mission.hpp"
#include "oriwheel/pattern.hpp"
#include "oriwheel/svg.hpp"
#include "oriwheel/terra.hpp"

namespace fs = std::filesystem;
using namespace oriwheel;
using nlohmann::json;

namespace {

bool verbose_logging() {
    const char* v = std::getenv("ORIWHEEL_LOG");
    return v != nullptr && std::string(v) != "quiet" && std::string(v) != "0";
}

void log_info(const std::string& msg) {
    if (verbose_logging()) std::cerr << "[oriwheel] " << msg << "\n";
}

fs::path ensure_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output dir: " + cfg.out_dir);
    return dir;
}

void emit_path(const fs::path& p) { std::cout << p.string() << "\n"; }

double theta_for_width(const WheelConfig& wheel, double width_mm) {
    double cap = 2.0 * wheel.n_width * wheel.cell.b;
    if (!(width_mm > 0.0) || width_mm > cap + 1e-9)
        throw ValidationError("width outside the wheel envelope");
    return 2.0 * std::asin(std::min(1.0, width_mm / cap));
}

json report_json(const AnalyticReport& r) {
    return json{{"theta1_closure_rad", r.theta1_closure},
                {"gamma_rad", r.gamma},
                {"phi_rad", r.phi},
                {"lb_min_mm", r.lb_min},
                {"lb_max_mm", r.lb_max},
                {"r_d_mm", r.r_d},
                {"feasible", r.feasible},
                {"width_ratio", r.width_ratio},
                {"eq3_literal_n", r.eq3_literal_n},
                {"r_d_from_eq4", r.r_d_from_eq4}};
}

int cmd_pattern(const RunConfig& cfg) {
    fs::path dir = ensure_out_dir(cfg);
    CreasePattern p = tile_pattern(cfg.wheel);
    fs::path svg = dir / "pattern.svg";
    fs::path vcsv = dir / "pattern_vertices.csv";
    fs::path ecsv = dir / "pattern_edges.csv";
    export_pattern(p, svg.string());
    export_pattern_csv(p, vcsv.string(), ecsv.string());
    emit_path(svg);
    emit_path(vcsv);
    emit_path(ecsv);
    return 0;
}

int cmd_analyze(const RunConfig& cfg, bool json_out) {
    AnalyticReport rep = analyze(cfg.wheel);
    if (json_out) {
        std::cout << report_json(rep).dump(2) << "\n";
    } else {
        std::cout << report_table(rep);
    }
    return 0;
}

int cmd_fold(const RunConfig& cfg, double theta1_deg) {
    fs::path dir = ensure_out_dir(cfg);
    double theta1;
    if (theta1_deg >= 0.0) {
        theta1 = theta1_deg * kPi / 180.0;
        if (theta1 < cfg.wheel.theta_lo - 1e-12 || theta1 > cfg.wheel.theta_hi + 1e-12)
            throw ValidationError("theta1 outside the configured theta range");
    } else {
        theta1 = solve_closure(cfg.wheel);
    }
    WheelMesh mesh = assemble_ring(cfg.wheel, theta1);
    auto [ro, ri] = measure_radius(mesh);
    fs::path obj = dir / "wheel.obj";
    export_mesh(mesh, obj.string());
    std::cout.precision(12);
    std::cout << "# theta1_rad=" << theta1 << " width_mm=" << measure_width(mesh)
              << " r_outer_mm=" << ro << " r_inner_mm=" << ri
              << " closure_residual_mm=" << mesh.closure_residual << "\n";
    emit_path(obj);
    return 0;
}

int cmd_sim(const RunConfig& cfg) {
    fs::path dir = ensure_out_dir(cfg);
    if (cfg.scenarios.empty()) log_info("no sim scenarios configured");
    bool any_diverged = false;

    std::ofstream summary_tmp;
    fs::path sum_path = dir / "sim_summary.csv";
    std::ofstream sum(sum_path);
    if (!sum) throw IoError("cannot open for writing: " + sum_path.string());
    sum << "name,width_mm,slope_deg,t_pt_s,d_pt_mm,final_x_mm,final_z_mm,passed,diverged\n";
    sum.precision(10);

    std::vector<fs::path> emitted;
    for (size_t i = 0; i < cfg.scenarios.size(); ++i) {
        const SimScenario& sc = cfg.scenarios[i];
        double theta1 = theta_for_width(cfg.wheel, sc.width_mm);
        WheelMesh mesh = assemble_ring(cfg.wheel, theta1);
        double load = terra::weight_newton(cfg.robot_mass / 4.0, cfg.terrain.g);
        terra::WheelLoadCase cse = terra::make_load_case(mesh, load, sc.omega,
                                                         cfg.robot_mass / 4.0,
                                                         cfg.plate_resolution);
        terra::TerrainParams tp = cfg.terrain.with_slope(sc.slope_deg * kPi / 180.0);

        terra::Trajectory traj;
        std::string passed = "";
        if (sc.climb_length > 0.0 && sc.slope_deg > 0.0) {
            terra::ClimbResult r = terra::slope_climb(cse, tp, sc.climb_length, sc.duration,
                                                      sc.dt, sc.chassis_depth);
            traj = std::move(r.trajectory);
            passed = r.passed ? "yes" : "no";
        } else {
            traj = terra::simulate(cse, tp, sc.duration, sc.dt, sc.start_sinkage);
        }
        any_diverged = any_diverged || traj.diverged;

        fs::path csv = dir / ("sim_" + sc.name + ".csv");
        terra::export_trajectory_csv(traj, csv.string());
        emitted.push_back(csv);

        PlotSeries series;
        series.label = sc.name;
        for (const auto& s : traj.samples) series.points.push_back({s.x, s.z});
        fs::path svg = dir / ("sim_" + sc.name + ".svg");
        export_line_plot({series}, "travel x (mm)", "sinkage z (mm)", svg.string());
        emitted.push_back(svg);

        double t_pt = std::numeric_limits<double>::quiet_NaN();
        double d_pt = std::numeric_limits<double>::quiet_NaN();
        if (sc.start_sinkage > 0.0 && !traj.samples.empty() &&
            traj.samples.back().t >= sc.window) {
            auto m = terra::traverse_metrics(traj, sc.start_sinkage, sc.window,
                                             sc.escape_threshold);
            t_pt = m.t_pt;
            d_pt = m.d_pt;
        }
        sum << sc.name << "," << sc.width_mm << "," << sc.slope_deg << "," << t_pt << "," << d_pt
            << "," << traj.back().x << "," << traj.back().z << "," << passed << ","
            << (traj.diverged ? "yes" : "no") << "\n";
    }
    if (!sum) throw IoError("write failed: " + sum_path.string());
    sum.close();
    emit_path(sum_path);
    for (const auto& p : emitted) emit_path(p);
    return any_diverged ? 5 : 0;
}

int cmd_mission(const RunConfig& cfg) {
    fs::path dir = ensure_out_dir(cfg);
    RobotSpec spec = cfg.robot_spec();

    fs::path sum_path = dir / "mission_summary.csv";
    std::ofstream sum(sum_path);
    if (!sum) throw IoError("cannot open for writing: " + sum_path.string());
    sum << "channel_mm,measured_mm,decision,events,actuation_limited\n";
    sum.precision(10);

    std::vector<fs::path> emitted;
    for (size_t i = 0; i < cfg.channels_mm.size(); ++i) {
        ChannelScenario sc{cfg.channels_mm[i], cfg.sensor_sigma, cfg.n_readings,
                           cfg.seed + static_cast<std::uint64_t>(i)};
        MissionTrace trace = run_mission(spec, sc, cfg.channel_length, cfg.robot_speed);
        fs::path jl = dir / ("mission_" + std::to_string(i) + ".jsonl");
        export_trace(trace, jl.string());
        emitted.push_back(jl);
        sum << sc.channel_width << "," << trace.measured_width << ","
            << to_string(trace.decision) << "," << trace.events.size() << ","
            << (trace.actuation_limited ? "yes" : "no") << "\n";
    }
    if (!sum) throw IoError("write failed: " + sum_path.string());
    sum.close();
    emit_path(sum_path);
    for (const auto& p : emitted) emit_path(p);
    return 0;
}

int cmd_design(const RunConfig& cfg) {
    if (!cfg.design) throw ValidationError("config has no design section");
    fs::path dir = ensure_out_dir(cfg);
    DesignResult res = search(*cfg.design, cfg.seed);

    json out{{"objective", res.objective},
             {"iterations", res.iterations},
             {"converged", res.converged},
             {"config",
              {{"l_t_mm", res.config.cell.l_t},
               {"l_u_mm", res.config.cell.l_u},
               {"b_mm", res.config.cell.b},
               {"beta_rad", res.config.cell.beta},
               {"n_circ", res.config.n_circ},
               {"n_width", res.config.n_width},
               {"theta_lo_rad", res.config.theta_lo},
               {"theta_hi_rad", res.config.theta_hi}}},
             {"report", report_json(res.report)}};
    fs::path jpath = dir / "design.json";
    std::ofstream f(jpath);
    if (!f) throw IoError("cannot open for writing: " + jpath.string());
    f << out.dump(2) << "\n";
    if (!f) throw IoError("write failed: " + jpath.string());
    f.close();

    std::cout << "# objective=" << res.objective << " converged=" << (res.converged ? 1 : 0)
              << " n_circ=" << res.config.n_circ << " n_width=" << res.config.n_width << "\n";
    emit_path(jpath);
    return res.converged ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"origami variable-width wheel toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_override;
    std::int64_t seed_override = -1;
    bool json_out = false;
    double theta1_deg = -1.0;

    app.add_option("--config", config_path, "run configuration (JSON)");
    app.add_option("--out", out_override, "output directory (overrides config)");
    app.add_option("--seed", seed_override, "seed (overrides config)");
    app.add_flag("--json", json_out, "machine-readable output where applicable");

    CLI::App* sub_pattern = app.add_subcommand("pattern", "emit the crease pattern (SVG + CSV)");
    CLI::App* sub_analyze = app.add_subcommand("analyze", "closed-form width/radius report");
    CLI::App* sub_fold = app.add_subcommand("fold", "fold the wheel and export the mesh (OBJ)");
    sub_fold->add_option("--theta1-deg", theta1_deg, "fold angle; default: closure angle");
    CLI::App* sub_sim = app.add_subcommand("sim", "wheel-sand locomotion scenarios");
    CLI::App* sub_mission = app.add_subcommand("mission", "channel-passing decision missions");
    CLI::App* sub_design = app.add_subcommand("design", "search cell parameters for a target");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (config_path.empty()) throw ValidationError("--config is required");
        RunConfig cfg = load_config(config_path);
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        log_info("config loaded from " + config_path);

        if (sub_pattern->parsed()) return cmd_pattern(cfg);
        if (sub_analyze->parsed()) return cmd_analyze(cfg, json_out);
        if (sub_fold->parsed()) return cmd_fold(cfg, theta1_deg);
        if (sub_sim->parsed()) return cmd_sim(cfg);
        if (sub_mission->parsed()) return cmd_mission(cfg);
        if (sub_design->parsed()) return cmd_design(cfg);
        throw ValidationError("no subcommand given");
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParams& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const NoFeasibleDesign& e) {
        std::cerr << "no feasible design: " << e.what() << "\n";
        return 4;
    } catch (const NoClosure& e) {
        std::cerr << "no closure: " << e.what() << "\n";
        return 4;
    } catch (const Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
