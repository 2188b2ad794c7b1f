#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("ORIWHEEL_CLI");
    REQUIRE(p != nullptr);
    return p;
}

struct RunResult {
    int exit_code;
    std::string out;
};

int run_counter = 0;

RunResult run_cli(const std::string& args) {
    fs::path outfile = fs::temp_directory_path() / ("oriwheel_cli_out_" +
                                                    std::to_string(run_counter++) + ".txt");
    std::string cmd = cli_path() + " " + args + " > " + outfile.string() + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(rc);
    std::ifstream f(outfile);
    std::ostringstream os;
    os << f.rdbuf();
    r.out = os.str();
    fs::remove(outfile);
    return r;
}

fs::path write_config(const std::string& name, const std::string& body) {
    fs::path dir = fs::temp_directory_path() / "oriwheel_cli_tests";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream f(p);
    f << body;
    return p;
}

std::string base_config(const std::string& out_dir, const std::string& extra = "") {
    return R"({
  "seed": 42,
  "out_dir": ")" + out_dir + R"(",
  "cell": { "l_t_mm": 25.0, "l_u_mm": 35.0, "b_mm": 18.0, "beta_deg": 15.0 },
  "wheel": { "n_circ": 8, "n_width": 2, "theta_range_deg": [35.5831811460, 180.0] })" +
           extra + "\n}\n";
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::vector<std::string> emitted_paths(const std::string& stdout_text) {
    std::vector<std::string> paths;
    std::istringstream is(stdout_text);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '#') paths.push_back(line);
    }
    return paths;
}

} // namespace

TEST_CASE("cli: pattern emits SVG and CSV files listed on stdout") {
    fs::path out = fs::temp_directory_path() / "ow_pattern_out";
    fs::remove_all(out);
    fs::path cfg = write_config("pattern_ok.json", base_config(out.string()));
    RunResult r = run_cli("--config " + cfg.string() + " pattern");
    CHECK(r.exit_code == 0);
    auto paths = emitted_paths(r.out);
    REQUIRE(paths.size() == 3);
    for (const auto& p : paths) CHECK(fs::exists(p));
    std::string svg = read_file(paths[0]);
    CHECK(svg.find("<g id=\"mountain\"") != std::string::npos);
    CHECK(svg.find("<g id=\"valley\"") != std::string::npos);
}

TEST_CASE("cli: infeasible wheel is a validation error (exit 2)") {
    fs::path cfg = write_config("pattern_bad.json", R"({
  "cell": { "l_t_mm": 28.0, "l_u_mm": 35.0, "b_mm": 18.0, "beta_deg": 80.0 },
  "wheel": { "n_circ": 8, "n_width": 2 }
})");
    RunResult r = run_cli("--config " + cfg.string() + " pattern");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli: unwritable output dir is an IO error (exit 3)") {
    fs::path blocker = fs::temp_directory_path() / "ow_blocker";
    std::ofstream(blocker.string()) << "x";
    fs::path cfg = write_config("pattern_io.json",
                                base_config(blocker.string() + "/nested/out"));
    RunResult r = run_cli("--config " + cfg.string() + " pattern");
    CHECK(r.exit_code == 3);
}

TEST_CASE("cli: unknown config keys are rejected") {
    fs::path cfg = write_config("unknown_key.json", R"({ "celll": {} })");
    RunResult r = run_cli("--config " + cfg.string() + " analyze");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli: invalid seed type is a validation error") {
    fs::path cfg = write_config("bad_seed.json", R"({ "seed": "abc" })");
    RunResult r = run_cli("--config " + cfg.string() + " mission");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli: analyze table and JSON agree numerically") {
    fs::path cfg = write_config("analyze.json", base_config("unused"));
    RunResult table = run_cli("--config " + cfg.string() + " analyze");
    RunResult js = run_cli("--config " + cfg.string() + " --json analyze");
    REQUIRE(table.exit_code == 0);
    REQUIRE(js.exit_code == 0);

    auto grab = [&](const std::string& text, const std::string& key) {
        auto pos = text.find(key);
        REQUIRE(pos != std::string::npos);
        pos += key.size();
        return std::stod(text.substr(pos, 40));
    };
    double ratio_t = grab(table.out, "width_ratio");
    double ratio_j = grab(js.out, "\"width_ratio\":");
    CHECK(ratio_t == Catch::Approx(ratio_j).margin(0.0));
    CHECK(ratio_t == Catch::Approx(72.0 / 22.0).margin(1e-6));
    double t1_t = grab(table.out, "theta1_closure");
    double t1_j = grab(js.out, "\"theta1_closure_rad\":");
    CHECK(t1_t == Catch::Approx(t1_j).margin(0.0));
}

TEST_CASE("cli: analyze with a degenerate actuation interval reports ratio 1") {
    fs::path cfg = write_config("analyze_deg.json", R"({
  "cell": { "l_t_mm": 25.0, "l_u_mm": 35.0, "b_mm": 18.0, "beta_deg": 15.0 },
  "wheel": { "n_circ": 8, "n_width": 2, "theta_range_deg": [120.0, 120.0000000001] }
})");
    RunResult r = run_cli("--config " + cfg.string() + " --json analyze");
    REQUIRE(r.exit_code == 0);
    auto pos = r.out.find("\"width_ratio\":");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 14, 30)) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("cli: fold at the closure angle reports a tiny residual and audits counts") {
    fs::path out = fs::temp_directory_path() / "ow_fold_out";
    fs::remove_all(out);
    fs::path cfg = write_config("fold.json", base_config(out.string()));
    RunResult r = run_cli("--config " + cfg.string() + " fold");
    REQUIRE(r.exit_code == 0);

    auto pos = r.out.find("closure_residual_mm=");
    REQUIRE(pos != std::string::npos);
    double residual = std::stod(r.out.substr(pos + 20, 30));
    CHECK(residual <= 1e-6 * 60.0); // 1e-6 * cell length

    auto paths = emitted_paths(r.out);
    REQUIRE(paths.size() == 1);
    std::string obj = read_file(paths[0]);
    long v_count = 0;
    std::istringstream is(obj);
    std::string line;
    while (std::getline(is, line))
        if (line.rfind("v ", 0) == 0) ++v_count;
    // canonical shared-vertex count: n_circ * (4 * n_width + 2)
    CHECK(v_count == 8 * (4 * 2 + 2));
}

TEST_CASE("cli: fold rejects angles outside the actuation range") {
    fs::path cfg = write_config("fold_range.json", base_config("unused"));
    RunResult r = run_cli("--config " + cfg.string() + " fold --theta1-deg 0");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli: sim validates the step size") {
    fs::path out = fs::temp_directory_path() / "ow_sim_bad";
    fs::path cfg = write_config("sim_bad_dt.json", base_config(out.string(), R"(,
  "sim": { "scenarios": [ { "name": "x", "width_mm": 38.0, "duration_s": 0.5, "dt_s": 0.003 } ] })"));
    RunResult r = run_cli("--config " + cfg.string() + " sim");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli: sim reruns are byte-identical (determinism)") {
    std::string extra = R"(,
  "sim": { "resolution_mm": 12.0, "scenarios": [
    { "name": "short", "width_mm": 38.0, "omega_rad_s": 6.28, "duration_s": 0.8,
      "dt_s": 1e-3, "start_sinkage_mm": 20.0, "window_s": 0.5 } ] })";
    fs::path out1 = fs::temp_directory_path() / "ow_sim_a";
    fs::path out2 = fs::temp_directory_path() / "ow_sim_b";
    fs::remove_all(out1);
    fs::remove_all(out2);
    fs::path cfg1 = write_config("sim_det1.json", base_config(out1.string(), extra));
    fs::path cfg2 = write_config("sim_det2.json", base_config(out2.string(), extra));
    REQUIRE(run_cli("--config " + cfg1.string() + " sim").exit_code == 0);
    REQUIRE(run_cli("--config " + cfg2.string() + " sim").exit_code == 0);
    CHECK(read_file(out1 / "sim_short.csv") == read_file(out2 / "sim_short.csv"));
    CHECK(read_file(out1 / "sim_summary.csv") == read_file(out2 / "sim_summary.csv"));
}

TEST_CASE("cli: mission decisions for the three reference channels") {
    fs::path out = fs::temp_directory_path() / "ow_mission_out";
    fs::remove_all(out);
    fs::path cfg = write_config("mission.json", base_config(out.string(), R"(,
  "sense": { "sigma_mm": 0.0, "n_readings": 9 },
  "mission": { "channels_mm": [400.0, 300.0, 200.0], "channel_length_mm": 600.0 })"));
    RunResult r = run_cli("--config " + cfg.string() + " mission");
    REQUIRE(r.exit_code == 0);
    std::string summary = read_file(out / "mission_summary.csv");
    CHECK(summary.find("400,400,DirectPass") != std::string::npos);
    CHECK(summary.find("300,300,FoldAndPass") != std::string::npos);
    CHECK(summary.find("200,200,Return") != std::string::npos);
    auto paths = emitted_paths(r.out);
    CHECK(paths.size() == 4); // summary + three traces
}

TEST_CASE("cli: mission with an empty scenario list succeeds with an empty summary") {
    fs::path out = fs::temp_directory_path() / "ow_mission_empty";
    fs::remove_all(out);
    fs::path cfg = write_config("mission_empty.json", base_config(out.string(), R"(,
  "mission": { "channels_mm": [], "channel_length_mm": 600.0 })"));
    RunResult r = run_cli("--config " + cfg.string() + " mission");
    CHECK(r.exit_code == 0);
    std::string summary = read_file(out / "mission_summary.csv");
    CHECK(summary == "channel_mm,measured_mm,decision,events,actuation_limited\n");
}

TEST_CASE("cli: design round trip converges; reruns identical; impossible caps exit 4") {
    std::string extra = R"(,
  "design": { "r_target_mm": 47.5, "lb_min_mm": 22.0, "lb_max_mm": 72.0,
              "n_circ": [8, 8], "n_width": [2, 2], "tolerance": 2e-3, "budget": 1500 })";
    fs::path out1 = fs::temp_directory_path() / "ow_design_a";
    fs::path out2 = fs::temp_directory_path() / "ow_design_b";
    fs::remove_all(out1);
    fs::remove_all(out2);
    fs::path cfg1 = write_config("design1.json", base_config(out1.string(), extra));
    fs::path cfg2 = write_config("design2.json", base_config(out2.string(), extra));
    RunResult r1 = run_cli("--config " + cfg1.string() + " design");
    RunResult r2 = run_cli("--config " + cfg2.string() + " design");
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    CHECK(read_file(out1 / "design.json") == read_file(out2 / "design.json"));

    fs::path cfg3 = write_config("design_cap.json", base_config(out1.string(), R"(,
  "design": { "r_target_mm": 40.0, "lb_min_mm": 22.0, "lb_max_mm": 500.0,
              "n_circ": [8, 8], "n_width": [2, 2], "b_max_mm": 50.0 })"));
    RunResult r3 = run_cli("--config " + cfg3.string() + " design");
    CHECK(r3.exit_code == 4);
}
