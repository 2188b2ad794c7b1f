#include <cstdio>
#include "oriwheel/analytics.hpp"
#include "oriwheel/kinematics.hpp"
#include "oriwheel/pattern.hpp"

using namespace oriwheel;

int main() {
    CellParams cell{10.0, 30.0, 18.0, 15.0 * kPi / 180.0};
    WheelConfig cfg{cell, 8, 2, 0.05, kPi};

    double eq2 = closure_fold_angle(8, cell.beta);
    double oracle = solve_closure(cfg);
    std::printf("eq2    = %.12f\noracle = %.12f\ndiff   = %.3e\n", eq2, oracle, eq2 - oracle);

    WheelMesh mesh = assemble_ring(cfg, oracle);
    auto [ro, ri] = measure_radius(mesh);
    std::printf("residual = %.3e\nwidth = %.9f (formula %.9f)\nr_outer=%.6f r_inner=%.6f\n",
                mesh.closure_residual, measure_width(mesh), wheel_width(2, 18.0, oracle), ro, ri);

    // width exactness across theta sweep
    double worst = 0.0;
    for (int i = 1; i <= 40; ++i) {
        double th = i * kPi / 40.0;
        WheelMesh m2 = assemble_ring(cfg, th);
        double w = measure_width(m2), f = wheel_width(2, 18.0, th);
        worst = std::max(worst, std::abs(w - f) / f);
    }
    std::printf("width worst rel dev = %.3e\n", worst);

    // isometry check on the folded cell at 60 deg
    FoldedCell fc = fold_cell(cell, 60.0 * kPi / 180.0);
    auto pat = FoldedCell::pattern_positions(cell);
    double worst_e = 0.0;
    for (const auto& f : FoldedCell::facets()) {
        for (int k = 0; k < 4; ++k) {
            int a = f.v[k], b = f.v[(k + 1) % 4];
            double d3 = dist(fc.vertices[a], fc.vertices[b]);
            double d2 = dist(pat[a], pat[b]);
            worst_e = std::max(worst_e, std::abs(d3 - d2) / d2);
        }
    }
    std::printf("edge isometry worst rel = %.3e\n", worst_e);

    // pattern sanity
    CreasePattern p = tile_pattern(cfg);
    std::printf("pattern: %zu verts, %d M + %d V creases, %zu interior\n", p.vertices.size(),
                p.count_edges(CreaseKind::Mountain), p.count_edges(CreaseKind::Valley),
                p.interior_vertices.size());
    int ok = 0;
    for (int v : p.interior_vertices)
        if (maekawa_ok(p, v) && kawasaki_ok(p, v) && developable_ok(p, v)) ++ok;
    std::printf("maekawa+kawasaki+dev ok at %d/%zu, crossings=%d\n", ok,
                p.interior_vertices.size(), edges_cross(p) ? 1 : 0);
    return 0;
}
