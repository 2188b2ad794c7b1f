#ifndef ORIWHEEL_DESIGN_HPP
#define ORIWHEEL_DESIGN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "oriwheel/analytics.hpp"
#include "oriwheel/cell.hpp"
#include "oriwheel/errors.hpp"
#include "oriwheel/kinematics.hpp"
#include "oriwheel/rng.hpp"

namespace oriwheel {

/// Target wheel specification for the parametric design search.
struct DesignTarget {
    double r_target;    // mm, outer radius of the closed wheel
    double lb_min_req;  // mm, narrowest width the wheel must reach
    double lb_max_req;  // mm, widest width the wheel must reach
    int n_circ_min = 3, n_circ_max = 16;
    int n_width_min = 1, n_width_max = 4;
    double tolerance = 1e-3;     // relative, on sqrt(objective)
    double b_max = 100.0;        // mm, upper bound of the half cell width
    double width_penalty = 1.0;  // weight of the width hinge vs the radius term
    int budget = 5000;           // objective evaluations

    void validate() const {
        if (!(r_target > 0.0)) throw InvalidParams("r_target must be positive");
        if (!(lb_min_req > 0.0) || !(lb_min_req < lb_max_req))
            throw InvalidParams("need 0 < lb_min_req < lb_max_req");
        if (n_circ_min < 3 || n_circ_max < n_circ_min || n_width_min < 1 ||
            n_width_max < n_width_min)
            throw InvalidParams("cell-count bounds are empty or out of range");
        if (!(tolerance > 0.0) || !(b_max > 0.0)) throw InvalidParams("bad tolerance or b_max");
    }
};

struct DesignResult {
    WheelConfig config{};
    AnalyticReport report{};
    double objective = std::numeric_limits<double>::infinity();
    long iterations = 0;
    bool converged = false;
    std::vector<double> best_trace; // best objective after each evaluation
};

namespace detail {

struct DesignEval {
    long* evals;
    const DesignTarget* target;
    int n_circ, n_width;

    /// Objective over the continuous cell parameters (b, beta, l_t, l_u).
    /// The radius term is evaluated on the assembled ring (the geometric
    /// oracle), never through the closed-form radius model.
    double operator()(const std::array<double, 4>& p) const {
        ++*evals;
        const double b = p[0], beta = p[1], l_t = p[2], l_u = p[3];
        CellParams cell{l_t, l_u, b, beta};
        try {
            cell.validate();
            if (b > target->b_max) return 1e9;
            if (!feasibility(cell, n_circ)) return 1e9;
            double theta1 = closure_fold_angle(n_circ, beta);
            if (theta1 < 1e-6) return 1e9;
            double lo = std::min(theta1, 0.1);
            WheelConfig cfg{cell, n_circ, n_width, lo, kPi};
            WheelMesh mesh = assemble_ring(cfg, theta1);
            double r = measure_radius(mesh).first;
            double rterm = (r - target->r_target) / target->r_target;
            double cap = 2.0 * n_width * b;
            double hinge = std::max(0.0, (target->lb_max_req - cap) / target->lb_max_req);
            return rterm * rterm + target->width_penalty * hinge * hinge;
        } catch (const Error&) {
            return 1e9;
        }
    }
};

/// Plain Nelder-Mead on 4 parameters; deterministic for a fixed start.
template <typename F>
std::pair<std::array<double, 4>, double> nelder_mead(F f, std::array<double, 4> start,
                                                     double scale, int max_iter,
                                                     std::vector<double>* trace, double* best_seen) {
    constexpr int n = 4;
    using P = std::array<double, n>;
    struct Node {
        P x;
        double fx;
    };
    std::vector<Node> simplex;
    auto eval = [&](const P& x) {
        double v = f(x);
        if (best_seen) {
            *best_seen = std::min(*best_seen, v);
            if (trace) trace->push_back(*best_seen);
        }
        return v;
    };
    simplex.push_back({start, eval(start)});
    for (int i = 0; i < n; ++i) {
        P x = start;
        x[i] += scale * std::max(0.1, std::abs(start[i]));
        simplex.push_back({x, eval(x)});
    }
    auto by_f = [](const Node& a, const Node& b) { return a.fx < b.fx; };
    for (int it = 0; it < max_iter; ++it) {
        std::sort(simplex.begin(), simplex.end(), by_f);
        if (simplex.back().fx - simplex.front().fx < 1e-14) break;
        P centroid{};
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) centroid[k] += simplex[i].x[k] / n;
        }
        auto blend = [&](double c) {
            P x;
            for (int k = 0; k < n; ++k)
                x[k] = centroid[k] + c * (centroid[k] - simplex.back().x[k]);
            return x;
        };
        P xr = blend(1.0);
        double fr = eval(xr);
        if (fr < simplex.front().fx) {
            P xe = blend(2.0);
            double fe = eval(xe);
            simplex.back() = (fe < fr) ? Node{xe, fe} : Node{xr, fr};
        } else if (fr < simplex[n - 1].fx) {
            simplex.back() = {xr, fr};
        } else {
            P xc = blend(-0.5);
            double fc = eval(xc);
            if (fc < simplex.back().fx) {
                simplex.back() = {xc, fc};
            } else {
                for (int i = 1; i <= n; ++i) {
                    for (int k = 0; k < n; ++k)
                        simplex[i].x[k] = 0.5 * (simplex[i].x[k] + simplex[0].x[k]);
                    simplex[i].fx = eval(simplex[i].x);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(), by_f);
    return {simplex.front().x, simplex.front().fx};
}

} // namespace detail

/// Constrained search for cell parameters meeting the target: exhaustive
/// enumeration over the integer cell counts, a coarse seeded grid over the
/// continuous parameters, then simplex refinement of the best candidates.
/// Deterministic for a fixed (target, seed).
inline DesignResult search(const DesignTarget& target, std::uint64_t seed) {
    target.validate();

    // Upfront infeasibility: no admissible b can reach the required width.
    if (target.lb_max_req > 2.0 * target.n_width_max * target.b_max)
        throw NoFeasibleDesign("required maximum width exceeds the width-formula cap");

    long evals = 0;
    DesignResult best;
    double best_obj = std::numeric_limits<double>::infinity();
    std::array<double, 4> best_p{};
    int best_n = 0, best_m = 0;
    Rng rng(seed);

    struct Candidate {
        std::array<double, 4> p;
        double fx;
        int n_circ, n_width;
    };
    std::vector<Candidate> pool;

    for (int n = target.n_circ_min; n <= target.n_circ_max; ++n) {
        for (int m = target.n_width_min; m <= target.n_width_max; ++m) {
            detail::DesignEval f{&evals, &target, n, m};
            double beta_cap = kPi / n;
            double b0 = std::min(target.lb_max_req / (2.0 * m), target.b_max);
            double gamma = 2.0 * kPi / n;
            for (double bf : {0.25, 0.5, 0.75}) {
                double beta = bf * beta_cap;
                for (double kf : {0.3, 0.6, 0.9}) {
                    // Inner-polygon chord scale sets the l_u - l_t gap.
                    double diff = std::max(1.0, 2.0 * target.r_target * std::sin(0.5 * gamma) * kf);
                    double jitter = 1.0 + 0.01 * (rng.uniform() - 0.5);
                    double l_t = std::max(1.3 * b0 * std::tan(beta), 0.4 * diff) * jitter;
                    double l_u = l_t + diff;
                    std::array<double, 4> p{b0, beta, l_t, l_u};
                    double fx = f(p);
                    if (fx < 1e8) pool.push_back({p, fx, n, m});
                    if (fx < best_obj) {
                        best_obj = fx;
                        best_p = p;
                        best_n = n;
                        best_m = m;
                        best.best_trace.push_back(best_obj);
                    }
                }
            }
        }
    }
    if (pool.empty()) throw NoFeasibleDesign("no feasible cell in the search grid");

    std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
        if (a.fx != b.fx) return a.fx < b.fx;
        if (a.n_circ != b.n_circ) return a.n_circ < b.n_circ;
        if (a.n_width != b.n_width) return a.n_width < b.n_width;
        return a.p < b.p;
    });

    const int refine = std::min<int>(4, static_cast<int>(pool.size()));
    for (int i = 0; i < refine && evals < target.budget; ++i) {
        const auto& c = pool[i];
        detail::DesignEval f{&evals, &target, c.n_circ, c.n_width};
        int iters = static_cast<int>((target.budget - evals) / (refine - i) / 2);
        double prev_best = best_obj;
        auto [px, fx] = detail::nelder_mead(f, c.p, 0.12, std::max(20, iters), &best.best_trace,
                                            &prev_best);
        if (fx < best_obj ||
            (fx == best_obj && std::tie(c.n_circ, c.n_width) < std::tie(best_n, best_m))) {
            best_obj = fx;
            best_p = px;
            best_n = c.n_circ;
            best_m = c.n_width;
        }
    }

    CellParams cell{best_p[2], best_p[3], best_p[0], best_p[1]};
    cell.validate();
    double lb_cap = 2.0 * best_m * cell.b;
    double theta_lo = 2.0 * std::asin(std::clamp(target.lb_min_req / lb_cap, 1e-6, 1.0));
    WheelConfig cfg{cell, best_n, best_m, std::min(theta_lo, kPi / 2), kPi};
    best.config = cfg;
    best.report = analyze(cfg);
    best.objective = best_obj;
    best.iterations = evals;
    best.converged = std::sqrt(best_obj) <= target.tolerance;
    return best;
}

} // namespace oriwheel

#endif // ORIWHEEL_DESIGN_HPP
