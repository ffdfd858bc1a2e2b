#pragma once

// Brute-force references for the test suites only: exhaustive simple-path
// enumeration and grid search over speeds. Nothing here calls the routing
// solvers or the closed-form speed rules.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "greenroute/network.hpp"
#include "greenroute/physics.hpp"
#include "greenroute/routing.hpp"

namespace greenroute::oracle {

struct OracleConfig {
    std::size_t max_nodes = 12;
    double speed_grid_step = 1e-3;  // m/s
};

class NetworkTooLarge : public Error {
public:
    explicit NetworkTooLarge(std::size_t nodes)
        : Error("oracle supports at most 12 nodes, got " + std::to_string(nodes)) {}
};

struct Best {
    Path path;
    double cost = 0.0;
};

using ArcCostFn = std::function<double(const Arc&)>;

/// Depth-first enumeration of every simple source-target path. Costs are
/// accumulated in path order. Ties within 1e-12 relative prefer fewer arcs,
/// then the lexicographically smaller arc-id sequence.
inline std::optional<Best> enumerate_paths_bruteforce(const RoadNetwork& net, NodeId source,
                                                      NodeId target, const ArcCostFn& cost,
                                                      const OracleConfig& config = {}) {
    if (net.node_count() > config.max_nodes || config.max_nodes > 12) {
        throw NetworkTooLarge(net.node_count());
    }
    std::optional<Best> best;
    std::vector<ArcId> stack;
    std::vector<char> on_path(net.node_count(), 0);

    auto better = [](double c, const std::vector<ArcId>& seq, const Best& b) {
        const double tol = 1e-12 * std::max(std::abs(c), std::abs(b.cost));
        if (std::abs(c - b.cost) > tol) return c < b.cost;
        if (seq.size() != b.path.arcs.size()) return seq.size() < b.path.arcs.size();
        return seq < b.path.arcs;
    };

    std::function<void(NodeId, double)> dfs = [&](NodeId at, double so_far) {
        if (at == target) {
            if (!best || better(so_far, stack, *best)) best = Best{{source, target, stack}, so_far};
            return;
        }
        const std::size_t idx = net.node_index(at);
        on_path[idx] = 1;
        for (const Arc& a : net.arcs()) {
            if (a.from != at || on_path[net.node_index(a.to)]) continue;
            stack.push_back(a.id);
            dfs(a.to, so_far + cost(a));
            stack.pop_back();
        }
        on_path[idx] = 0;
    };
    dfs(source, 0.0);
    return best;
}

/// Grid {v_min (or step when v_min = 0), v_min + step, ...} up to v_max. The
/// last point snaps to v_max when it lands within a millionth of a step. A
/// step wider than the band yields only the first point.
inline std::vector<double> speed_grid(double v_min, double v_max, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
    const double start = v_min > 0.0 ? v_min : step;
    std::vector<double> grid;
    if (start > v_max) return {v_max};  // v_min = 0 and step > v_max
    const auto count = static_cast<std::size_t>(std::floor((v_max - start) / step + 1e-9));
    for (std::size_t k = 0; k <= count; ++k) grid.push_back(std::min(start + k * step, v_max));
    if (v_max - grid.back() < 1e-6 * step) grid.back() = v_max;
    return grid;
}

/// Grid point with the least clamped-model fuel on `arc` at `load`.
inline double grid_search_speed(const Coefficients& coef, const VehicleParams& vp, const Arc& arc,
                                double load, double step) {
    double best_v = 0.0;
    double best_f = std::numeric_limits<double>::infinity();
    for (double v : speed_grid(arc.v_min, arc.v_max, step)) {
        const double f = fuel_improved(coef, vp, arc.length, arc.angle, v, load);
        if (f < best_f) {
            best_f = f;
            best_v = v;
        }
    }
    return best_v;
}

/// Minimiser of a unimodal function on [lo, hi] by repeated grid refinement
/// around the best point, down to an interval of 1e-13 m/s.
inline double refine_minimum(const std::function<double(double)>& f, double lo, double hi) {
    double best = lo;
    for (int round = 0; round < 60 && hi - lo > 1e-13; ++round) {
        constexpr int kPoints = 200;
        const double step = (hi - lo) / kPoints;
        double best_f = std::numeric_limits<double>::infinity();
        int best_k = 0;
        for (int k = 0; k <= kPoints; ++k) {
            const double v = k == kPoints ? hi : lo + k * step;
            const double fv = f(v);
            if (fv < best_f) {
                best_f = fv;
                best_k = k;
            }
        }
        best = best_k == kPoints ? hi : lo + best_k * step;
        const double new_lo = best_k == 0 ? lo : lo + (best_k - 1) * step;
        const double new_hi = best_k >= kPoints - 1 ? hi : lo + (best_k + 1) * step;
        lo = new_lo;
        hi = new_hi;
    }
    return best;
}

/// Sign change of an increasing `g` on [lo, hi] by bisection, clamped to the
/// interval ends when `g` does not change sign there.
inline double bisect_sign_change(const std::function<double(double)>& g, double lo, double hi) {
    if (g(lo) >= 0.0) return lo;
    if (g(hi) <= 0.0) return hi;
    for (int i = 0; i < 2000; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Lower end of the searched speed band; an open bound of zero becomes a
/// small positive speed.
inline double search_floor(const Arc& arc) { return arc.v_min > 0.0 ? arc.v_min : 1e-3; }

/// Per-arc speed found by search: the clamped-model minimiser for the
/// dynamic policy, the flat-road slope root for the static policy, and the
/// traffic speed for the traffic policy.
inline double searched_speed(const VehicleParams& vp, const Arc& arc, SpeedPolicy policy,
                             double load) {
    const Coefficients coef = derive_coefficients(vp);
    switch (policy) {
        case SpeedPolicy::Dynamic:
            return refine_minimum(
                [&](double v) { return fuel_improved(coef, vp, arc.length, arc.angle, v, load); },
                search_floor(arc), arc.v_max);
        case SpeedPolicy::Static:
            // The flat-road curve is too shallow at its minimum for a value
            // search to pin the speed, so bisect on the sign of its slope.
            return bisect_sign_change(
                [&](double v) { return 2.0 * coef.r * v - coef.p / (v * v); }, search_floor(arc),
                arc.v_max);
        case SpeedPolicy::Traffic:
            return *arc.traffic_speed;
    }
    return 0.0;
}

/// CO2 of one arc at the searched speed.
inline double searched_arc_co2(const VehicleParams& vp, const Arc& arc, SpeedPolicy policy,
                               double load) {
    const Coefficients coef = derive_coefficients(vp);
    const double v = searched_speed(vp, arc, policy, load);
    return vp.c_e * fuel_improved(coef, vp, arc.length, arc.angle, v, load);
}

}  // namespace greenroute::oracle
