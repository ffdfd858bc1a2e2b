#pragma once

// Path solvers over a RoadNetwork: shortest, fastest, greenest and asymptotic
// greenest. All four share one label-setting search whose tie-break is part
// of the contract: labels whose weights agree to 1e-12 (relative) prefer
// fewer arcs, then the lexicographically smaller arc-id sequence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <tuple>
#include <type_traits>
#include <unordered_set>
#include <utility>
#include <vector>

#include "greenroute/network.hpp"
#include "greenroute/physics.hpp"
#include "greenroute/speed.hpp"

namespace greenroute {

inline constexpr double kTieTolerance = 1e-12;

struct Path {
    NodeId source = 0;
    NodeId target = 0;
    std::vector<ArcId> arcs;

    bool operator==(const Path&) const = default;
};

struct ArcBreakdown {
    ArcId arc = 0;
    SpeedDecision speed;
    ArcCost cost;
};

struct PathMetrics {
    double distance = 0.0;  // m
    double time = 0.0;      // s
    double fuel = 0.0;      // L
    double co2 = 0.0;       // kg
    std::vector<ArcBreakdown> per_arc;
};

struct Query {
    NodeId source = 0;
    NodeId target = 0;
    VehicleParams vehicle;
    double load = 0.0;  // kg
    SpeedPolicy policy = SpeedPolicy::Dynamic;
    // Tests probing the large-payload limit switch this off.
    bool enforce_capacity = true;
};

/// True when `a` and `b` count as the same weight for tie-breaking.
inline bool weights_tie(double a, double b) {
    return std::abs(a - b) <= kTieTolerance * std::max(std::abs(a), std::abs(b));
}

inline void validate_query(const RoadNetwork& net, const Query& q) {
    detail::require(net.has_node(q.source), "unknown source node " + std::to_string(q.source));
    detail::require(net.has_node(q.target), "unknown target node " + std::to_string(q.target));
    detail::require(q.source != q.target, "source and target must differ");
    validate(q.vehicle);
    detail::require(std::isfinite(q.load) && q.load >= 0.0, "load must be >= 0");
    if (q.enforce_capacity) {
        detail::require(q.load <= q.vehicle.l_max, "load exceeds vehicle capacity");
    }
}

/// Two-level weight compared lexicographically, each level with the same
/// relative tie tolerance as scalar weights.
struct LexCost {
    double primary = 0.0;
    double secondary = 0.0;

    LexCost operator+(const LexCost& o) const { return {primary + o.primary, secondary + o.secondary}; }
    bool operator==(const LexCost&) const = default;
};

namespace detail {

inline void require_traffic_speeds(const RoadNetwork& net) {
    for (const Arc& a : net.arcs()) {
        if (!a.traffic_speed) throw MissingTrafficSpeed(a.id);
    }
}

inline bool costs_tie(double a, double b) { return weights_tie(a, b); }
inline bool costs_tie(const LexCost& a, const LexCost& b) {
    return weights_tie(a.primary, b.primary) && weights_tie(a.secondary, b.secondary);
}

// Only meaningful when the costs do not tie.
inline bool cost_less(double a, double b) { return a < b; }
inline bool cost_less(const LexCost& a, const LexCost& b) {
    if (!weights_tie(a.primary, b.primary)) return a.primary < b.primary;
    return a.secondary < b.secondary;
}

// Exact order for the priority queue.
inline bool exact_greater(double a, double b) { return a > b; }
inline bool exact_greater(const LexCost& a, const LexCost& b) {
    return std::tie(a.primary, a.secondary) > std::tie(b.primary, b.secondary);
}

/// Label-setting search from `source` to `target` over arcs accepted by
/// `allow`, with non-negative per-arc weights from `weight` (a double or a
/// LexCost). Returns nullopt when the target cannot be reached.
template <class WeightFn, class AllowFn>
std::optional<Path> label_setting(const RoadNetwork& net, NodeId source, NodeId target,
                                  WeightFn&& weight, AllowFn&& allow) {
    using Cost = std::decay_t<std::invoke_result_t<WeightFn&, const Arc&>>;
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    const std::size_t n = net.node_count();
    const auto& arcs = net.arcs();
    const std::size_t s = net.node_index(source);
    const std::size_t t = net.node_index(target);

    std::vector<Cost> cost(n, Cost{});
    std::vector<std::size_t> hops(n, kNone);
    std::vector<std::size_t> parent(n, kNone);  // arc index
    std::vector<char> settled(n, 0);

    auto sequence = [&](std::size_t node) {
        std::vector<ArcId> seq;
        for (std::size_t v = node; parent[v] != kNone; v = net.node_index(arcs[parent[v]].from)) {
            seq.push_back(arcs[parent[v]].id);
        }
        std::reverse(seq.begin(), seq.end());
        return seq;
    };

    struct Entry {
        Cost cost;
        std::size_t hops;
        std::size_t node;
        bool operator>(const Entry& o) const {
            if (!(cost == o.cost)) return exact_greater(cost, o.cost);
            if (hops != o.hops) return hops > o.hops;
            return node > o.node;
        }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
    cost[s] = Cost{};
    hops[s] = 0;
    open.push({Cost{}, 0, s});

    while (!open.empty()) {
        const Entry e = open.top();
        open.pop();
        const std::size_t u = e.node;
        if (settled[u] || !(e.cost == cost[u]) || e.hops != hops[u]) continue;
        settled[u] = 1;
        if (u == t) break;
        for (std::size_t ai : net.out(u)) {
            const Arc& a = arcs[ai];
            if (!allow(a)) continue;
            const std::size_t v = net.node_index(a.to);
            if (settled[v]) continue;
            const Cost c = cost[u] + weight(a);
            const std::size_t h = hops[u] + 1;
            bool better = false;
            if (hops[v] == kNone) {
                better = true;
            } else if (!costs_tie(c, cost[v])) {
                better = cost_less(c, cost[v]);
            } else if (h != hops[v]) {
                better = h < hops[v];
            } else {
                auto candidate = sequence(u);
                candidate.push_back(a.id);
                better = candidate < sequence(v);
            }
            if (better) {
                cost[v] = c;
                hops[v] = h;
                parent[v] = ai;
                open.push({c, h, v});
            }
        }
    }
    if (!settled[t]) return std::nullopt;
    return Path{source, target, sequence(t)};
}

inline const auto allow_all = [](const Arc&) { return true; };

}  // namespace detail

/// Minimum total length.
inline Path shortest_path(const RoadNetwork& net, NodeId source, NodeId target) {
    detail::require(net.has_node(source) && net.has_node(target), "unknown source or target node");
    detail::require(source != target, "source and target must differ");
    auto path = detail::label_setting(
        net, source, target, [](const Arc& a) { return a.length; }, detail::allow_all);
    if (!path) throw Unreachable(source, target);
    return *path;
}

/// Minimum total travel time with each arc driven at the query's policy speed.
inline Path fastest_path(const RoadNetwork& net, const Query& q) {
    validate_query(net, q);
    if (q.policy == SpeedPolicy::Traffic) detail::require_traffic_speeds(net);
    const Coefficients coef = derive_coefficients(q.vehicle);
    auto path = detail::label_setting(
        net, q.source, q.target,
        [&](const Arc& a) {
            return a.length / policy_speed(coef, q.vehicle, a, q.policy, q.load).speed;
        },
        detail::allow_all);
    if (!path) throw Unreachable(q.source, q.target);
    return *path;
}

/// Fastest path at the arcs' traffic speeds; needs no vehicle.
inline Path fastest_path_traffic(const RoadNetwork& net, NodeId source, NodeId target) {
    detail::require(net.has_node(source) && net.has_node(target), "unknown source or target node");
    detail::require(source != target, "source and target must differ");
    detail::require_traffic_speeds(net);
    auto path = detail::label_setting(
        net, source, target, [](const Arc& a) { return a.length / *a.traffic_speed; },
        detail::allow_all);
    if (!path) throw Unreachable(source, target);
    return *path;
}

/// Checks that `path` chains head-to-tail from its source to its target
/// without revisiting a node.
inline void validate_path(const RoadNetwork& net, const Path& path) {
    detail::require(!path.arcs.empty(), "path has no arcs");
    detail::require(path.source != path.target, "path source and target must differ");
    NodeId at = path.source;
    std::unordered_set<NodeId> visited{at};
    for (ArcId id : path.arcs) {
        detail::require(net.has_arc(id), "path references unknown arc " + std::to_string(id));
        const Arc& a = net.arc(id);
        detail::require(a.from == at, "arc " + std::to_string(id) + " does not continue the path");
        at = a.to;
        detail::require(visited.insert(at).second,
                        "path revisits node " + std::to_string(at));
    }
    detail::require(at == path.target, "path does not end at its target");
}

/// Distance, time, fuel and CO2 of `path` under the query's policy and load,
/// with a per-arc breakdown.
inline PathMetrics path_metrics(const RoadNetwork& net, const Path& path, const Query& q) {
    validate(q.vehicle);
    detail::require(std::isfinite(q.load) && q.load >= 0.0, "load must be >= 0");
    validate_path(net, path);
    const Coefficients coef = derive_coefficients(q.vehicle);
    PathMetrics m;
    m.per_arc.reserve(path.arcs.size());
    for (ArcId id : path.arcs) {
        const Arc& a = net.arc(id);
        ArcBreakdown b;
        b.arc = id;
        b.speed = policy_speed(coef, q.vehicle, a, q.policy, q.load);
        b.cost = arc_emissions(coef, q.vehicle, a.length, a.angle, b.speed.speed, q.load);
        m.distance += a.length;
        m.time += b.cost.time;
        m.fuel += b.cost.fuel;
        m.co2 += b.cost.co2;
        m.per_arc.push_back(b);
    }
    return m;
}

/// Minimum total CO2 for the query's payload and speed policy. Arc weights
/// depend on both and are evaluated per query.
inline std::pair<Path, PathMetrics> greenest_path(const RoadNetwork& net, const Query& q) {
    validate_query(net, q);
    if (q.policy == SpeedPolicy::Traffic) detail::require_traffic_speeds(net);
    const Coefficients coef = derive_coefficients(q.vehicle);
    auto path = detail::label_setting(
        net, q.source, q.target,
        [&](const Arc& a) {
            const double v = policy_speed(coef, q.vehicle, a, q.policy, q.load).speed;
            return arc_emissions(coef, q.vehicle, a.length, a.angle, v, q.load).co2;
        },
        detail::allow_all);
    if (!path) throw Unreachable(q.source, q.target);
    PathMetrics m = path_metrics(net, *path, q);
    return {std::move(*path), std::move(m)};
}

/// Speed used on a steep-downhill arc in the unbounded-payload limit.
inline double limit_speed(const Coefficients& coef, const Arc& a, SpeedPolicy policy) {
    switch (policy) {
        case SpeedPolicy::Static: return static_speed(coef, a.v_min, a.v_max).speed;
        case SpeedPolicy::Dynamic: return a.v_max;
        case SpeedPolicy::Traffic:
            if (!a.traffic_speed) throw MissingTrafficSpeed(a.id);
            return *a.traffic_speed;
    }
    throw InvalidArgument("unknown speed policy");
}

/// Load-independent part of an arc's fuel in the unbounded-payload limit,
/// without the c_e factor: the P term at the limit speed, plus the R term on
/// arcs that are not steep downhill (the clamp removes it on the others).
inline double limit_residual_fuel(const Coefficients& coef, const VehicleParams& vehicle,
                                  const Arc& a, SpeedPolicy policy) {
    if (is_steep_downhill(vehicle, a.angle)) return coef.p * a.length / limit_speed(coef, a, policy);
    const double v = policy_speed(coef, vehicle, a, policy, 0.0).speed;
    return coef.p * a.length / v + coef.r * a.length * v * v;
}

/// The path that greenest_path converges to as the payload grows without
/// bound. If the target can be reached using steep-downhill arcs only, that
/// is the fastest such path; otherwise it minimises total augmented ascent,
/// with equal-ascent paths ranked by their load-independent fuel.
inline Path asymptotic_greenest_path(const RoadNetwork& net, NodeId source, NodeId target,
                                     const VehicleParams& vehicle, SpeedPolicy policy) {
    detail::require(net.has_node(source) && net.has_node(target), "unknown source or target node");
    detail::require(source != target, "source and target must differ");
    validate(vehicle);
    const Coefficients coef = derive_coefficients(vehicle);
    auto downhill = detail::label_setting(
        net, source, target,
        [&](const Arc& a) { return a.length / limit_speed(coef, a, policy); },
        [&](const Arc& a) { return is_steep_downhill(vehicle, a.angle); });
    if (downhill) return *downhill;
    auto climb = detail::label_setting(
        net, source, target,
        [&](const Arc& a) {
            return LexCost{augmented_ascent(a.length, a.angle, vehicle.c_r),
                           limit_residual_fuel(coef, vehicle, a, policy)};
        },
        detail::allow_all);
    if (!climb) throw Unreachable(source, target);
    return *climb;
}

}  // namespace greenroute
