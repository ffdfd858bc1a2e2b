#pragma once

// Road network model: nodes with elevation, directed arcs carrying length,
// grade, speed bounds and an optional traffic speed. Parallel arcs are allowed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "greenroute/errors.hpp"

namespace greenroute {

inline constexpr double kMaxGradePct = 10.0;
inline constexpr double kDefaultVmin = 5.56;  // m/s, 20 km/h
inline constexpr double kDefaultVmax = 25.0;  // m/s, 90 km/h
inline constexpr double kDefaultRollingResistance = 0.01;

using NodeId = std::int64_t;
using ArcId = std::int64_t;

struct Node {
    NodeId id = 0;
    double x = 0.0;
    double y = 0.0;
    double elevation = 0.0;

    bool operator==(const Node&) const = default;
};

struct Arc {
    ArcId id = 0;
    NodeId from = 0;
    NodeId to = 0;
    double length = 0.0;     // m
    double grade_pct = 0.0;  // 100 * tan(angle), within [-10, 10] after clipping
    double angle = 0.0;      // rad, atan(grade_pct / 100)
    double v_min = kDefaultVmin;
    double v_max = kDefaultVmax;
    std::optional<double> traffic_speed;
    double augmented_ascent = 0.0;  // m

    double grade() const { return grade_pct / 100.0; }

    bool operator==(const Arc&) const = default;
};

inline double clip_grade_pct(double grade_pct) {
    return std::clamp(grade_pct, -kMaxGradePct, kMaxGradePct);
}

inline double angle_from_grade_pct(double grade_pct) { return std::atan(grade_pct / 100.0); }

/// length * max(0, sin(angle + atan c_r)): the climb an arc costs once the
/// rolling resistance is folded into the slope.
inline double augmented_ascent(double length, double angle, double c_r) {
    return length * std::max(0.0, std::sin(angle + std::atan(c_r)));
}

/// Builds an arc with angle and augmented ascent derived from `grade_pct`,
/// which is clipped to the supported range first.
inline Arc make_arc(ArcId id, NodeId from, NodeId to, double length, double grade_pct,
                    double v_min = kDefaultVmin, double v_max = kDefaultVmax,
                    std::optional<double> traffic_speed = std::nullopt,
                    double c_r = kDefaultRollingResistance) {
    Arc a;
    a.id = id;
    a.from = from;
    a.to = to;
    a.length = length;
    a.grade_pct = clip_grade_pct(grade_pct);
    a.angle = angle_from_grade_pct(a.grade_pct);
    a.v_min = v_min;
    a.v_max = v_max;
    a.traffic_speed = traffic_speed;
    a.augmented_ascent = augmented_ascent(length, a.angle, c_r);
    return a;
}

/// Directed multigraph. Nodes and arcs are kept sorted by id; `out(node)`
/// lists outgoing arc indices in ascending arc-id order.
class RoadNetwork {
public:
    RoadNetwork() = default;

    /// Throws InvalidArgument on duplicate ids or dangling arc endpoints.
    RoadNetwork(std::vector<Node> nodes, std::vector<Arc> arcs)
        : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
        std::sort(nodes_.begin(), nodes_.end(),
                  [](const Node& a, const Node& b) { return a.id < b.id; });
        std::sort(arcs_.begin(), arcs_.end(),
                  [](const Arc& a, const Arc& b) { return a.id < b.id; });
        node_index_.reserve(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (!node_index_.emplace(nodes_[i].id, i).second) {
                throw InvalidArgument("duplicate node id " + std::to_string(nodes_[i].id));
            }
        }
        out_.assign(nodes_.size(), {});
        arc_index_.reserve(arcs_.size());
        for (std::size_t i = 0; i < arcs_.size(); ++i) {
            const Arc& a = arcs_[i];
            if (!arc_index_.emplace(a.id, i).second) {
                throw InvalidArgument("duplicate arc id " + std::to_string(a.id));
            }
            if (!has_node(a.from) || !has_node(a.to)) {
                throw InvalidArgument("arc " + std::to_string(a.id) + " references missing node " +
                                      std::to_string(has_node(a.from) ? a.to : a.from));
            }
            out_[node_index_.at(a.from)].push_back(i);
        }
    }

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t arc_count() const { return arcs_.size(); }

    bool has_node(NodeId id) const { return node_index_.count(id) != 0; }
    bool has_arc(ArcId id) const { return arc_index_.count(id) != 0; }

    std::size_t node_index(NodeId id) const {
        auto it = node_index_.find(id);
        if (it == node_index_.end()) throw InvalidArgument("unknown node " + std::to_string(id));
        return it->second;
    }
    std::size_t arc_index(ArcId id) const {
        auto it = arc_index_.find(id);
        if (it == arc_index_.end()) throw InvalidArgument("unknown arc " + std::to_string(id));
        return it->second;
    }

    const Node& node(NodeId id) const { return nodes_[node_index(id)]; }
    const Arc& arc(ArcId id) const { return arcs_[arc_index(id)]; }

    /// Indices into arcs() of the arcs leaving the node at `node_idx`.
    const std::vector<std::size_t>& out(std::size_t node_idx) const { return out_[node_idx]; }

    bool all_arcs_have_traffic_speed() const {
        return std::all_of(arcs_.begin(), arcs_.end(),
                           [](const Arc& a) { return a.traffic_speed.has_value(); });
    }

    bool operator==(const RoadNetwork& other) const {
        return nodes_ == other.nodes_ && arcs_ == other.arcs_;
    }

private:
    std::vector<Node> nodes_;
    std::vector<Arc> arcs_;
    std::unordered_map<NodeId, std::size_t> node_index_;
    std::unordered_map<ArcId, std::size_t> arc_index_;
    std::vector<std::vector<std::size_t>> out_;
};

struct Violation {
    std::string subject;  // "arc 12" or "node 3"
    std::string rule;

    bool operator==(const Violation&) const = default;
};

/// Checks every node and arc invariant. Returns an empty list for a valid
/// network; never throws.
inline std::vector<Violation> validate_network(const RoadNetwork& net,
                                               double c_r = kDefaultRollingResistance) {
    std::vector<Violation> out;
    auto arc_subject = [](const Arc& a) { return "arc " + std::to_string(a.id); };
    for (const Node& n : net.nodes()) {
        if (!std::isfinite(n.x) || !std::isfinite(n.y) || !std::isfinite(n.elevation)) {
            out.push_back({"node " + std::to_string(n.id), "non-finite coordinate or elevation"});
        }
    }
    for (const Arc& a : net.arcs()) {
        if (!net.has_node(a.from) || !net.has_node(a.to)) {
            out.push_back({arc_subject(a), "endpoint does not exist"});
        }
        if (!(std::isfinite(a.length) && a.length > 0.0)) {
            out.push_back({arc_subject(a), "length must be > 0"});
        }
        if (!(std::abs(a.grade_pct) <= kMaxGradePct)) {
            out.push_back({arc_subject(a), "grade outside clipping range [-10%, 10%]"});
        }
        if (!(std::abs(std::tan(a.angle)) <= kMaxGradePct / 100.0 + 1e-12) ||
            a.angle != angle_from_grade_pct(a.grade_pct)) {
            out.push_back({arc_subject(a), "angle inconsistent with grade or out of range"});
        }
        if (!(a.v_min >= 0.0 && a.v_min <= a.v_max && std::isfinite(a.v_max) && a.v_max > 0.0)) {
            out.push_back({arc_subject(a), "speed bounds must satisfy 0 <= v_min <= v_max"});
        }
        if (a.traffic_speed && !(std::isfinite(*a.traffic_speed) && *a.traffic_speed > 0.0)) {
            out.push_back({arc_subject(a), "traffic speed must be > 0"});
        }
        if (std::isfinite(a.length) && std::isfinite(a.angle) &&
            a.augmented_ascent != augmented_ascent(a.length, a.angle, c_r)) {
            out.push_back({arc_subject(a), "augmented ascent inconsistent with length and angle"});
        }
    }
    return out;
}

/// Copy with v_max set to each arc's traffic speed and v_min set to zero, the
/// bounds used for experiments under congestion.
inline RoadNetwork with_traffic_bounds(const RoadNetwork& net) {
    std::vector<Arc> arcs = net.arcs();
    for (Arc& a : arcs) {
        if (!a.traffic_speed) throw MissingTrafficSpeed(a.id);
        a.v_max = *a.traffic_speed;
        a.v_min = 0.0;
    }
    return RoadNetwork(net.nodes(), std::move(arcs));
}

}  // namespace greenroute
