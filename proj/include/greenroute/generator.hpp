#pragma once

// Seeded synthetic cities: a bidirectional n x n grid whose node elevations
// are a sum of Gaussian hills.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <tuple>
#include <vector>

#include "greenroute/network.hpp"

namespace greenroute {

struct TrafficModel {
    // Each arc's traffic speed is v_max * U[lo_fraction, hi_fraction].
    double lo_fraction = 0.3;
    double hi_fraction = 0.9;
};

struct CitySpec {
    int grid = 10;            // nodes per side
    double spacing = 200.0;   // m between neighbouring nodes
    int hills = 4;
    double amplitude = 40.0;  // m, peak height upper bound
    double v_min = kDefaultVmin;
    double v_max = kDefaultVmax;
    std::optional<TrafficModel> traffic;
    // Relative length perturbation per road, uniform in [-jitter, jitter].
    // Breaks ties between equal-length routes.
    double length_jitter = 0.0;
};

namespace detail {

// std::uniform_real_distribution is implementation-defined; this is not, so
// generated files match across toolchains.
class UnitRng {
public:
    explicit UnitRng(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace detail

inline void validate(const CitySpec& spec) {
    detail::require(spec.grid >= 2, "grid must be >= 2");
    detail::require(std::isfinite(spec.spacing) && spec.spacing > 0.0, "spacing must be > 0");
    detail::require(spec.hills >= 0, "hill count must be >= 0");
    detail::require(std::isfinite(spec.amplitude) && spec.amplitude >= 0.0,
                    "amplitude must be >= 0");
    detail::require(spec.v_min >= 0.0 && spec.v_max > 0.0 && spec.v_min <= spec.v_max,
                    "speed bounds must satisfy 0 <= v_min <= v_max, v_max > 0");
    detail::require(spec.length_jitter >= 0.0 && spec.length_jitter < 0.5,
                    "length jitter must be in [0, 0.5)");
    if (spec.traffic) {
        const auto& t = *spec.traffic;
        detail::require(t.lo_fraction > 0.0 && t.lo_fraction <= t.hi_fraction,
                        "traffic fractions must satisfy 0 < lo <= hi");
    }
}

/// Node ids are row * grid + col. Arcs are numbered in creation order: for each
/// node, its east then north neighbour, forward arc before reverse arc.
inline RoadNetwork generate_synthetic_city(std::uint64_t seed, const CitySpec& spec) {
    validate(spec);
    detail::UnitRng rng(seed);
    const int n = spec.grid;
    const double extent = spec.spacing * (n - 1);

    struct Hill {
        double cx, cy, sigma, height;
    };
    std::vector<Hill> hills;
    for (int h = 0; h < spec.hills; ++h) {
        Hill hill{};
        hill.cx = rng.uniform(0.0, extent);
        hill.cy = rng.uniform(0.0, extent);
        hill.sigma = extent * rng.uniform(0.15, 0.35);
        hill.height = spec.amplitude * rng.uniform(0.5, 1.0);
        hills.push_back(hill);
    }

    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(n) * n);
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            Node node;
            node.id = static_cast<NodeId>(row) * n + col;
            node.x = col * spec.spacing;
            node.y = row * spec.spacing;
            double elev = 0.0;
            if (spec.amplitude > 0.0) {
                for (const Hill& h : hills) {
                    const double dx = node.x - h.cx;
                    const double dy = node.y - h.cy;
                    elev += h.height * std::exp(-(dx * dx + dy * dy) / (2.0 * h.sigma * h.sigma));
                }
            }
            node.elevation = elev;
            nodes.push_back(node);
        }
    }

    std::vector<Arc> arcs;
    arcs.reserve(4u * static_cast<std::size_t>(n) * (n - 1));
    ArcId next_id = 0;
    auto add_road = [&](NodeId a, NodeId b) {
        double length = spec.spacing;
        if (spec.length_jitter > 0.0) {
            length *= 1.0 + rng.uniform(-spec.length_jitter, spec.length_jitter);
        }
        const double rise = nodes[b].elevation - nodes[a].elevation;
        for (const auto& [from, to, dz] : {std::tuple{a, b, rise}, std::tuple{b, a, -rise}}) {
            std::optional<double> traffic;
            if (spec.traffic) {
                traffic = spec.v_max * rng.uniform(spec.traffic->lo_fraction,
                                                   spec.traffic->hi_fraction);
            }
            const double grade_pct = spec.amplitude > 0.0 ? 100.0 * dz / length : 0.0;
            arcs.push_back(
                make_arc(next_id++, from, to, length, grade_pct, spec.v_min, spec.v_max, traffic));
        }
    };
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            const NodeId id = static_cast<NodeId>(row) * n + col;
            if (col + 1 < n) add_road(id, id + 1);
            if (row + 1 < n) add_road(id, id + n);
        }
    }
    return RoadNetwork(std::move(nodes), std::move(arcs));
}

}  // namespace greenroute
