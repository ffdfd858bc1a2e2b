#pragma once

#include <optional>
#include <random>
#include <vector>

#include "greenroute/network.hpp"

namespace greenroute::fixtures {

/// Seeded random graph on `n` nodes (ids 0..n-1) with elevations in [0, 60] m
/// and lengths in [100, 900] m. A random spanning tree is added in both
/// directions, so it is strongly connected, plus up to `n` extra one-way arcs.
inline RoadNetwork random_graph(std::uint64_t seed, int n = 8, bool traffic = false) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> elev(0.0, 60.0), len(100.0, 900.0), u(0.0, 1.0);
    std::vector<Node> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back({i, 0.0, 0.0, elev(rng)});
    std::vector<Arc> arcs;
    ArcId next = 0;
    auto add = [&](int a, int b) {
        const double l = len(rng);
        const double g = 100.0 * (nodes[b].elevation - nodes[a].elevation) / l;
        std::optional<double> vt;
        if (traffic) vt = 3.0 + 20.0 * u(rng);
        arcs.push_back(make_arc(next++, a, b, l, g, kDefaultVmin, kDefaultVmax, vt));
    };
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        const int j = pick(rng);
        add(i, j);
        add(j, i);
    }
    for (int k = 0; k < n; ++k) {
        std::uniform_int_distribution<int> pick(0, n - 1);
        const int a = pick(rng), b = pick(rng);
        if (a != b) add(a, b);
    }
    return RoadNetwork(nodes, arcs);
}

}  // namespace greenroute::fixtures
