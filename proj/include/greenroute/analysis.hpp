#pragma once

// Comparison ratios between path-speed policies, origin-destination features,
// and the factorial sweep over (OD pair, truck, payload, ratio).
//
// A ratio is written KIND(path/speed->path/speed), e.g. E(sp/s->g/d) for the
// CO2 reduction of the dynamic-speed greenest path over the static-speed
// shortest path. KIND is E (% CO2 reduction), delta (% of the first path's
// length not shared with the second) or t (% travel time increase).
// Path codes: sp shortest, fp fastest, g greenest, gf greenest assuming
// traffic speed, inf asymptotic greenest. Speed codes: s static, d dynamic,
// f traffic.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "greenroute/network.hpp"
#include "greenroute/physics.hpp"
#include "greenroute/routing.hpp"
#include "greenroute/speed.hpp"

namespace greenroute {

inline double emission_reduction_ratio(double e1, double e2) {
    detail::require(std::isfinite(e1) && e1 > 0.0, "reference emissions must be > 0");
    detail::require(std::isfinite(e2), "emissions must be finite");
    return 100.0 * (e1 - e2) / e1;
}

/// Length-weighted share of `p1` that `p2` does not use.
inline double path_distinction_ratio(const Path& p1, const Path& p2, const RoadNetwork& net) {
    detail::require(!p1.arcs.empty(), "first path must not be empty");
    const std::unordered_set<ArcId> shared(p2.arcs.begin(), p2.arcs.end());
    double total = 0.0;
    double distinct = 0.0;
    for (ArcId id : p1.arcs) {
        const double len = net.arc(id).length;
        total += len;
        if (!shared.count(id)) distinct += len;
    }
    return 100.0 * distinct / total;
}

inline double time_increase_ratio(double t1, double t2) {
    detail::require(std::isfinite(t1) && t1 > 0.0, "reference time must be > 0");
    detail::require(std::isfinite(t2), "time must be finite");
    return 100.0 * (t2 - t1) / t1;
}

struct OdFeatures {
    double delta_h = 0.0;      // m, target minus source elevation
    double dist_sp = 0.0;      // m
    double sigma_grade = 0.0;  // population std of per-arc grades on the shortest path
};

inline OdFeatures od_features(const RoadNetwork& net, NodeId source, NodeId target) {
    const Path sp = shortest_path(net, source, target);
    OdFeatures f;
    f.delta_h = net.node(target).elevation - net.node(source).elevation;
    std::vector<double> grades;
    for (ArcId id : sp.arcs) {
        const Arc& a = net.arc(id);
        f.dist_sp += a.length;
        grades.push_back(a.grade());
    }
    const double mean = std::accumulate(grades.begin(), grades.end(), 0.0) / grades.size();
    double ss = 0.0;
    for (double g : grades) ss += (g - mean) * (g - mean);
    f.sigma_grade = std::sqrt(ss / grades.size());
    return f;
}

enum class PathKind { Shortest, Fastest, Greenest, GreenestUnderTraffic, Asymptotic };

enum class RatioKind { Emissions, Distinction, Time };

/// One side of a comparison: which path to take and how to drive it.
struct PathSpeed {
    PathKind path = PathKind::Shortest;
    SpeedPolicy speed = SpeedPolicy::Static;

    bool operator==(const PathSpeed&) const = default;
    bool operator<(const PathSpeed& o) const {
        return std::tie(path, speed) < std::tie(o.path, o.speed);
    }
};

/// A path-speed policy at a concrete payload.
struct PolicyTriple {
    PathKind path = PathKind::Shortest;
    SpeedPolicy speed = SpeedPolicy::Static;
    double load = 0.0;
};

struct RatioSpec {
    RatioKind kind = RatioKind::Emissions;
    PathSpeed first;
    PathSpeed second;

    bool operator==(const RatioSpec&) const = default;
};

inline std::string_view path_code(PathKind k) {
    switch (k) {
        case PathKind::Shortest: return "sp";
        case PathKind::Fastest: return "fp";
        case PathKind::Greenest: return "g";
        case PathKind::GreenestUnderTraffic: return "gf";
        case PathKind::Asymptotic: return "inf";
    }
    return "?";
}

inline std::string_view speed_code(SpeedPolicy p) {
    switch (p) {
        case SpeedPolicy::Static: return "s";
        case SpeedPolicy::Dynamic: return "d";
        case SpeedPolicy::Traffic: return "f";
    }
    return "?";
}

inline PathKind parse_path_kind(std::string_view s) {
    if (s == "sp" || s == "shortest") return PathKind::Shortest;
    if (s == "fp" || s == "fastest") return PathKind::Fastest;
    if (s == "g" || s == "greenest") return PathKind::Greenest;
    if (s == "gf" || s == "greenest-traffic") return PathKind::GreenestUnderTraffic;
    if (s == "inf" || s == "asymptotic") return PathKind::Asymptotic;
    throw InvalidArgument("unknown path kind '" + std::string(s) + "'");
}

inline std::string ratio_name(const RatioSpec& r) {
    std::string out;
    switch (r.kind) {
        case RatioKind::Emissions: out = "E"; break;
        case RatioKind::Distinction: out = "delta"; break;
        case RatioKind::Time: out = "t"; break;
    }
    out += "(";
    out += path_code(r.first.path);
    out += "/";
    out += speed_code(r.first.speed);
    out += "->";
    out += path_code(r.second.path);
    out += "/";
    out += speed_code(r.second.speed);
    out += ")";
    return out;
}

inline RatioSpec parse_ratio(std::string_view name) {
    auto fail = [&] { return InvalidArgument("malformed ratio '" + std::string(name) + "'"); };
    const auto open = name.find('(');
    if (open == std::string_view::npos || name.empty() || name.back() != ')') throw fail();
    RatioSpec r;
    const auto kind = name.substr(0, open);
    if (kind == "E") {
        r.kind = RatioKind::Emissions;
    } else if (kind == "delta") {
        r.kind = RatioKind::Distinction;
    } else if (kind == "t") {
        r.kind = RatioKind::Time;
    } else {
        throw fail();
    }
    const auto body = name.substr(open + 1, name.size() - open - 2);
    const auto arrow = body.find("->");
    if (arrow == std::string_view::npos) throw fail();
    auto side = [&](std::string_view s) {
        const auto slash = s.find('/');
        if (slash == std::string_view::npos) throw fail();
        return PathSpeed{parse_path_kind(s.substr(0, slash)), parse_speed_policy(s.substr(slash + 1))};
    };
    r.first = side(body.substr(0, arrow));
    r.second = side(body.substr(arrow + 2));
    return r;
}

/// Ratios of the free-flow study.
inline std::vector<RatioSpec> free_flow_ratios() {
    std::vector<RatioSpec> out;
    for (const char* n : {"E(sp/s->g/d)", "E(sp/s->g/s)", "E(sp/d->g/d)", "E(g/s->g/d)",
                          "E(sp/d->inf/d)", "E(sp/s->inf/s)", "E(g/d->inf/d)", "E(g/s->inf/s)",
                          "delta(sp/d->g/d)", "delta(sp/s->g/s)", "delta(g/d->g/s)",
                          "delta(g/d->inf/d)", "delta(g/s->inf/s)"}) {
        out.push_back(parse_ratio(n));
    }
    return out;
}

/// Additional ratios when every arc carries a traffic speed.
inline std::vector<RatioSpec> traffic_ratios() {
    std::vector<RatioSpec> out;
    for (const char* n : {"E(fp/f->g/d)", "E(fp/f->g/s)", "E(fp/d->g/d)", "E(fp/s->g/s)",
                          "E(fp/d->gf/d)", "E(gf/d->g/d)", "E(fp/d->inf/d)", "delta(fp/f->g/d)",
                          "delta(fp/f->g/s)", "t(fp/f->g/d)", "t(fp/d->g/d)", "t(fp/f->g/s)",
                          "t(fp/s->g/s)", "t(fp/f->gf/f)"}) {
        out.push_back(parse_ratio(n));
    }
    return out;
}

inline bool needs_traffic(const PathSpeed& ps) {
    return ps.speed == SpeedPolicy::Traffic || ps.path == PathKind::GreenestUnderTraffic;
}

inline bool needs_traffic(const RatioSpec& r) {
    return needs_traffic(r.first) || needs_traffic(r.second);
}

/// Path selected by `ps` for one OD pair, truck and payload. The fastest path
/// is chosen at traffic speeds when the network has them, otherwise under the
/// evaluation policy.
inline Path select_path(const RoadNetwork& net, NodeId source, NodeId target,
                        const VehicleParams& vehicle, double load, const PathSpeed& ps) {
    Query q{source, target, vehicle, load, ps.speed, true};
    switch (ps.path) {
        case PathKind::Shortest:
            return shortest_path(net, source, target);
        case PathKind::Fastest:
            if (net.all_arcs_have_traffic_speed()) return fastest_path_traffic(net, source, target);
            return fastest_path(net, q);
        case PathKind::Greenest:
            return greenest_path(net, q).first;
        case PathKind::GreenestUnderTraffic:
            q.policy = SpeedPolicy::Traffic;
            return greenest_path(net, q).first;
        case PathKind::Asymptotic:
            return asymptotic_greenest_path(net, source, target, vehicle, ps.speed);
    }
    throw InvalidArgument("unknown path kind");
}

struct ReportRow {
    NodeId od_source = 0;
    NodeId od_target = 0;
    std::string truck;
    double load_pct = 0.0;
    std::string ratio;
    double value = 0.0;
    OdFeatures features;
};

struct CellError {
    NodeId od_source = 0;
    NodeId od_target = 0;
    std::string truck;
    double load_pct = 0.0;
    std::string message;
};

struct ComparisonReport {
    std::string net;
    std::vector<ReportRow> rows;
    std::vector<CellError> errors;
};

struct SweepOptions {
    std::size_t threads = 1;
};

/// Every ratio of one (OD, truck, payload) cell. Paths and metrics are shared
/// across the cell's ratios.
inline std::vector<ReportRow> evaluate_cell(const RoadNetwork& net, NodeId source, NodeId target,
                                            const VehicleParams& vehicle, double load_pct,
                                            const std::vector<RatioSpec>& ratios,
                                            const OdFeatures& features) {
    const double load = vehicle.l_max * load_pct / 100.0;
    std::map<PathSpeed, std::pair<Path, PathMetrics>> cache;
    auto resolve = [&](const PathSpeed& ps) -> const std::pair<Path, PathMetrics>& {
        auto it = cache.find(ps);
        if (it != cache.end()) return it->second;
        Path p = select_path(net, source, target, vehicle, load, ps);
        const Query q{source, target, vehicle, load, ps.speed, true};
        PathMetrics m = path_metrics(net, p, q);
        return cache.emplace(ps, std::pair{std::move(p), std::move(m)}).first->second;
    };
    std::vector<ReportRow> rows;
    rows.reserve(ratios.size());
    for (const RatioSpec& r : ratios) {
        const auto& [p1, m1] = resolve(r.first);
        const auto& [p2, m2] = resolve(r.second);
        ReportRow row{source, target, vehicle.name, load_pct, ratio_name(r), 0.0, features};
        switch (r.kind) {
            case RatioKind::Emissions: row.value = emission_reduction_ratio(m1.co2, m2.co2); break;
            case RatioKind::Distinction: row.value = path_distinction_ratio(p1, p2, net); break;
            case RatioKind::Time: row.value = time_increase_ratio(m1.time, m2.time); break;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Full factorial over OD pairs x vehicles x payloads (percent of each
/// vehicle's capacity) x ratios. Cells run in parallel when
/// `options.threads > 1`; the report is identical for any thread count.
/// Failing cells are recorded in `errors` and the sweep continues.
inline ComparisonReport run_sweep(const RoadNetwork& net, const std::string& net_name,
                                  const std::vector<std::pair<NodeId, NodeId>>& ods,
                                  const std::vector<VehicleParams>& vehicles,
                                  const std::vector<double>& loads_pct,
                                  const std::vector<RatioSpec>& ratios,
                                  const SweepOptions& options = {}) {
    detail::require(!ods.empty(), "sweep needs at least one OD pair");
    detail::require(!vehicles.empty(), "sweep needs at least one vehicle");
    detail::require(!loads_pct.empty(), "sweep needs at least one payload");
    detail::require(!ratios.empty(), "sweep needs at least one ratio");
    for (const auto& v : vehicles) validate(v);
    for (double pct : loads_pct) {
        detail::require(std::isfinite(pct) && pct >= 0.0 && pct <= 100.0,
                        "payload percentages must lie in [0, 100]");
    }
    const bool has_traffic = net.all_arcs_have_traffic_speed();
    for (const auto& r : ratios) {
        detail::require(!needs_traffic(r) || has_traffic,
                        "ratio " + ratio_name(r) + " needs traffic speeds on every arc");
    }
    std::vector<OdFeatures> features;
    features.reserve(ods.size());
    for (const auto& [s, t] : ods) {
        detail::require(net.has_node(s) && net.has_node(t),
                        "OD pair references unknown node");
        detail::require(s != t, "OD pair source and target must differ");
        features.push_back(od_features(net, s, t));  // throws Unreachable
    }

    struct Cell {
        std::size_t od, vehicle, load;
    };
    std::vector<Cell> cells;
    for (std::size_t o = 0; o < ods.size(); ++o) {
        for (std::size_t v = 0; v < vehicles.size(); ++v) {
            for (std::size_t l = 0; l < loads_pct.size(); ++l) cells.push_back({o, v, l});
        }
    }
    std::vector<std::vector<ReportRow>> results(cells.size());
    std::vector<std::optional<std::string>> failures(cells.size());
    auto run_cell = [&](std::size_t i) {
        const Cell& c = cells[i];
        try {
            results[i] = evaluate_cell(net, ods[c.od].first, ods[c.od].second,
                                       vehicles[c.vehicle], loads_pct[c.load], ratios,
                                       features[c.od]);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, cells.size()));
    if (threads == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
            });
        }
        for (auto& th : pool) th.join();
    }

    ComparisonReport report;
    report.net = net_name;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Cell& c = cells[i];
        if (failures[i]) {
            report.errors.push_back({ods[c.od].first, ods[c.od].second, vehicles[c.vehicle].name,
                                     loads_pct[c.load], *failures[i]});
            continue;
        }
        for (auto& row : results[i]) report.rows.push_back(std::move(row));
    }
    return report;
}

/// Inclusive linear-interpolation quantile of sorted data, p in [0, 1].
inline double quantile_inclusive(const std::vector<double>& sorted, double p) {
    detail::require(!sorted.empty(), "quantile of empty data");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct SummaryRow {
    std::string net;
    std::string truck;
    double load_pct = 0.0;
    std::string ratio;
    std::size_t count = 0;
    double mean = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Per (net, truck, payload, ratio) group statistics, sorted by that key.
inline std::vector<SummaryRow> summarize(const ComparisonReport& report) {
    detail::require(!report.rows.empty(), "cannot summarize an empty report");
    std::map<std::tuple<std::string, double, std::string>, std::vector<double>> groups;
    for (const auto& row : report.rows) {
        groups[{row.truck, row.load_pct, row.ratio}].push_back(row.value);
    }
    std::vector<SummaryRow> out;
    for (auto& [key, values] : groups) {
        std::sort(values.begin(), values.end());
        SummaryRow s;
        s.net = report.net;
        std::tie(s.truck, s.load_pct, s.ratio) = key;
        s.count = values.size();
        s.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
        s.min = values.front();
        s.q1 = quantile_inclusive(values, 0.25);
        s.median = quantile_inclusive(values, 0.5);
        s.q3 = quantile_inclusive(values, 0.75);
        s.max = values.back();
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace greenroute
