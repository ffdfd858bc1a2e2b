#pragma once

// Per-arc speed choice. The static policy clamps the unconstrained optimum c_v
// into the arc's bounds; the dynamic policy clamps max(c_v, terminal velocity),
// which is the exact minimiser of the clamped fuel model on every arc.

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "greenroute/network.hpp"
#include "greenroute/physics.hpp"

namespace greenroute {

enum class SpeedRegime { ClampedMin, Interior, ClampedMax, Imposed };

enum class SpeedPolicy { Static, Dynamic, Traffic };

struct SpeedDecision {
    double speed = 0.0;     // m/s
    SpeedRegime regime = SpeedRegime::Interior;
    double terminal = 0.0;  // terminal velocity considered, 0 for static/traffic
};

inline std::string_view to_string(SpeedPolicy p) {
    switch (p) {
        case SpeedPolicy::Static: return "static";
        case SpeedPolicy::Dynamic: return "dynamic";
        case SpeedPolicy::Traffic: return "traffic";
    }
    return "?";
}

inline std::string_view to_string(SpeedRegime r) {
    switch (r) {
        case SpeedRegime::ClampedMin: return "clamped-min";
        case SpeedRegime::Interior: return "interior";
        case SpeedRegime::ClampedMax: return "clamped-max";
        case SpeedRegime::Imposed: return "imposed";
    }
    return "?";
}

inline SpeedPolicy parse_speed_policy(std::string_view s) {
    if (s == "static" || s == "s") return SpeedPolicy::Static;
    if (s == "dynamic" || s == "d") return SpeedPolicy::Dynamic;
    if (s == "traffic" || s == "f") return SpeedPolicy::Traffic;
    throw InvalidArgument("unknown speed policy '" + std::string(s) + "'");
}

namespace detail {

inline void check_bounds(double v_min, double v_max) {
    require(std::isfinite(v_max) && v_max > 0.0, "v_max must be > 0");
    require(std::isfinite(v_min) && v_min >= 0.0 && v_min <= v_max,
            "speed bounds must satisfy 0 <= v_min <= v_max");
}

/// Three-case clamp of a preferred speed. With v_min = 0 the lower case
/// cannot fire because the preferred speed is always positive.
inline SpeedDecision clamp_preferred(double preferred, double v_min, double v_max) {
    SpeedDecision d;
    if (preferred <= v_min) {
        d.speed = v_min;
        d.regime = SpeedRegime::ClampedMin;
    } else if (preferred <= v_max) {
        d.speed = preferred;
        d.regime = SpeedRegime::Interior;
    } else {
        d.speed = v_max;
        d.regime = SpeedRegime::ClampedMax;
    }
    return d;
}

}  // namespace detail

inline SpeedDecision static_speed(const Coefficients& coef, double v_min, double v_max) {
    detail::check_bounds(v_min, v_max);
    return detail::clamp_preferred(coef.c_v, v_min, v_max);
}

inline SpeedDecision dynamic_speed(const Coefficients& coef, const VehicleParams& vp, double angle,
                                   double load, double v_min, double v_max) {
    detail::check_bounds(v_min, v_max);
    const double terminal = terminal_velocity(coef, vp, angle, load);
    SpeedDecision d = detail::clamp_preferred(std::max(coef.c_v, terminal), v_min, v_max);
    d.terminal = terminal;
    return d;
}

/// Speed driven on `arc` under `policy`. Traffic requires a traffic speed.
inline SpeedDecision policy_speed(const Coefficients& coef, const VehicleParams& vp,
                                  const Arc& arc, SpeedPolicy policy, double load) {
    switch (policy) {
        case SpeedPolicy::Static:
            return static_speed(coef, arc.v_min, arc.v_max);
        case SpeedPolicy::Dynamic:
            return dynamic_speed(coef, vp, arc.angle, load, arc.v_min, arc.v_max);
        case SpeedPolicy::Traffic:
            if (!arc.traffic_speed) throw MissingTrafficSpeed(arc.id);
            return SpeedDecision{*arc.traffic_speed, SpeedRegime::Imposed, 0.0};
    }
    throw InvalidArgument("unknown speed policy");
}

/// Smallest payload from which every steep-downhill arc of `net` is driven at
/// its v_max under the dynamic policy. Zero when no such arc exists or when
/// the curb weight alone already suffices.
///
/// The closed form R v_max^2 / (-Q (g sin + C_r g cos)) - w can land an ulp
/// short of the regime after rounding, so each candidate is nudged upward
/// until the terminal velocity actually reaches v_max.
inline double asymptotic_load_threshold(const Coefficients& coef, const VehicleParams& vp,
                                        const RoadNetwork& net) {
    double threshold = 0.0;
    for (const Arc& a : net.arcs()) {
        if (!is_steep_downhill(vp, a.angle)) continue;
        const double pull = -coef.q * detail::grade_force(vp, a.angle);
        double load = std::max(0.0, coef.r * a.v_max * a.v_max / pull - vp.w);
        for (int i = 0; i < 64 && terminal_velocity(coef, vp, a.angle, load) < a.v_max; ++i) {
            load = std::nextafter(load, std::numeric_limits<double>::infinity());
        }
        while (terminal_velocity(coef, vp, a.angle, load) < a.v_max) {
            load = load * (1.0 + 1e-12) + 1e-9;
        }
        threshold = std::max(threshold, load);
    }
    return threshold;
}

}  // namespace greenroute
