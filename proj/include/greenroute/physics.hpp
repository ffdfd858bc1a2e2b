#pragma once

// Truck fuel and CO2 model: vehicle constants, the derived engine/load/speed
// coefficients, the standard and clamped (improved) fuel models, travel time,
// and the terminal velocity on steep downhills.
//
// Units are SI throughout: metres, seconds, kilograms, m/s and radians.
// Fuel is in litres and CO2 in kilograms.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "greenroute/errors.hpp"

namespace greenroute {

struct VehicleParams {
    std::string name;
    double xi = 1.0;       // fuel-to-air mass ratio
    double g = 9.81;       // gravitational acceleration (m/s^2)
    double rho = 1.2041;   // air density (kg/m^3)
    double c_r = 0.01;     // rolling resistance coefficient
    double eta = 0.45;     // engine efficiency
    double eta_tf = 0.45;  // drivetrain efficiency
    double kappa = 44.0;   // heating value of diesel (kJ/g)
    double psi = 737.0;    // conversion factor g/s -> L/s
    double w = 0.0;        // curb weight (kg)
    double l_max = 0.0;    // maximum payload (kg)
    double k = 0.0;        // engine friction factor (kJ/rev/L)
    double n = 0.0;        // engine speed (rev/s)
    double d = 0.0;        // engine displacement (L)
    double c_d = 0.0;      // aerodynamic drag coefficient
    double s = 0.0;        // frontal area (m^2)
    double c_e = 2.67;     // kg CO2 per litre of diesel

    bool operator==(const VehicleParams&) const = default;
};

struct Coefficients {
    double p = 0.0;    // engine module
    double q = 0.0;    // load module
    double r = 0.0;    // speed module
    double c_v = 0.0;  // unconstrained fuel-optimal speed (m/s)
};

struct ArcCost {
    double fuel = 0.0;  // L
    double co2 = 0.0;   // kg
    double time = 0.0;  // s
};

namespace detail {

inline void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be finite");
}

}  // namespace detail

/// Named access to every numeric field, in file order. Used by the key-value
/// loader and by validation messages.
inline std::array<std::pair<std::string_view, double VehicleParams::*>, 16> vehicle_fields() {
    return {{{"xi", &VehicleParams::xi},         {"g", &VehicleParams::g},
             {"rho", &VehicleParams::rho},       {"c_r", &VehicleParams::c_r},
             {"eta", &VehicleParams::eta},       {"eta_tf", &VehicleParams::eta_tf},
             {"kappa", &VehicleParams::kappa},   {"psi", &VehicleParams::psi},
             {"w", &VehicleParams::w},           {"l_max", &VehicleParams::l_max},
             {"k", &VehicleParams::k},           {"n", &VehicleParams::n},
             {"d", &VehicleParams::d},           {"c_d", &VehicleParams::c_d},
             {"s", &VehicleParams::s},           {"c_e", &VehicleParams::c_e}}};
}

inline void validate(const VehicleParams& vp) {
    for (const auto& [key, field] : vehicle_fields()) {
        const double v = vp.*field;
        detail::require(std::isfinite(v) && v > 0.0,
                        "vehicle parameter '" + std::string(key) + "' must be finite and > 0");
    }
    detail::require(vp.c_r < 1.0, "vehicle parameter 'c_r' must be < 1");
    detail::require(vp.eta <= 1.0, "vehicle parameter 'eta' must be <= 1");
    detail::require(vp.eta_tf <= 1.0, "vehicle parameter 'eta_tf' must be <= 1");
}

// Heavy, medium and light duty diesel trucks. Shared physical constants take
// the struct defaults.
inline VehicleParams hdd() {
    VehicleParams vp;
    vp.name = "hdd";
    vp.w = 14000.0;
    vp.l_max = 26000.0;
    vp.k = 0.15;
    vp.n = 30.0;
    vp.d = 10.5;
    vp.c_d = 0.9;
    vp.s = 10.0;
    return vp;
}

inline VehicleParams mdd() {
    VehicleParams vp;
    vp.name = "mdd";
    vp.w = 5500.0;
    vp.l_max = 12500.0;
    vp.k = 0.2;
    vp.n = 36.67;
    vp.d = 6.9;
    vp.c_d = 0.7;
    vp.s = 8.0;
    return vp;
}

inline VehicleParams ldd() {
    VehicleParams vp;
    vp.name = "ldd";
    vp.w = 3500.0;
    vp.l_max = 4000.0;
    vp.k = 0.25;
    vp.n = 38.34;
    vp.d = 4.5;
    vp.c_d = 0.6;
    vp.s = 7.0;
    return vp;
}

inline std::array<VehicleParams, 3> builtin_trucks() { return {hdd(), mdd(), ldd()}; }

/// Looks up "hdd", "mdd" or "ldd" (case-sensitive).
inline VehicleParams builtin_truck(std::string_view name) {
    for (auto& vp : builtin_trucks()) {
        if (vp.name == name) return vp;
    }
    throw InvalidArgument("unknown truck '" + std::string(name) + "' (expected hdd, mdd or ldd)");
}

/// Parses `name = value` lines. Blank lines and `#` comments are skipped.
/// `base = hdd|mdd|ldd` seeds every field from a built-in truck; without it
/// all sixteen numeric keys must be present. `name = ...` sets the label.
inline VehicleParams parse_vehicle(std::istream& in, const std::string& label = "vehicle") {
    VehicleParams vp;
    vp.name = label;
    std::map<std::string, double> values;
    bool seeded = false;
    std::string line;
    int line_no = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string{};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = label + ":" + std::to_string(line_no);
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(where, "expected 'name = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "base") {
            try {
                const std::string keep = vp.name;
                vp = builtin_truck(val);
                vp.name = keep;
            } catch (const InvalidArgument& e) {
                throw ParseError(where, e.what());
            }
            seeded = true;
            continue;
        }
        if (key == "name") {
            vp.name = val;
            continue;
        }
        bool known = false;
        for (const auto& [field_key, field] : vehicle_fields()) known |= (field_key == key);
        if (!known) throw ParseError(where, "unknown key '" + key + "'");
        std::size_t used = 0;
        double parsed = 0.0;
        try {
            parsed = std::stod(val, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != val.size()) throw ParseError(where, "bad number '" + val + "'");
        values[key] = parsed;
    }
    for (const auto& [key, field] : vehicle_fields()) {
        auto it = values.find(std::string(key));
        if (it != values.end()) {
            vp.*field = it->second;
        } else if (!seeded) {
            throw ParseError(label, "missing key '" + std::string(key) + "'");
        }
    }
    validate(vp);
    return vp;
}

inline VehicleParams load_vehicle(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open file");
    return parse_vehicle(in, path);
}

inline Coefficients derive_coefficients(const VehicleParams& vp) {
    validate(vp);
    Coefficients c;
    const double fuel_scale = vp.kappa * vp.psi;
    const double drivetrain = vp.eta * vp.eta_tf * fuel_scale;
    c.p = vp.xi * vp.k * vp.n * vp.d / fuel_scale;
    c.q = vp.xi / (1000.0 * drivetrain);
    c.r = vp.xi * vp.c_d * vp.rho * vp.s / (2000.0 * drivetrain);
    c.c_v = std::cbrt(c.p / (2.0 * c.r));
    return c;
}

namespace detail {

inline void check_arc_inputs(double length, double angle, double speed, double load) {
    require_finite(length, "length");
    require_finite(angle, "angle");
    require_finite(speed, "speed");
    require_finite(load, "load");
    require(length > 0.0, "length must be > 0");
    require(speed > 0.0, "speed must be > 0");
    require(load >= 0.0, "load must be >= 0");
}

/// g sin(theta) + C_r g cos(theta): gravity plus rolling resistance per unit mass.
inline double grade_force(const VehicleParams& vp, double angle) {
    return vp.g * std::sin(angle) + vp.c_r * vp.g * std::cos(angle);
}

/// The load and speed modules together; negative on steep downhills below
/// terminal velocity.
inline double traction_term(const Coefficients& coef, const VehicleParams& vp, double length,
                            double angle, double speed, double load) {
    return coef.q * length * grade_force(vp, angle) * (vp.w + load) +
           coef.r * length * speed * speed;
}

}  // namespace detail

/// Unclamped CMEM fuel (L). Can go negative on steep downhills; kept for
/// diagnostics only.
inline double fuel_standard(const Coefficients& coef, const VehicleParams& vp, double length,
                            double angle, double speed, double load) {
    detail::check_arc_inputs(length, angle, speed, load);
    return coef.p * length / speed + detail::traction_term(coef, vp, length, angle, speed, load);
}

/// Fuel (L) with the traction term clamped at zero. Always > 0.
inline double fuel_improved(const Coefficients& coef, const VehicleParams& vp, double length,
                            double angle, double speed, double load) {
    detail::check_arc_inputs(length, angle, speed, load);
    return coef.p * length / speed +
           std::max(0.0, detail::traction_term(coef, vp, length, angle, speed, load));
}

inline double travel_time(double length, double speed) {
    detail::require_finite(length, "length");
    detail::require_finite(speed, "speed");
    detail::require(length > 0.0 && speed > 0.0, "length and speed must be > 0");
    return length / speed;
}

inline ArcCost arc_emissions(const Coefficients& coef, const VehicleParams& vp, double length,
                             double angle, double speed, double load) {
    ArcCost cost;
    cost.fuel = fuel_improved(coef, vp, length, angle, speed, load);
    cost.co2 = vp.c_e * cost.fuel;
    cost.time = length / speed;
    return cost;
}

/// True when tan(angle) < -C_r, i.e. gravity alone overcomes rolling resistance.
inline bool is_steep_downhill(const VehicleParams& vp, double angle) {
    return std::tan(angle) < -vp.c_r;
}

/// Speed at which gravity along the slope balances drag plus rolling
/// resistance; zero unless the arc is a steep downhill.
inline double terminal_velocity(const Coefficients& coef, const VehicleParams& vp, double angle,
                                double load) {
    detail::require_finite(angle, "angle");
    detail::require_finite(load, "load");
    detail::require(load >= 0.0, "load must be >= 0");
    if (!is_steep_downhill(vp, angle)) return 0.0;
    const double pull = -coef.q * detail::grade_force(vp, angle) * (vp.w + load);
    return std::sqrt(std::max(0.0, pull / coef.r));
}

}  // namespace greenroute
