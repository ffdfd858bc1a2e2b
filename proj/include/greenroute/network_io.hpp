#pragma once

// JSON network files.
//
//   {"nodes":[{"id":1,"x":0,"y":0,"elev":12.5}, ...],
//    "arcs":[{"id":1,"from":1,"to":2,"length":100,
//             "grade_pct":-5,      optional, derived from elevations if absent
//             "vmin":5.56,         optional
//             "vmax":25.0,         optional
//             "vtraffic":11.0}]}   optional
//
// Output always carries grade_pct and the speed bounds, arcs sorted by id.

#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "greenroute/network.hpp"

namespace greenroute {

namespace detail {

inline std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

inline double json_number(const nlohmann::json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + "." + key, "missing field");
    if (!it->is_number()) throw ParseError(where + "." + key, "expected a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw ParseError(where + "." + key, "expected a finite number");
    return v;
}

inline std::int64_t json_id(const nlohmann::json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + "." + key, "missing field");
    if (!it->is_number_integer()) throw ParseError(where + "." + key, "expected an integer");
    return it->get<std::int64_t>();
}

inline std::optional<double> json_optional_number(const nlohmann::json& obj, const char* key,
                                                  const std::string& where) {
    if (!obj.contains(key)) return std::nullopt;
    return json_number(obj, key, where);
}

}  // namespace detail

/// Parses a network document. Grades are clipped to +-10% and angles and
/// augmented ascents derived. Errors name the offending record and field.
inline RoadNetwork parse_network(const std::string& text,
                                 double c_r = kDefaultRollingResistance) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("line " + std::to_string(detail::line_of_offset(text, e.byte)),
                         "malformed JSON");
    }
    if (!doc.is_object()) throw ParseError("document", "expected an object");
    if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
        throw ParseError("nodes", "missing or not an array");
    }
    if (!doc.contains("arcs") || !doc["arcs"].is_array()) {
        throw ParseError("arcs", "missing or not an array");
    }

    std::vector<Node> nodes;
    std::unordered_map<NodeId, double> elevation;
    const auto& jnodes = doc["nodes"];
    for (std::size_t i = 0; i < jnodes.size(); ++i) {
        const std::string where = "nodes[" + std::to_string(i) + "]";
        const auto& jn = jnodes[i];
        if (!jn.is_object()) throw ParseError(where, "expected an object");
        Node n;
        n.id = detail::json_id(jn, "id", where);
        n.x = detail::json_optional_number(jn, "x", where).value_or(0.0);
        n.y = detail::json_optional_number(jn, "y", where).value_or(0.0);
        n.elevation = detail::json_number(jn, "elev", where);
        if (!elevation.emplace(n.id, n.elevation).second) {
            throw ParseError(where + ".id", "duplicate node id " + std::to_string(n.id));
        }
        nodes.push_back(n);
    }

    std::vector<Arc> arcs;
    std::unordered_map<ArcId, std::size_t> seen;
    const auto& jarcs = doc["arcs"];
    for (std::size_t i = 0; i < jarcs.size(); ++i) {
        const std::string where = "arcs[" + std::to_string(i) + "]";
        const auto& ja = jarcs[i];
        if (!ja.is_object()) throw ParseError(where, "expected an object");
        const ArcId id = detail::json_id(ja, "id", where);
        const NodeId from = detail::json_id(ja, "from", where);
        const NodeId to = detail::json_id(ja, "to", where);
        if (!elevation.count(from)) {
            throw ParseError(where + ".from", "dangling endpoint: no node " + std::to_string(from));
        }
        if (!elevation.count(to)) {
            throw ParseError(where + ".to", "dangling endpoint: no node " + std::to_string(to));
        }
        if (!seen.emplace(id, i).second) {
            throw ParseError(where + ".id", "duplicate arc id " + std::to_string(id));
        }
        const double length = detail::json_number(ja, "length", where);
        if (length <= 0.0) throw ParseError(where + ".length", "length must be > 0");
        const double grade_pct =
            detail::json_optional_number(ja, "grade_pct", where)
                .value_or(100.0 * (elevation.at(to) - elevation.at(from)) / length);
        const double v_min = detail::json_optional_number(ja, "vmin", where).value_or(kDefaultVmin);
        const double v_max = detail::json_optional_number(ja, "vmax", where).value_or(kDefaultVmax);
        if (v_min < 0.0 || v_max <= 0.0 || v_min > v_max) {
            throw ParseError(where, "speed bounds must satisfy 0 <= vmin <= vmax, vmax > 0");
        }
        const auto traffic = detail::json_optional_number(ja, "vtraffic", where);
        if (traffic && *traffic <= 0.0) throw ParseError(where + ".vtraffic", "must be > 0");
        arcs.push_back(make_arc(id, from, to, length, grade_pct, v_min, v_max, traffic, c_r));
    }
    return RoadNetwork(std::move(nodes), std::move(arcs));
}

inline RoadNetwork load_network(const std::string& path, double c_r = kDefaultRollingResistance) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str(), c_r);
}

inline std::string serialize_network(const RoadNetwork& net) {
    nlohmann::ordered_json doc;
    auto nodes = nlohmann::ordered_json::array();
    for (const Node& n : net.nodes()) {
        nlohmann::ordered_json jn;
        jn["id"] = n.id;
        jn["x"] = n.x;
        jn["y"] = n.y;
        jn["elev"] = n.elevation;
        nodes.push_back(std::move(jn));
    }
    auto arcs = nlohmann::ordered_json::array();
    for (const Arc& a : net.arcs()) {
        nlohmann::ordered_json ja;
        ja["id"] = a.id;
        ja["from"] = a.from;
        ja["to"] = a.to;
        ja["length"] = a.length;
        ja["grade_pct"] = a.grade_pct;
        ja["vmin"] = a.v_min;
        ja["vmax"] = a.v_max;
        if (a.traffic_speed) ja["vtraffic"] = *a.traffic_speed;
        arcs.push_back(std::move(ja));
    }
    doc["nodes"] = std::move(nodes);
    doc["arcs"] = std::move(arcs);
    return doc.dump(1) + "\n";
}

inline void save_network(const RoadNetwork& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << serialize_network(net);
}

}  // namespace greenroute
