#pragma once

// CSV boundary of the experiment framework: report and summary tables, the
// OD pair list, and a JSON metadata sidecar describing how columns were
// computed.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "greenroute/analysis.hpp"

namespace greenroute {

inline constexpr const char* kReportHeader =
    "net,od_source,od_target,truck,load_pct,ratio_name,value,delta_h,dist_sp,sigma_grade";

inline constexpr const char* kSummaryHeader =
    "net,truck,load_pct,ratio_name,count,mean,min,q1,median,q3,max";

/// Locale-independent `%.12g`.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string report_csv(const ComparisonReport& report) {
    std::ostringstream out;
    out << kReportHeader << '\n';
    for (const auto& r : report.rows) {
        out << report.net << ',' << r.od_source << ',' << r.od_target << ',' << r.truck << ','
            << format_number(r.load_pct) << ',' << r.ratio << ',' << format_number(r.value) << ','
            << format_number(r.features.delta_h) << ',' << format_number(r.features.dist_sp)
            << ',' << format_number(r.features.sigma_grade) << '\n';
    }
    return out.str();
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << kSummaryHeader << '\n';
    for (const auto& s : rows) {
        out << s.net << ',' << s.truck << ',' << format_number(s.load_pct) << ',' << s.ratio << ','
            << s.count << ',' << format_number(s.mean) << ',' << format_number(s.min) << ','
            << format_number(s.q1) << ',' << format_number(s.median) << ','
            << format_number(s.q3) << ',' << format_number(s.max) << '\n';
    }
    return out.str();
}

/// Column definitions and conventions written next to a report.
inline std::string report_metadata_json(const ComparisonReport& report) {
    nlohmann::ordered_json meta;
    meta["net"] = report.net;
    meta["rows"] = report.rows.size();
    meta["cell_errors"] = report.errors.size();
    meta["columns"] = {
        {"value", "percent; E = 100*(E1-E2)/E1, delta = 100*len(p1 minus p2)/len(p1), "
                  "t = 100*(t2-t1)/t1"},
        {"delta_h", "target elevation minus source elevation (m)"},
        {"dist_sp", "shortest path length (m)"},
        {"sigma_grade", "population standard deviation of per-arc grades (rise/run) along the "
                        "shortest path, unweighted by arc length"}};
    meta["load_pct"] = "payload as percent of each truck's maximum payload";
    meta["quartiles"] = "inclusive linear interpolation";
    meta["tie_break"] = "weights equal within 1e-12 relative prefer fewer arcs, then the "
                        "lexicographically smaller arc-id sequence";
    meta["fastest_path"] = "chosen at traffic speeds when every arc has one, otherwise under the "
                           "evaluation speed policy";
    auto errors = nlohmann::ordered_json::array();
    for (const auto& e : report.errors) {
        errors.push_back({{"od_source", e.od_source},
                          {"od_target", e.od_target},
                          {"truck", e.truck},
                          {"load_pct", e.load_pct},
                          {"message", e.message}});
    }
    meta["errors"] = std::move(errors);
    return meta.dump(2) + "\n";
}

/// Reads `source,target` lines. A header row, blank lines and `#` comments
/// are skipped.
inline std::vector<std::pair<NodeId, NodeId>> parse_od_pairs(std::istream& in,
                                                             const std::string& label = "ods") {
    std::vector<std::pair<NodeId, NodeId>> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (line_no == 1 && line.find("source") != std::string::npos) continue;
        std::istringstream fields(line);
        std::string a, b, extra;
        const std::string where = label + ":" + std::to_string(line_no);
        if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') ||
            std::getline(fields, extra, ',')) {
            throw ParseError(where, "expected 'source,target'");
        }
        try {
            std::size_t ua = 0, ub = 0;
            const NodeId s = std::stoll(a, &ua);
            const NodeId t = std::stoll(b, &ub);
            if (a.find_first_not_of(" \t\r", ua) != std::string::npos ||
                b.find_first_not_of(" \t\r", ub) != std::string::npos) {
                throw std::invalid_argument("trailing characters");
            }
            out.emplace_back(s, t);
        } catch (const std::exception&) {
            throw ParseError(where, "node ids must be integers");
        }
    }
    return out;
}

inline std::vector<std::pair<NodeId, NodeId>> load_od_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open file");
    return parse_od_pairs(in, path);
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << text;
}

}  // namespace greenroute
