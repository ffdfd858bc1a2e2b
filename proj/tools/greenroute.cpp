// greenroute: generate synthetic cities, answer single routing queries, and
// run comparison sweeps that write CSV reports.
//
// Exit codes: 0 success, 2 invalid input or spec, 3 unreachable OD pair,
// 1 anything else.

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "greenroute/greenroute.hpp"

namespace gr = greenroute;

namespace {

constexpr int kExitSpecError = 2;
constexpr int kExitUnreachable = 3;

std::string default_net_name(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

gr::RoadNetwork load_for_run(const std::string& path, bool traffic_bounds) {
    gr::RoadNetwork net = gr::load_network(path);
    return traffic_bounds ? gr::with_traffic_bounds(net) : net;
}

std::vector<gr::VehicleParams> trucks_from_names(const std::vector<std::string>& names) {
    std::vector<gr::VehicleParams> out;
    for (const auto& n : names) out.push_back(gr::builtin_truck(n));
    return out;
}

std::vector<gr::RatioSpec> default_ratios(const gr::RoadNetwork& net) {
    auto ratios = gr::free_flow_ratios();
    if (net.all_arcs_have_traffic_speed()) {
        for (auto& r : gr::traffic_ratios()) ratios.push_back(r);
    }
    return ratios;
}

void write_report(const gr::ComparisonReport& report, const std::string& out_path,
                  const std::string& summary_path) {
    gr::write_text(out_path, gr::report_csv(report));
    gr::write_text(out_path + ".meta.json", gr::report_metadata_json(report));
    if (!summary_path.empty()) gr::write_text(summary_path, gr::summary_csv(gr::summarize(report)));
    for (const auto& e : report.errors) {
        std::cerr << "cell " << e.od_source << "->" << e.od_target << " " << e.truck << " "
                  << e.load_pct << "%: " << e.message << "\n";
    }
    std::cout << "wrote " << report.rows.size() << " rows to " << out_path << "\n";
}

void print_metrics(const gr::RoadNetwork& net, const gr::Path& path, const gr::PathMetrics& m,
                   const gr::Query& q, const std::string& path_kind, bool as_json) {
    if (as_json) {
        nlohmann::ordered_json j;
        j["source"] = path.source;
        j["target"] = path.target;
        j["truck"] = q.vehicle.name;
        j["load_kg"] = q.load;
        j["path_kind"] = path_kind;
        j["speed_policy"] = std::string(gr::to_string(q.policy));
        j["arcs"] = path.arcs;
        j["distance_m"] = m.distance;
        j["time_s"] = m.time;
        j["fuel_l"] = m.fuel;
        j["co2_kg"] = m.co2;
        auto per_arc = nlohmann::ordered_json::array();
        for (const auto& b : m.per_arc) {
            per_arc.push_back({{"arc", b.arc},
                               {"grade_pct", net.arc(b.arc).grade_pct},
                               {"speed_mps", b.speed.speed},
                               {"regime", std::string(gr::to_string(b.speed.regime))},
                               {"fuel_l", b.cost.fuel},
                               {"co2_kg", b.cost.co2},
                               {"time_s", b.cost.time}});
        }
        j["per_arc"] = std::move(per_arc);
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::cout << path_kind << " path " << path.source << " -> " << path.target << " ("
              << path.arcs.size() << " arcs), " << q.vehicle.name << " at " << q.load
              << " kg, " << gr::to_string(q.policy) << " speed\n";
    std::cout << std::fixed << std::setprecision(3);
    std::cout << "  distance  " << m.distance / 1000.0 << " km\n";
    std::cout << "  time      " << m.time / 60.0 << " min\n";
    std::cout << "  fuel      " << m.fuel << " L\n";
    std::cout << "  co2       " << m.co2 << " kg\n";
    std::cout << "  arc        grade%   speed(m/s)  regime        fuel(L)\n";
    for (const auto& b : m.per_arc) {
        std::cout << "  " << std::setw(8) << b.arc << "  " << std::setw(7)
                  << net.arc(b.arc).grade_pct << "  " << std::setw(10) << b.speed.speed << "  "
                  << std::setw(12) << std::left << gr::to_string(b.speed.regime) << std::right
                  << "  " << b.cost.fuel << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuel- and CO2-minimal truck routing over elevation-annotated road networks"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic hilly grid city");
    std::uint64_t seed = 1;
    gr::CitySpec city;
    std::string gen_out;
    double traffic_lo = 0.0, traffic_hi = 0.0;
    gen->add_option("--seed", seed, "RNG seed")->required();
    gen->add_option("--grid", city.grid, "Nodes per side");
    gen->add_option("--spacing", city.spacing, "Distance between neighbouring nodes (m)");
    gen->add_option("--hills", city.hills, "Number of Gaussian hills");
    gen->add_option("--amp", city.amplitude, "Hill height upper bound (m)");
    gen->add_option("--vmin", city.v_min, "Minimum speed (m/s)");
    gen->add_option("--vmax", city.v_max, "Maximum speed (m/s)");
    gen->add_option("--jitter", city.length_jitter, "Relative road length perturbation");
    gen->add_option("--traffic-lo", traffic_lo, "Traffic speed lower fraction of vmax");
    gen->add_option("--traffic-hi", traffic_hi, "Traffic speed upper fraction of vmax");
    gen->add_option("-o,--out", gen_out, "Output network JSON")->required();

    // route
    auto* route = app.add_subcommand("route", "Answer one routing query");
    std::string net_path, truck = "hdd", vehicle_file, path_kind = "greenest", speed = "dynamic";
    gr::NodeId from = 0, to = 0;
    double load_pct = 0.0;
    bool as_json = false, traffic_bounds = false;
    route->add_option("--net", net_path, "Network JSON")->required();
    route->add_option("--from", from, "Source node id")->required();
    route->add_option("--to", to, "Target node id")->required();
    route->add_option("--truck", truck, "Built-in truck")
        ->check(CLI::IsMember({"hdd", "mdd", "ldd"}));
    route->add_option("--vehicle-file", vehicle_file, "Custom vehicle key-value file");
    route->add_option("--load-pct", load_pct, "Payload as percent of capacity");
    route->add_option("--path", path_kind, "Path kind")
        ->check(CLI::IsMember({"shortest", "fastest", "greenest", "greenest-traffic", "asymptotic"}));
    route->add_option("--speed", speed, "Speed policy")
        ->check(CLI::IsMember({"static", "dynamic", "traffic"}));
    route->add_flag("--json", as_json, "Emit JSON");
    route->add_flag("--traffic-bounds", traffic_bounds,
                    "Use traffic speed as vmax and zero as vmin on every arc");

    // compare
    auto* compare = app.add_subcommand("compare", "Evaluate ratios listed in a JSON spec");
    std::string spec_path, out_path, summary_path, net_name;
    compare->add_option("--net", net_path, "Network JSON")->required();
    compare->add_option("--spec", spec_path, "Comparison spec JSON")->required();
    compare->add_option("-o,--out", out_path, "Report CSV")->required();
    compare->add_option("--summary", summary_path, "Summary CSV");
    compare->add_option("--name", net_name, "Network name in the report");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Full factorial sweep over OD pairs and payloads");
    std::string ods_path;
    std::vector<double> loads{30, 40, 50, 60, 70, 80};
    std::vector<std::string> trucks{"hdd", "mdd", "ldd"};
    std::vector<std::string> ratio_names;
    std::size_t threads = 1;
    sweep->add_option("--net", net_path, "Network JSON")->required();
    sweep->add_option("--ods", ods_path, "OD pairs CSV (source,target)")->required();
    sweep->add_option("--loads", loads, "Payload percentages")->delimiter(',');
    sweep->add_option("--trucks", trucks, "Built-in trucks")->delimiter(',');
    sweep->add_option("--ratios", ratio_names, "Ratio names, e.g. E(sp/s->g/d)")->delimiter(';');
    sweep->add_option("--threads", threads, "Worker threads");
    sweep->add_option("-o,--out", out_path, "Report CSV")->required();
    sweep->add_option("--summary", summary_path, "Summary CSV");
    sweep->add_option("--name", net_name, "Network name in the report");
    sweep->add_flag("--traffic-bounds", traffic_bounds,
                    "Use traffic speed as vmax and zero as vmin on every arc");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitSpecError;
    }

    try {
        if (*gen) {
            if (traffic_lo > 0.0 || traffic_hi > 0.0) {
                city.traffic = gr::TrafficModel{traffic_lo, traffic_hi};
            }
            const gr::RoadNetwork net = gr::generate_synthetic_city(seed, city);
            gr::save_network(net, gen_out);
            std::cout << "wrote " << net.node_count() << " nodes, " << net.arc_count()
                      << " arcs to " << gen_out << "\n";
        } else if (*route) {
            const gr::RoadNetwork net = load_for_run(net_path, traffic_bounds);
            gr::VehicleParams vp =
                vehicle_file.empty() ? gr::builtin_truck(truck) : gr::load_vehicle(vehicle_file);
            gr::detail::require(load_pct >= 0.0 && load_pct <= 100.0,
                                "--load-pct must lie in [0, 100]");
            gr::Query q{from, to, vp, vp.l_max * load_pct / 100.0, gr::parse_speed_policy(speed),
                        true};
            gr::validate_query(net, q);
            const gr::PathSpeed ps{gr::parse_path_kind(path_kind), q.policy};
            const gr::Path path = gr::select_path(net, from, to, vp, q.load, ps);
            print_metrics(net, path, gr::path_metrics(net, path, q), q, path_kind, as_json);
        } else if (*compare) {
            std::ifstream in(spec_path);
            if (!in) throw gr::ParseError(spec_path, "cannot open file");
            nlohmann::json spec;
            try {
                spec = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw gr::ParseError(spec_path, e.what());
            }
            try {
                const bool bounds = spec.value("traffic_bounds", false);
                const gr::RoadNetwork net = load_for_run(net_path, bounds);
                std::vector<std::pair<gr::NodeId, gr::NodeId>> ods;
                for (const auto& od : spec.at("ods")) {
                    ods.emplace_back(od.at(0).get<gr::NodeId>(), od.at(1).get<gr::NodeId>());
                }
                auto spec_trucks = trucks_from_names(
                    spec.value("trucks", std::vector<std::string>{"hdd", "mdd", "ldd"}));
                auto spec_loads = spec.value("loads_pct", loads);
                std::vector<gr::RatioSpec> ratios;
                if (spec.contains("ratios")) {
                    for (const auto& r : spec.at("ratios")) {
                        ratios.push_back(gr::parse_ratio(r.get<std::string>()));
                    }
                } else {
                    ratios = default_ratios(net);
                }
                gr::SweepOptions opts;
                opts.threads = spec.value("threads", std::size_t{1});
                const std::string name = !net_name.empty() ? net_name
                                         : spec.contains("name")
                                             ? spec.at("name").get<std::string>()
                                             : default_net_name(net_path);
                const auto report =
                    gr::run_sweep(net, name, ods, spec_trucks, spec_loads, ratios, opts);
                write_report(report, out_path, summary_path);
            } catch (const nlohmann::json::exception& e) {
                throw gr::ParseError(spec_path, e.what());
            }
        } else if (*sweep) {
            const gr::RoadNetwork net = load_for_run(net_path, traffic_bounds);
            const auto ods = gr::load_od_pairs(ods_path);
            std::vector<gr::RatioSpec> ratios;
            for (const auto& n : ratio_names) ratios.push_back(gr::parse_ratio(n));
            if (ratios.empty()) ratios = default_ratios(net);
            gr::SweepOptions opts;
            opts.threads = threads;
            const auto report =
                gr::run_sweep(net, net_name.empty() ? default_net_name(net_path) : net_name, ods,
                              trucks_from_names(trucks), loads, ratios, opts);
            write_report(report, out_path, summary_path);
        }
    } catch (const gr::Unreachable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnreachable;
    } catch (const gr::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const gr::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const gr::MissingTrafficSpeed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
