#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "greenroute/generator.hpp"
#include "greenroute/network.hpp"
#include "greenroute/network_io.hpp"

namespace gr = greenroute;

namespace {

constexpr double kPi = 3.14159265358979323846;

gr::CitySpec hilly(int grid = 6) {
    gr::CitySpec spec;
    spec.grid = grid;
    spec.hills = 3;
    spec.amplitude = 50.0;
    return spec;
}

}  // namespace

TEST(LoadNetwork, DerivesGradeFromElevations) {
    const auto net = gr::parse_network(R"({
        "nodes": [{"id": 1, "x": 0, "y": 0, "elev": 105},
                  {"id": 2, "x": 100, "y": 0, "elev": 100}],
        "arcs": [{"id": 7, "from": 1, "to": 2, "length": 100}]})");
    ASSERT_EQ(net.arc_count(), 1u);
    const auto& a = net.arc(7);
    EXPECT_DOUBLE_EQ(a.grade_pct, -5.0);
    EXPECT_DOUBLE_EQ(a.angle, std::atan(-0.05));
    EXPECT_EQ(a.v_min, 5.56);
    EXPECT_EQ(a.v_max, 25.0);
    EXPECT_FALSE(a.traffic_speed.has_value());
    EXPECT_EQ(a.augmented_ascent, gr::augmented_ascent(100.0, std::atan(-0.05), 0.01));
}

TEST(LoadNetwork, ClipsSteepGrades) {
    const auto net = gr::parse_network(R"({
        "nodes": [{"id": 1, "x": 0, "y": 0, "elev": 0}, {"id": 2, "x": 0, "y": 0, "elev": 0}],
        "arcs": [{"id": 1, "from": 1, "to": 2, "length": 50, "grade_pct": 15},
                 {"id": 2, "from": 2, "to": 1, "length": 50, "grade_pct": -15,
                  "vmin": 0, "vmax": 13.9, "vtraffic": 6.5}]})");
    EXPECT_EQ(net.arc(1).grade_pct, 10.0);
    EXPECT_EQ(net.arc(2).grade_pct, -10.0);
    EXPECT_EQ(net.arc(2).v_min, 0.0);
    EXPECT_EQ(net.arc(2).v_max, 13.9);
    EXPECT_EQ(net.arc(2).traffic_speed, 6.5);
    EXPECT_TRUE(gr::validate_network(net).empty());
}

TEST(LoadNetwork, DanglingEndpoint) {
    try {
        gr::parse_network(R"({"nodes": [{"id": 1, "elev": 0}],
                              "arcs": [{"id": 1, "from": 1, "to": 9, "length": 10}]})");
        FAIL();
    } catch (const gr::ParseError& e) {
        EXPECT_EQ(e.where(), "arcs[0].to");
    }
}

TEST(LoadNetwork, MalformedRecords) {
    auto where = [](const std::string& text) {
        try {
            gr::parse_network(text);
        } catch (const gr::ParseError& e) {
            return e.where();
        }
        return std::string("no error");
    };
    EXPECT_EQ(where(R"({"nodes": [{"id": 1, "elev": 0}, {"id": 2, "elev": 0}],
                        "arcs": [{"id": 1, "from": 1, "to": 2, "length": 0}]})"),
              "arcs[0].length");
    EXPECT_EQ(where(R"({"nodes": [{"id": 1, "elev": 0}, {"id": 2, "elev": 0}],
                        "arcs": [{"id": 1, "from": 1, "to": 2, "length": -3}]})"),
              "arcs[0].length");
    EXPECT_EQ(where(R"({"nodes": [{"id": 1}], "arcs": []})"), "nodes[0].elev");
    EXPECT_EQ(where(R"({"nodes": [{"id": "a", "elev": 1}], "arcs": []})"), "nodes[0].id");
    EXPECT_EQ(where(R"({"nodes": [], "arcs": {}})"), "arcs");
    EXPECT_EQ(where("{\"nodes\": [],\n\"arcs\": [,]}"), "line 2");
    EXPECT_EQ(where(R"({"nodes": [{"id": 1, "elev": 0}, {"id": 1, "elev": 0}], "arcs": []})"),
              "nodes[1].id");
}

TEST(LoadNetwork, ParallelArcsAllowed) {
    const auto net = gr::parse_network(R"({
        "nodes": [{"id": 1, "elev": 0}, {"id": 2, "elev": 0}],
        "arcs": [{"id": 5, "from": 1, "to": 2, "length": 30},
                 {"id": 3, "from": 1, "to": 2, "length": 20}]})");
    ASSERT_EQ(net.arc_count(), 2u);
    EXPECT_EQ(net.arcs()[0].id, 3);
    EXPECT_EQ(net.out(net.node_index(1)).size(), 2u);
}

TEST(AugmentedAscent, Values) {
    EXPECT_EQ(gr::augmented_ascent(1000.0, -std::atan(0.01), 0.01), 0.0);
    EXPECT_NEAR(gr::augmented_ascent(1000.0, 0.0, 0.01), 9.999500037496874, 1e-9);
    EXPECT_NEAR(gr::augmented_ascent(1000.0, 2.0 * kPi / 180.0, 0.01), 44.89116047077953, 1e-9);
}

TEST(AugmentedAscent, NonNegativeAndZeroExactlyOnSteepDescents) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> g(-0.1, 0.1);
    for (int i = 0; i < 1000; ++i) {
        const double angle = std::atan(g(rng));
        const double h = gr::augmented_ascent(250.0, angle, 0.01);
        EXPECT_GE(h, 0.0);
        EXPECT_EQ(h == 0.0, angle <= -std::atan(0.01)) << angle;
    }
}

TEST(Clipping, Idempotent) {
    for (double g : {-40.0, -10.0, -3.3, 0.0, 9.99, 10.0, 12.0, 1e9}) {
        EXPECT_EQ(gr::clip_grade_pct(gr::clip_grade_pct(g)), gr::clip_grade_pct(g));
        EXPECT_LE(std::abs(gr::clip_grade_pct(g)), 10.0);
    }
}

TEST(Validate, FreshSyntheticCityIsClean) {
    EXPECT_TRUE(gr::validate_network(gr::generate_synthetic_city(3, hilly())).empty());
}

TEST(Validate, InvertedSpeedBounds) {
    auto arcs = gr::generate_synthetic_city(3, hilly(3)).arcs();
    arcs[4].v_min = 30.0;
    const gr::RoadNetwork net(gr::generate_synthetic_city(3, hilly(3)).nodes(), arcs);
    const auto v = gr::validate_network(net);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].subject, "arc " + std::to_string(arcs[4].id));
}

TEST(Validate, GradeOutsideClippingRange) {
    gr::Arc a = gr::make_arc(1, 1, 2, 100.0, 0.0);
    a.grade_pct = 12.0;
    a.angle = std::atan(0.12);
    a.augmented_ascent = gr::augmented_ascent(a.length, a.angle, 0.01);
    const gr::RoadNetwork net({{1, 0, 0, 0}, {2, 100, 0, 12}}, {a});
    const auto v = gr::validate_network(net);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].subject, "arc 1");
    EXPECT_NE(v[0].rule.find("clipping"), std::string::npos);
}

TEST(Validate, NegativeTrafficSpeed) {
    gr::Arc a = gr::make_arc(1, 1, 2, 100.0, 0.0);
    a.traffic_speed = -2.0;
    const gr::RoadNetwork net({{1, 0, 0, 0}, {2, 100, 0, 0}}, {a});
    EXPECT_EQ(gr::validate_network(net).size(), 1u);
}

TEST(Network, ConstructorRejectsDanglingAndDuplicates) {
    EXPECT_THROW(gr::RoadNetwork({{1, 0, 0, 0}}, {gr::make_arc(1, 1, 2, 10.0, 0.0)}),
                 gr::InvalidArgument);
    EXPECT_THROW(gr::RoadNetwork({{1, 0, 0, 0}, {1, 0, 0, 0}}, {}), gr::InvalidArgument);
}

TEST(Generator, FlatCityHasZeroAngles) {
    auto spec = hilly();
    spec.amplitude = 0.0;
    const auto net = gr::generate_synthetic_city(11, spec);
    for (const auto& a : net.arcs()) {
        EXPECT_EQ(a.angle, 0.0);
        EXPECT_EQ(a.grade_pct, 0.0);
    }
}

TEST(Generator, GridSize) {
    gr::CitySpec spec;
    spec.grid = 10;
    spec.spacing = 200.0;
    const auto net = gr::generate_synthetic_city(1, spec);
    EXPECT_EQ(net.node_count(), 100u);
    EXPECT_EQ(net.arc_count(), 360u);
    for (const auto& a : net.arcs()) {
        EXPECT_EQ(a.v_min, 5.56);
        EXPECT_EQ(a.v_max, 25.0);
        EXPECT_LE(std::abs(a.grade_pct), 10.0);
    }
}

TEST(Generator, DeterministicPerSeed) {
    auto spec = hilly(8);
    spec.traffic = gr::TrafficModel{};
    spec.length_jitter = 0.05;
    const auto a = gr::serialize_network(gr::generate_synthetic_city(42, spec));
    const auto b = gr::serialize_network(gr::generate_synthetic_city(42, spec));
    const auto c = gr::serialize_network(gr::generate_synthetic_city(43, spec));
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
}

TEST(Generator, StronglyConnected) {
    const auto net = gr::generate_synthetic_city(5, hilly(5));
    // Every arc has its reverse twin.
    for (const auto& a : net.arcs()) {
        bool twin = false;
        for (std::size_t i : net.out(net.node_index(a.to))) twin |= net.arcs()[i].to == a.from;
        EXPECT_TRUE(twin);
    }
}

TEST(Generator, TrafficSpeedsWithinModelBand) {
    auto spec = hilly();
    spec.traffic = gr::TrafficModel{0.4, 0.8};
    const auto net = gr::generate_synthetic_city(9, spec);
    EXPECT_TRUE(net.all_arcs_have_traffic_speed());
    for (const auto& a : net.arcs()) {
        EXPECT_GE(*a.traffic_speed, 0.4 * a.v_max);
        EXPECT_LE(*a.traffic_speed, 0.8 * a.v_max);
    }
    const auto bounded = gr::with_traffic_bounds(net);
    for (const auto& a : bounded.arcs()) {
        EXPECT_EQ(a.v_max, *a.traffic_speed);
        EXPECT_EQ(a.v_min, 0.0);
    }
}

TEST(Generator, RejectsDegenerateSpec) {
    gr::CitySpec spec;
    spec.grid = 1;
    EXPECT_THROW(gr::generate_synthetic_city(1, spec), gr::InvalidArgument);
    spec = {};
    spec.spacing = 0.0;
    EXPECT_THROW(gr::generate_synthetic_city(1, spec), gr::InvalidArgument);
    spec = {};
    spec.amplitude = -1.0;
    EXPECT_THROW(gr::generate_synthetic_city(1, spec), gr::InvalidArgument);
}

TEST(Serialization, RoundTripIsFieldwiseEqual) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto spec = hilly(5);
        spec.traffic = gr::TrafficModel{};
        spec.length_jitter = 0.1;
        const auto net = gr::generate_synthetic_city(seed, spec);
        const auto text = gr::serialize_network(net);
        const auto back = gr::parse_network(text);
        EXPECT_EQ(back, net);
        EXPECT_EQ(gr::serialize_network(back), text);
    }
}
