#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "campaignopt/io.hpp"
#include "campaignopt/scenarios.hpp"

using namespace campaignopt;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("campaignopt_io_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

std::string write_temp(const TempDir& dir, const char* name,
                       const std::string& text) {
    std::string p = dir.file(name);
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("vehicle rows parse fields and domain arcs") {
    TempDir dir;
    std::string path = write_temp(dir, "vehicles.txt",
        "# comment line\n"
        "\n"
        "0|Blue Origin Blue Moon|4500|6350|2150|420|12|24|0-0,0-1,1-2,2-3,3-3\n");
    auto vs = read_vehicles(path);
    REQUIRE(vs.size() == 1);
    const Vehicle& v = vs[0];
    CHECK(v.name == "Blue Origin Blue Moon");
    CHECK(v.payload_capacity == doctest::Approx(4500));
    CHECK(v.propellant_capacity == doctest::Approx(6350));
    CHECK(v.dry_mass == doctest::Approx(2150));
    CHECK(v.isp == doctest::Approx(420));
    CHECK(v.launch_frequency == 12);
    CHECK(v.earliest_launch == 24);
    CHECK(v.domain == std::set<Arc>{{0, 0}, {0, 1}, {1, 2}, {2, 3}, {3, 3}});
}

TEST_CASE("malformed rows raise parse errors with file context") {
    TempDir dir;
    // Wrong field count.
    CHECK_THROWS_AS(
        read_vehicles(write_temp(dir, "a.txt", "0|x|1|2|3\n")), ParseError);
    // Non-numeric field.
    CHECK_THROWS_AS(
        read_vehicles(write_temp(dir, "b.txt", "0|x|oops|2|3|4|5|6|0-1\n")),
        ParseError);
    // Bad domain arc token.
    CHECK_THROWS_AS(
        read_vehicles(write_temp(dir, "c.txt", "0|x|1|2|3|4|5|6|0+1\n")),
        ParseError);
    // Ids must be consecutive from zero.
    CHECK_THROWS_AS(
        read_vehicles(write_temp(dir, "d.txt", "1|x|1|2|3|4|5|6|0-1\n")),
        ParseError);
    // Payload with a bad precursor list.
    CHECK_THROWS_AS(
        read_payloads(write_temp(dir, "e.txt", "0|x|5|10|0|3|0|1|z||\n")),
        ParseError);
    // Unknown stack override key.
    CHECK_THROWS_AS(
        read_stacks(write_temp(dir, "f.txt", "0,1|bogus=3\n")), ParseError);
    // Unknown network record type.
    CHECK_THROWS_AS(
        read_network(write_temp(dir, "g.txt", "Z:1:2\n")), ParseError);
    // Network arc referencing an undefined node.
    CHECK_THROWS_AS(
        read_network(write_temp(dir, "h.txt", "N:0:Earth\nA:0:9:1:1\n")),
        ValidationError);
}

TEST_CASE("payload precursor and co-payload sets parse as id lists") {
    TempDir dir;
    std::string path = write_temp(dir, "payloads.txt",
        "0|A|5|14|0|3|0|12||1|2\n"
        "1|B|5|50|0|3|7|12|0||\n"
        "2|C|1|2|2|3|0|0|0,1||\n");
    auto ps = read_payloads(path);
    REQUIRE(ps.size() == 3);
    CHECK(ps[0].strict_precursors == std::set<int>{1});
    CHECK(ps[0].co_payloads == std::set<int>{2});
    CHECK(ps[1].soft_precursors == std::set<int>{0});
    CHECK(ps[2].soft_precursors == std::set<int>{0, 1});
    CHECK(ps[2].type_index == COM_CREW);
}

TEST_CASE("stack overrides parse and default when absent") {
    TempDir dir;
    std::string path = write_temp(dir, "stacks.txt",
        "2,0,1\n"
        "0,1|m_prop=5000|t_L=3|t_F=2\n");
    auto ss = read_stacks(path);
    REQUIRE(ss.size() == 2);
    CHECK(ss[0].members == std::vector<int>{2, 0, 1});
    CHECK(!ss[0].propellant_capacity);
    CHECK(ss[1].members == std::vector<int>{0, 1});
    CHECK(*ss[1].propellant_capacity == doctest::Approx(5000));
    CHECK(*ss[1].earliest_launch == 3);
    CHECK(*ss[1].launch_frequency == 2);
}

TEST_CASE("a saved campaign loads back identically") {
    ProgramRequirements r = load_scenario("apollo");
    TempDir dir;
    save_campaign(r, dir.path.string());
    ProgramRequirements r2 =
        load_campaign(dir.file("vehicles.txt"), dir.file("payloads.txt"),
                      dir.file("network.txt"), dir.file("stacks.txt"));

    REQUIRE(r2.base_vehicle_count() == r.base_vehicle_count());
    for (int n = 0; n < r.base_vehicle_count(); ++n) {
        CHECK(r2.base_vehicles[n].name == r.base_vehicles[n].name);
        CHECK(r2.base_vehicles[n].payload_capacity ==
              r.base_vehicles[n].payload_capacity);
        CHECK(r2.base_vehicles[n].propellant_capacity ==
              r.base_vehicles[n].propellant_capacity);
        CHECK(r2.base_vehicles[n].dry_mass == r.base_vehicles[n].dry_mass);
        CHECK(r2.base_vehicles[n].isp == r.base_vehicles[n].isp);
        CHECK(r2.base_vehicles[n].domain == r.base_vehicles[n].domain);
    }
    REQUIRE(r2.payload_count() == r.payload_count());
    for (int l = 0; l < r.payload_count(); ++l) {
        CHECK(r2.payloads[l].type_index == r.payloads[l].type_index);
        CHECK(r2.payloads[l].quantity == r.payloads[l].quantity);
        CHECK(r2.payloads[l].window_lower == r.payloads[l].window_lower);
        CHECK(r2.payloads[l].window_upper == r.payloads[l].window_upper);
        CHECK(r2.payloads[l].co_payloads == r.payloads[l].co_payloads);
    }
    REQUIRE(r2.stacks.size() == r.stacks.size());
    // Derived stack vehicles come out the same.
    REQUIRE(r2.vehicle_count() == r.vehicle_count());
    for (int n = r.base_vehicle_count(); n < r.vehicle_count(); ++n) {
        CHECK(r2.vehicles[n].dry_mass == r.vehicles[n].dry_mass);
        CHECK(r2.vehicles[n].payload_capacity == r.vehicles[n].payload_capacity);
        CHECK(r2.vehicles[n].propellant_capacity ==
              r.vehicles[n].propellant_capacity);
    }
    CHECK(r2.network.arcs.size() == r.network.arcs.size());
    CHECK(r2.network.holdover.size() == r.network.holdover.size());
    for (const auto& [arc, d] : r.network.arcs) {
        CHECK(r2.network.dv(arc.first, arc.second) == d.dv_km_s);
        CHECK(r2.network.transfer_tof(arc.first, arc.second) == d.tof_days);
    }
}

TEST_CASE("missing files are reported") {
    CHECK_THROWS_AS(read_vehicles("/nonexistent/vehicles.txt"), ParseError);
}
