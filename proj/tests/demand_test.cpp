#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "campaignopt/demand.hpp"
#include "campaignopt/scenarios.hpp"

using namespace campaignopt;

TEST_CASE("payload supplies and demands attach at the correct steps") {
    ProgramRequirements r = load_scenario("apollo");
    ScheduleVector schedule(r.payload_count(), 0);
    ReducedTimeline tl = build_reduced_timeline(schedule, r.network);
    DemandMatrix d = build_demand_matrix(r, schedule, tl);

    // Payload 4: 10 kg of samples returned from the surface. Return payloads
    // ride the odd step: supplied at the origin, demanded at the target.
    CHECK(d.at(0, 3, COM_MISC, 1) == doctest::Approx(10.0));
    CHECK(d.at(0, 0, COM_MISC, 1) == doctest::Approx(-10.0));

    // Payload 1: 3 crew Earth->LLO on the outbound (even) step. At LLO the
    // -3 demand nets against the +2 surface-crew supply of payload 0.
    CHECK(d.at(0, 0, COM_CREW, 0) == doctest::Approx(3.0));
    CHECK(d.at(0, 2, COM_CREW, 0) == doctest::Approx(-1.0));
}

TEST_CASE("vehicle supply counting follows availability and cadence") {
    ProgramRequirements r = load_scenario("clps");
    // Peregrine: available from month 1, one more unit every 12 months.
    const Vehicle& peregrine = r.base_vehicles[0];
    REQUIRE(peregrine.earliest_launch == 1);
    REQUIRE(peregrine.launch_frequency == 12);

    ScheduleVector schedule(r.payload_count(), 1);
    schedule[1] = 13;
    schedule[2] = 25;
    ReducedTimeline tl = build_reduced_timeline(schedule, r.network);
    DemandMatrix d = build_demand_matrix(r, schedule, tl);

    // Event months {1, 13, 25}: one new unit reaches the pad at each.
    CHECK(d.at(0, 0, COM_VEHICLE, 0) == doctest::Approx(1.0));
    CHECK(d.at(0, 0, COM_VEHICLE, 2) == doctest::Approx(1.0));
    CHECK(d.at(0, 0, COM_VEHICLE, 4) == doctest::Approx(1.0));

    // Griffin is not available until month 24: nothing at months 1 or 13,
    // one unit by month 25.
    CHECK(d.at(1, 0, COM_VEHICLE, 0) == doctest::Approx(0.0));
    CHECK(d.at(1, 0, COM_VEHICLE, 2) == doctest::Approx(0.0));
    CHECK(d.at(1, 0, COM_VEHICLE, 4) == doctest::Approx(1.0));

    // Nova-C (t_L=0, t_F=6): 1 by month 1, 3 by month 13, 5 by month 25,
    // delivered incrementally.
    CHECK(d.at(6, 0, COM_VEHICLE, 0) == doctest::Approx(1.0));
    CHECK(d.at(6, 0, COM_VEHICLE, 2) == doctest::Approx(2.0));
    CHECK(d.at(6, 0, COM_VEHICLE, 4) == doctest::Approx(2.0));
}

TEST_CASE("supporting commodities are available at Earth on every even step") {
    ProgramRequirements r = load_scenario("toy_single");
    ScheduleVector schedule{0};
    ReducedTimeline tl = build_reduced_timeline(schedule, r.network);
    DemandMatrix d = build_demand_matrix(r, schedule, tl);
    for (int p : {COM_ISRU_PLANT, COM_MAINTENANCE, COM_CONSUMABLES,
                  COM_OXIDIZER, COM_FUEL}) {
        CHECK(d.at(0, 0, p, 0) == doctest::Approx(kUnlimitedSupply));
        CHECK(d.at(0, 0, p, 1) == doctest::Approx(0.0));
    }
    // Scheduled payload types come only from the manifest.
    CHECK(d.at(0, 0, COM_MISC, 0) == doctest::Approx(120.0));
}

TEST_CASE("scheduled payload supplies balance their demands") {
    ProgramRequirements r = load_scenario("clps");
    ScheduleVector schedule;
    for (const auto& p : r.payloads) schedule.push_back(p.window_upper);
    ReducedTimeline tl = build_reduced_timeline(schedule, r.network);
    DemandMatrix d = build_demand_matrix(r, schedule, tl);
    // Crew and misc demands net to zero over nodes and steps (every kg
    // demanded somewhere is supplied elsewhere).
    for (int p : {COM_CREW, COM_MISC}) {
        double net = 0.0;
        for (int i = 0; i < d.node_count; ++i)
            for (int t = 0; t < d.step_count; ++t)
                net += d.sum_over_vehicles(i, p, t);
        CHECK(net == doctest::Approx(0.0));
    }
}

TEST_CASE("the matrix is independent of payload list order") {
    ProgramRequirements r = load_scenario("toy_2x2");
    ScheduleVector schedule{1, 2};
    ReducedTimeline tl = build_reduced_timeline(schedule, r.network);
    DemandMatrix d1 = build_demand_matrix(r, schedule, tl);

    ProgramRequirements r2 = r;
    std::swap(r2.payloads[0], r2.payloads[1]);
    r2.payloads[0].id = 0;
    r2.payloads[1].id = 1;
    ScheduleVector swapped{2, 1};
    DemandMatrix d2 = build_demand_matrix(r2, swapped, tl);
    CHECK(d1.entries == d2.entries);
}

TEST_CASE("degenerate windows make the integrated matrix match the forced one") {
    ProgramRequirements r = load_scenario("toy_single");
    REQUIRE(r.payloads[0].window_lower == r.payloads[0].window_upper);
    ScheduleVector forced{r.payloads[0].window_lower};

    IntegratedModelInputs integ = integrated_window_demands(r);
    ReducedTimeline tl = build_reduced_timeline(forced, r.network);
    DemandMatrix d = build_demand_matrix(r, forced, tl);
    // Window [0,0] means the full timeline equals the reduced one.
    CHECK(integ.timeline.step_count == tl.step_count);
    CHECK(integ.demand.entries == d.entries);
}

TEST_CASE("precursor constraints cannot enter the integrated model") {
    ProgramRequirements r = load_scenario("toy_2x2");
    r.payloads[1].strict_precursors = {0};
    CHECK_THROWS_AS(integrated_window_demands(r), UnsupportedProgramError);
    r.payloads[1].strict_precursors.clear();
    r.payloads[1].soft_precursors = {0};
    CHECK_THROWS_AS(integrated_window_demands(r), UnsupportedProgramError);
}

TEST_CASE("co-payload groups with empty window intersections are rejected") {
    ProgramRequirements r = load_scenario("toy_2x2");
    r.payloads[0].window_lower = 0;
    r.payloads[0].window_upper = 0;
    r.payloads[1].window_lower = 2;
    r.payloads[1].window_upper = 3;
    r.payloads[0].co_payloads = {1};
    r.payloads[1].co_payloads = {0};
    CHECK_THROWS_AS(integrated_window_demands(r), UnsupportedProgramError);
}
