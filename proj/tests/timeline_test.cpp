#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "campaignopt/timeline.hpp"

using namespace campaignopt;

TEST_CASE("two event months expand to four steps with correct mapping") {
    NetworkConfig net = default_network();
    ReducedTimeline tl = build_reduced_timeline({6, 2, 6, 2}, net);
    CHECK(tl.event_months == std::vector<int>{2, 6});
    CHECK(tl.step_count == 4);
    CHECK(tl.even_step_of_month.at(2) == 0);
    CHECK(tl.even_step_of_month.at(6) == 2);
    CHECK(tl.month_of_step(0) == 2);
    CHECK(tl.month_of_step(1) == 2);
    CHECK(tl.month_of_step(2) == 6);
    CHECK(tl.month_of_step(3) == 6);
    CHECK(tl.is_even_step(0));
    CHECK(!tl.is_even_step(3));
}

TEST_CASE("single event month yields one step pair and a short surface stay") {
    NetworkConfig net = default_network();
    ReducedTimeline tl = build_reduced_timeline({0}, net);
    CHECK(tl.step_count == 2);
    // Only the even->odd holdover exists; surface stay is 3 days.
    CHECK(tl.tau(3, 3, 0, net) == doctest::Approx(3.0));
    CHECK(tl.tau(1, 1, 0, net) == doctest::Approx(5.0));
    // Earth holdovers never accrue time.
    CHECK(tl.tau(0, 0, 0, net) == doctest::Approx(0.0));
}

TEST_CASE("skipped months extend the odd-to-even holdover by 30 days each") {
    NetworkConfig net = default_network();
    ReducedTimeline tl = build_reduced_timeline({0, 3}, net);
    CHECK(tl.step_count == 4);
    // Gap of 3 months: base long stay 25 days + 2 skipped months * 30 days.
    CHECK(tl.tau(1, 1, 1, net) == doctest::Approx(85.0));
    CHECK(tl.tau(2, 2, 1, net) == doctest::Approx(85.0));
    CHECK(tl.tau(3, 3, 1, net) == doctest::Approx(87.0));
    // Even steps keep the short semi-period.
    CHECK(tl.tau(1, 1, 2, net) == doctest::Approx(5.0));
    // Earth remains zero on both parities.
    CHECK(tl.tau(0, 0, 1, net) == doctest::Approx(0.0));
}

TEST_CASE("consecutive event months form 30-day macro-periods") {
    NetworkConfig net = default_network();
    ReducedTimeline tl = build_reduced_timeline({4, 5}, net);
    // No skipped month: even + odd semi-periods total one month.
    CHECK(tl.tau(1, 1, 0, net) + tl.tau(1, 1, 1, net) ==
          doctest::Approx(kDaysPerMonth));
    CHECK(tl.tau(3, 3, 0, net) + tl.tau(3, 3, 1, net) ==
          doctest::Approx(kDaysPerMonth));
}

TEST_CASE("transfer arcs take their time of flight from the network") {
    NetworkConfig net = default_network();
    ReducedTimeline tl = build_reduced_timeline({0, 1}, net);
    CHECK(tl.tau(1, 2, 0, net) == doctest::Approx(3.0));
    CHECK(tl.tau(2, 3, 0, net) == doctest::Approx(1.0));
    CHECK(tl.tau(0, 1, 0, net) == doctest::Approx(0.0));
}

TEST_CASE("arc availability respects direction parity and domains") {
    NetworkConfig net = default_network();
    ReducedTimeline tl = build_reduced_timeline({0, 1}, net);
    Vehicle v;
    v.domain = {{0, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 3}};

    // Outbound arcs only on even steps.
    CHECK(arc_allowed(v, 1, 2, 0, tl, net));
    CHECK(!arc_allowed(v, 1, 2, 1, tl, net));
    // Return arcs only on odd steps.
    CHECK(arc_allowed(v, 2, 1, 1, tl, net));
    CHECK(!arc_allowed(v, 2, 1, 0, tl, net));
    // Holdovers on every step except the last (nothing to hold into).
    CHECK(arc_allowed(v, 2, 2, 0, tl, net));
    CHECK(arc_allowed(v, 2, 2, 2, tl, net));
    CHECK(!arc_allowed(v, 2, 2, 3, tl, net));
    // Arcs outside the vehicle's domain are never allowed.
    CHECK(!arc_allowed(v, 2, 3, 0, tl, net));
    // Arcs absent from the network are never allowed.
    CHECK(!arc_allowed(v, 0, 3, 0, tl, net));
}

TEST_CASE("payload attachment step follows the flow direction") {
    NetworkConfig net = default_network();
    ReducedTimeline tl = build_reduced_timeline({2, 6}, net);
    Payload outbound;
    outbound.origin = 0;
    outbound.target = 3;
    Payload inbound;
    inbound.origin = 3;
    inbound.target = 0;
    CHECK(attachment_step(outbound, 2, tl) == 0);
    CHECK(attachment_step(outbound, 6, tl) == 2);
    CHECK(attachment_step(inbound, 2, tl) == 1);
    CHECK(attachment_step(inbound, 6, tl) == 3);
}

TEST_CASE("full timeline covers every month in the span") {
    NetworkConfig net = default_network();
    ReducedTimeline tl = build_full_timeline(0, 5, net);
    CHECK(tl.step_count == 12);
    for (int m = 0; m <= 5; ++m) CHECK(tl.even_step_of_month.at(m) == 2 * m);
    // Full timelines never skip months, so every period is 30 days.
    for (int t = 0; t + 2 < tl.step_count; t += 2)
        CHECK(tl.tau(1, 1, t, net) + tl.tau(1, 1, t + 1, net) ==
              doctest::Approx(kDaysPerMonth));
}
