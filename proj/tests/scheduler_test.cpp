#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "campaignopt/scenarios.hpp"
#include "campaignopt/scheduler.hpp"

using namespace campaignopt;

namespace {

const ScheduleVector kClpsBaseline{11, 6, 11, 0, 6, 12, 13, 18, 25, 25, 36};

}  // namespace

TEST_CASE("sequencing accepts the bundled reference schedules") {
    ProgramRequirements apollo = load_scenario("apollo");
    CHECK(check_sequencing(ScheduleVector(5, 0), apollo));

    ProgramRequirements clps = load_scenario("clps");
    CHECK(check_sequencing(kClpsBaseline, clps));
}

TEST_CASE("sequencing rejects window, precursor and co-payload violations") {
    ProgramRequirements r = load_scenario("clps");

    // Outside a window.
    ScheduleVector s = kClpsBaseline;
    s[6] = 14;  // window is [13,13]
    CHECK(!check_sequencing(s, r));

    // Co-payloads must share a month.
    s = kClpsBaseline;
    s[2] = 12;  // payload 2 rides with payload 0 (month 11)
    CHECK(!check_sequencing(s, r));

    // Strict precursors demand strictly earlier months; equal months fail.
    ProgramRequirements strict = load_scenario("toy_2x2");
    strict.payloads[1].strict_precursors = {0};
    CHECK(check_sequencing({1, 2}, strict));
    CHECK(!check_sequencing({2, 2}, strict));
    CHECK(!check_sequencing({2, 1}, strict));

    // Soft precursors allow equality but not reversal.
    ProgramRequirements soft = load_scenario("toy_2x2");
    soft.payloads[1].soft_precursors = {0};
    CHECK(check_sequencing({2, 2}, soft));
    CHECK(!check_sequencing({2, 1}, soft));

    // Length mismatches are programming errors.
    CHECK_THROWS_AS(check_sequencing({0, 0}, r), std::invalid_argument);
}

TEST_CASE("coincident launches are counted after collapsing co-groups") {
    ProgramRequirements clps = load_scenario("clps");
    // Baseline: 9 gene groups over 8 distinct months (12 and 25 repeat once
    // outside mandatory coincidences... months are {11,6,0,12,13,18,25,36}).
    CHECK(coincident_count(kClpsBaseline, clps) == 1);

    // All-same schedule: maximum coincidence.
    ProgramRequirements apollo = load_scenario("apollo");
    CHECK(coincident_count(ScheduleVector(5, 0), apollo) == 1);

    ProgramRequirements toy = load_scenario("toy_2x2");
    CHECK(coincident_count({1, 2}, toy) == 0);
    CHECK(coincident_count({2, 2}, toy) == 1);
}

TEST_CASE("twenty random guesses all pass sequencing on the delivery fleet") {
    ProgramRequirements r = load_scenario("clps");
    std::mt19937 rng(7);
    for (int k = 0; k < 20; ++k) {
        ScheduleVector s = generate_feasible_guess(r, rng);
        REQUIRE(static_cast<int>(s.size()) == r.payload_count());
        CHECK(check_sequencing(s, r));
    }
}

TEST_CASE("guesses handle return payloads that change vehicles between legs") {
    // The crewed programs return crew and samples via an ascent vehicle plus
    // a separate Earth-return vehicle; no single vehicle flies both legs.
    for (const char* name : {"apollo", "artemis_2b"}) {
        CAPTURE(name);
        ProgramRequirements r = load_scenario(name);
        std::mt19937 rng(11);
        for (int k = 0; k < 5; ++k) {
            ScheduleVector s = generate_feasible_guess(r, rng);
            CHECK(check_sequencing(s, r));
        }
    }
}

TEST_CASE("a forced window with one vehicle yields a deterministic guess") {
    ProgramRequirements r = load_scenario("toy_single");
    REQUIRE(r.payloads[0].window_lower == r.payloads[0].window_upper);
    std::mt19937 a(1), b(99);
    CHECK(generate_feasible_guess(r, a) ==
          ScheduleVector{r.payloads[0].window_lower});
    CHECK(generate_feasible_guess(r, b) ==
          ScheduleVector{r.payloads[0].window_lower});
}

TEST_CASE("guess generation fails when no vehicle can ever carry a payload") {
    ProgramRequirements r = load_scenario("toy_single");
    r.payloads[0].quantity = 1.0e6;  // heavier than every bay at every month
    std::mt19937 rng(3);
    CHECK_THROWS_AS(generate_feasible_guess(r, rng), GuessGenerationError);
}

TEST_CASE("evaluate applies the death penalty to broken sequencing") {
    ProgramRequirements r = load_scenario("toy_2x2");
    ScheduleVector bad{0, 0};  // payload 1 window starts at month 1
    EvaluationResult ev = evaluate(bad, r);
    CHECK(!ev.feasible);
    CHECK(ev.penalized_objective == doctest::Approx(r.constants.death_penalty));
    CHECK(!ev.flow.has_value());
}

TEST_CASE("evaluate applies the death penalty to MILP-infeasible schedules") {
    ProgramRequirements r = load_scenario("toy_single");
    r.payloads[0].quantity = 500.0;  // exceeds the 200 kg bay
    EvaluationResult ev = evaluate({0}, r);
    CHECK(!ev.feasible);
    CHECK(ev.penalized_objective == doctest::Approx(r.constants.death_penalty));
}

TEST_CASE("the penalty combines the MILP mass with the coincidence term") {
    ProgramRequirements r = load_scenario("toy_2x2");
    ScheduleVector same{2, 2};

    EvaluationResult plain = evaluate(same, r);
    REQUIRE(plain.feasible);
    CHECK(plain.penalized_objective == doctest::Approx(plain.milp_objective));

    PenaltyConfig pen;
    pen.gamma_mode = PenaltyConfig::GammaMode::kCoincidentExponential;
    pen.k = 250.0;
    EvaluationResult penal = evaluate(same, r, pen);
    REQUIRE(penal.feasible);
    CHECK(penal.milp_objective == doctest::Approx(plain.milp_objective));
    CHECK(penal.penalized_objective ==
          doctest::Approx(penal.milp_objective + 250.0 * std::exp(1.0)));

    // Distinct months carry exp(0) = 1 worth of penalty.
    EvaluationResult spread = evaluate({1, 2}, r, pen);
    REQUIRE(spread.feasible);
    CHECK(spread.penalized_objective ==
          doctest::Approx(spread.milp_objective + 250.0));

    // Lambda scales the mass term.
    pen.gamma_mode = PenaltyConfig::GammaMode::kNone;
    pen.lambda = 2.0;
    EvaluationResult scaled = evaluate(same, r, pen);
    CHECK(scaled.penalized_objective ==
          doctest::Approx(2.0 * scaled.milp_objective));
}

TEST_CASE("the GA matches exhaustive enumeration on a tiny program") {
    ProgramRequirements r = load_scenario("toy_2x2");

    // Exhaustive oracle over the full window cross product.
    double best_exhaustive = std::numeric_limits<double>::infinity();
    for (int a = r.payloads[0].window_lower; a <= r.payloads[0].window_upper; ++a)
        for (int b = r.payloads[1].window_lower; b <= r.payloads[1].window_upper;
             ++b) {
            EvaluationResult ev = evaluate({a, b}, r);
            if (ev.feasible)
                best_exhaustive =
                    std::min(best_exhaustive, ev.penalized_objective);
        }
    REQUIRE(best_exhaustive < std::numeric_limits<double>::infinity());

    GaConfig ga;
    ga.islands = 2;
    ga.population_per_island = 8;
    ga.generations = 12;
    ga.rng_seed = 5;
    ga.stall_generations = 0;
    OptimizeResult res = optimize(r, ga);
    REQUIRE(res.best.feasible);
    CHECK(res.best.penalized_objective ==
          doctest::Approx(best_exhaustive).epsilon(1e-6));

    // Elitism: per-generation history never worsens.
    for (size_t g = 1; g < res.history.size(); ++g)
        CHECK(res.history[g] <= res.history[g - 1] + 1e-9);
}

TEST_CASE("a single forced schedule optimizes to its own evaluation") {
    ProgramRequirements r = load_scenario("toy_single");
    GaConfig ga;
    ga.islands = 1;
    ga.population_per_island = 4;
    ga.generations = 2;
    OptimizeResult res = optimize(r, ga);
    EvaluationResult direct = evaluate({r.payloads[0].window_lower}, r);
    REQUIRE(res.best.feasible);
    CHECK(res.best.schedule == ScheduleVector{r.payloads[0].window_lower});
    CHECK(res.best.milp_objective == doctest::Approx(direct.milp_objective));
}

TEST_CASE("optimization runs are reproducible from the seed") {
    ProgramRequirements r = load_scenario("toy_2x2");
    GaConfig ga;
    ga.islands = 2;
    ga.population_per_island = 6;
    ga.generations = 6;
    ga.rng_seed = 11;
    OptimizeResult a = optimize(r, ga);
    OptimizeResult b = optimize(r, ga);
    CHECK(a.best.schedule == b.best.schedule);
    CHECK(a.best.penalized_objective ==
          doctest::Approx(b.best.penalized_objective));
    CHECK(a.history == b.history);
}
