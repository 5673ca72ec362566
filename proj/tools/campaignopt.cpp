// Command-line front end: validate inputs, evaluate a schedule, run the
// genetic optimizer, cross-check against the integrated window MILP, or
// export the model file. Exit codes: 0 success, 2 infeasible program,
// 3 budget/limit reached, 1 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "campaignopt/io.hpp"
#include "campaignopt/reporting.hpp"
#include "campaignopt/scenarios.hpp"
#include "campaignopt/scheduler.hpp"

using json = nlohmann::json;
using namespace campaignopt;

namespace {

constexpr int kExitOk = 0, kExitInput = 1, kExitInfeasible = 2, kExitLimit = 3;

json report_to_json(const CampaignReport& rep) {
    json j;
    j["objective_kg"] = rep.objective;
    j["launch_count"] = rep.launch_count;
    j["launches"] = json::array();
    for (const auto& m : rep.launches) {
        json l;
        l["step"] = m.step;
        l["month"] = m.month;
        l["calendar"] = calendar_month(m.month);
        l["vehicle"] = m.vehicle;
        l["vehicle_units"] = m.vehicle_units;
        l["total_mass_kg"] = m.total_mass;
        for (int p = 0; p < kNumCommodities; ++p)
            if (m.commodity_mass[p] != 0.0)
                l["commodity_mass_kg"][std::to_string(p)] = m.commodity_mass[p];
        j["launches"].push_back(std::move(l));
    }
    for (const auto& [veh, units] : rep.vehicle_usage)
        j["vehicle_usage"][std::to_string(veh)] = units;
    j["isru"] = {{"oxidizer_produced_kg", rep.isru.oxidizer_produced},
                 {"maintenance_delivered_kg", rep.isru.maintenance_delivered},
                 {"plant_mass_peak_kg", rep.isru.plant_mass_peak}};
    return j;
}

void write_solver_stats_csv(const SolverStats& s, const std::string& path) {
    std::ofstream out(path);
    out << "variables,constraints,reduced_variables,reduced_constraints,"
           "nodes,simplex_iterations,root_relaxation,best_bound,wall_time_s\n";
    out << s.variables << ',' << s.constraints << ',' << s.reduced_variables
        << ',' << s.reduced_constraints << ',' << s.nodes << ','
        << s.simplex_iterations << ',' << s.root_relaxation << ','
        << s.best_bound << ',' << s.wall_time_s << '\n';
}

struct CommonArgs {
    std::string scenario, vehicles, payloads, network, stacks;
    std::string out_dir = ".";
    std::string backend;
    double gap = 1e-6;
    double time_budget = 0.0;

    ProgramRequirements load() const {
        if (!scenario.empty()) return load_scenario(scenario);
        if (vehicles.empty() || payloads.empty() || network.empty())
            throw ValidationError(
                "provide --scenario or all of --vehicles/--payloads/--network");
        return load_campaign(vehicles, payloads, network, stacks);
    }
    SolverConfig solver_config() const {
        SolverConfig cfg;
        cfg.rel_gap = gap;
        cfg.time_budget_s = time_budget;
        cfg.backend = backend;
        return cfg;
    }
    void attach(CLI::App* cmd) {
        cmd->add_option("--scenario", scenario, "bundled scenario name");
        cmd->add_option("--vehicles", vehicles, "vehicle definition file");
        cmd->add_option("--payloads", payloads, "payload definition file");
        cmd->add_option("--network", network, "network definition file");
        cmd->add_option("--stacks", stacks, "stack definition file");
        cmd->add_option("--out-dir", out_dir, "directory for output artifacts");
        cmd->add_option("--gap", gap, "relative MILP optimality gap");
        cmd->add_option("--time-budget", time_budget,
                        "solver wall-clock budget in seconds (0 = none)");
        cmd->add_option("--backend", backend,
                        "MILP backend: empty = builtin, or external:<command>");
    }
};

int emit_artifacts(const CommonArgs& args, const ProgramRequirements& r,
                   const EvaluationResult& ev) {
    if (!ev.feasible) return kExitInfeasible;
    ReducedTimeline tl = build_reduced_timeline(ev.schedule, r.network);
    DemandMatrix d = build_demand_matrix(r, ev.schedule, tl);
    MilpModel model = build_milp(r, d, tl);
    CampaignReport rep = summarize(model, *ev.flow, r, tl);
    json j = report_to_json(rep);
    j["schedule"] = ev.schedule;
    j["milp_objective_kg"] = ev.milp_objective;
    j["penalized_objective"] = ev.penalized_objective;
    std::ofstream(args.out_dir + "/report.json") << j.dump(2) << '\n';
    write_flows_csv(model, *ev.flow, args.out_dir + "/flows.csv");
    emit_graph(model, *ev.flow, r, tl, args.out_dir + "/campaign.gv");
    write_solver_stats_csv(ev.stats, args.out_dir + "/solver_stats.csv");
    std::printf("objective %.3f kg, %d launches\n", rep.objective,
                rep.launch_count);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"space campaign logistics optimizer"};
    app.require_subcommand(1);

    CommonArgs args;
    std::vector<int> schedule;
    unsigned seed = 0;
    int islands = 5, pop = 20, generations = 200;
    double mutation = 0.05, penalty_k = 0.0;
    std::string export_path = "model.milpcf";

    auto* validate = app.add_subcommand("validate", "load and check inputs");
    args.attach(validate);

    auto* evaluate_cmd =
        app.add_subcommand("evaluate", "solve the flow MILP for one schedule");
    args.attach(evaluate_cmd);
    evaluate_cmd->add_option("--schedule", schedule, "launch month per payload")
        ->required();
    evaluate_cmd->add_option("--penalty-k", penalty_k,
                             "coincident-launch penalty coefficient");

    auto* optimize_cmd =
        app.add_subcommand("optimize", "genetic search over schedules");
    args.attach(optimize_cmd);
    optimize_cmd->add_option("--seed", seed, "RNG seed");
    optimize_cmd->add_option("--islands", islands, "island count");
    optimize_cmd->add_option("--pop", pop, "population per island");
    optimize_cmd->add_option("--generations", generations, "generation count");
    optimize_cmd->add_option("--mutation", mutation, "per-gene mutation rate");
    optimize_cmd->add_option("--penalty-k", penalty_k,
                             "coincident-launch penalty coefficient");

    auto* crosscheck_cmd = app.add_subcommand(
        "crosscheck", "integrated window MILP over the full timeline");
    args.attach(crosscheck_cmd);

    auto* export_cmd = app.add_subcommand("export", "write the model file");
    args.attach(export_cmd);
    export_cmd->add_option("--schedule", schedule, "launch month per payload")
        ->required();
    export_cmd->add_option("--output", export_path, "model file path");

    CLI11_PARSE(app, argc, argv);

    try {
        ProgramRequirements r = args.load();
        PenaltyConfig penalty;
        if (penalty_k > 0.0) {
            penalty.gamma_mode = PenaltyConfig::GammaMode::kCoincidentExponential;
            penalty.k = penalty_k;
        }

        if (validate->parsed()) {
            std::printf("ok: %d vehicles (+%d stacks), %d payloads, %d nodes\n",
                        r.base_vehicle_count(),
                        r.vehicle_count() - r.base_vehicle_count(),
                        r.payload_count(), r.network.node_count());
            return kExitOk;
        }

        if (evaluate_cmd->parsed()) {
            EvaluationResult ev =
                evaluate(schedule, r, penalty, args.solver_config());
            if (!ev.feasible) {
                bool limited = ev.stats.nodes > 0 &&
                               args.time_budget > 0.0 &&
                               ev.stats.wall_time_s >= args.time_budget;
                std::fprintf(stderr, "schedule is %s\n",
                             limited ? "unresolved within budget" : "infeasible");
                return limited ? kExitLimit : kExitInfeasible;
            }
            return emit_artifacts(args, r, ev);
        }

        if (optimize_cmd->parsed()) {
            GaConfig ga;
            ga.islands = islands;
            ga.population_per_island = pop;
            ga.generations = generations;
            ga.mutation_probability = mutation;
            ga.rng_seed = seed;
            OptimizeResult res = optimize(
                r, ga, penalty, args.solver_config(),
                [](int gen, int isl, double best) {
                    std::printf("gen %d island %d best %.3f\n", gen, isl, best);
                });
            std::ofstream hist(args.out_dir + "/history.csv");
            hist << "generation,best_penalized_objective\n";
            for (size_t g = 0; g < res.history.size(); ++g)
                hist << g << ',' << res.history[g] << '\n';
            return emit_artifacts(args, r, res.best);
        }

        if (crosscheck_cmd->parsed()) {
            IntegratedModelInputs in = integrated_window_demands(r);
            MilpModel model = build_milp(r, in.demand, in.timeline);
            SolveResult sr = solve_milp(model, args.solver_config());
            write_solver_stats_csv(sr.stats, args.out_dir + "/solver_stats.csv");
            if (sr.status == SolveStatus::kOptimal) {
                std::printf("crosscheck objective %.6f kg\n", sr.objective);
                return kExitOk;
            }
            std::fprintf(stderr, "crosscheck: %s\n", to_string(sr.status));
            return sr.status == SolveStatus::kInfeasible ? kExitInfeasible
                                                         : kExitLimit;
        }

        if (export_cmd->parsed()) {
            ReducedTimeline tl = build_reduced_timeline(schedule, r.network);
            DemandMatrix d = build_demand_matrix(r, schedule, tl);
            MilpModel model = build_milp(r, d, tl);
            export_model(model, export_path);
            std::printf("wrote %s (%d vars, %d rows)\n", export_path.c_str(),
                        model.lp.num_vars(), model.lp.num_rows());
            return kExitOk;
        }
    } catch (const UnsupportedProgramError& e) {
        std::fprintf(stderr, "unsupported: %s\n", e.what());
        return kExitInput;
    } catch (const GuessGenerationError& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    }
    return kExitInput;
}
