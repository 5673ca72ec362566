#pragma once

// Metaheuristic outer layer: sequencing checks on launch schedules, a feasible
// guess generator, penalized evaluation through the commodity-flow MILP, and
// an island-model genetic optimizer over ScheduleVector.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "campaignopt/datamodel.hpp"
#include "campaignopt/demand.hpp"
#include "campaignopt/milp_model.hpp"
#include "campaignopt/solver.hpp"
#include "campaignopt/timeline.hpp"

namespace campaignopt {

// Penalized objective shape: penalized = lambda * F + gamma.
struct PenaltyConfig {
    enum class GammaMode { kNone, kCoincidentExponential };
    double lambda = 1.0;          // multiplicative scaling of the MILP mass
    GammaMode gamma_mode = GammaMode::kNone;
    double k = 0.0;               // coefficient of k * exp(N) when exponential
};

struct GaConfig {
    int islands = 5;
    int population_per_island = 20;
    int generations = 200;
    double mutation_probability = 0.05;  // per gene group
    unsigned rng_seed = 0;
    // Wall-clock budget per evolution-time MILP evaluation; candidates that
    // cannot close their tree in time are ranked by their best incumbent.
    double eval_time_budget_s = 3.0;
    // Stop early after this many generations without improvement (0: never).
    int stall_generations = 30;
};

struct EvaluationResult {
    ScheduleVector schedule;
    bool feasible = false;
    double milp_objective = 0.0;       // F, kg (valid when feasible)
    double penalized_objective = 0.0;  // lambda*F + gamma, or death penalty
    std::optional<FlowSolution> flow;
    SolverStats stats;
};

class GuessGenerationError : public std::runtime_error {
public:
    explicit GuessGenerationError(const std::string& msg)
        : std::runtime_error(msg) {}
};

// True iff the schedule satisfies window bounds, soft precursors (t_q <= t_l),
// strict precursors (t_q < t_l) and co-payload equality (t_q = t_l).
inline bool check_sequencing(const ScheduleVector& schedule,
                             const ProgramRequirements& r) {
    if (static_cast<int>(schedule.size()) != r.payload_count())
        throw std::invalid_argument("check_sequencing: schedule length mismatch");
    for (int l = 0; l < r.payload_count(); ++l) {
        const Payload& p = r.payloads[l];
        int t = schedule[l];
        if (t < p.window_lower || t > p.window_upper) return false;
        for (int q : p.soft_precursors)
            if (schedule[q] > t) return false;
        for (int q : p.strict_precursors)
            if (schedule[q] >= t) return false;
        for (int q : p.co_payloads)
            if (schedule[q] != t) return false;
    }
    return true;
}

// Count of coincident (non-unique) launch months after collapsing co-payload
// groups to a single entry each; mandatory coincidences are not penalized.
inline int coincident_count(const ScheduleVector& schedule,
                            const ProgramRequirements& r) {
    std::set<int> distinct;
    int entries = 0;
    for (const auto& group : co_payload_groups(r.payloads)) {
        ++entries;
        distinct.insert(schedule.at(group.front()));
    }
    return entries - static_cast<int>(distinct.size());
}

namespace scheduler_detail {

// Mass a payload adds against a vehicle's payload capacity.
inline double payload_mass(const Payload& p, const GlobalConstants& gc) {
    return p.type_index == COM_CREW ? p.quantity * gc.crew_mass : p.quantity;
}

inline int rand_int(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace scheduler_detail

// One pseudo-random schedule that always passes check_sequencing. Payloads are
// visited in id order; co-payloads inherit an already-chosen month, everything
// else picks a random month in its window tightened by its precursors, then
// hunts for a vehicle that is available, has payload capacity left alongside
// same-month assignments, and respects launch-frequency spacing. Non-Earth
// payloads instead need some vehicle able to fly the return legs. When a month
// admits no vehicle, a later month in the window is tried; when the whole
// window is exhausted the program is infeasible at guess level.
inline ScheduleVector generate_feasible_guess(const ProgramRequirements& r,
                                              std::mt19937& rng) {
    using scheduler_detail::payload_mass;
    using scheduler_detail::rand_int;
    const int np = r.payload_count();
    const int nv = r.vehicle_count();
    const auto& gc = r.constants;

    for (int attempt = 0; attempt < 64; ++attempt) {
        ScheduleVector x(np, 0);
        std::vector<int> v(np);
        for (int i = 0; i < np; ++i) v[i] = rand_int(rng, 0, nv - 1);
        bool ok = true;

        for (int i = 0; i < np && ok; ++i) {
            const Payload& p = r.payloads[i];
            // Co-payload inheritance from an already-assigned member.
            int inherit = -1;
            for (int j : p.co_payloads)
                if (j < i) inherit = j;
            if (inherit >= 0) {
                x[i] = x[inherit];
                continue;
            }
            int t_l = p.window_lower;
            for (int j : p.soft_precursors) t_l = std::max(t_l, x[j]);
            for (int j : p.strict_precursors) t_l = std::max(t_l, x[j] + 1);
            if (t_l > p.window_upper) {
                ok = false;
                break;
            }
            x[i] = t_l == p.window_upper ? t_l : rand_int(rng, t_l, p.window_upper);

            int tries = 0;
            const int max_tries = 8 * (p.window_upper - t_l + 1) + 8;
            while (true) {
                std::vector<int> valid;
                if (p.origin == 0) {
                    for (int n = 0; n < nv; ++n) {
                        const Vehicle& veh = r.vehicles[n];
                        if (veh.earliest_launch > x[i]) continue;
                        double mass = payload_mass(p, gc);
                        bool spaced = true;
                        for (int j = 0; j < i; ++j) {
                            if (v[j] != n) continue;
                            int gap = std::abs(x[j] - x[i]);
                            if (x[j] == x[i])
                                mass += payload_mass(r.payloads[j], gc);
                            else if (gap < veh.launch_frequency)
                                spaced = false;
                        }
                        if (spaced && mass <= veh.payload_capacity)
                            valid.push_back(n);
                    }
                } else {
                    // Payloads starting away from Earth may change vehicles
                    // between legs. Candidate vehicles are those able to fly
                    // the first leg out of the origin toward the target,
                    // provided every later leg of some monotone path is
                    // covered by at least one vehicle.
                    const bool outbound = p.target > p.origin;
                    auto toward = [&](int a, int b) {
                        return outbound ? b > a : b < a;
                    };
                    auto leg_covered = [&](int a, int b) {
                        if (!r.network.arc_exists(a, b)) return false;
                        for (int n = 0; n < nv; ++n)
                            if (r.vehicles[n].can_traverse(a, b)) return true;
                        return false;
                    };
                    std::function<bool(int)> reaches = [&](int a) {
                        if (a == p.target) return true;
                        for (const auto& [b, name] : r.network.nodes)
                            if (toward(a, b) && leg_covered(a, b) && reaches(b))
                                return true;
                        return false;
                    };
                    for (int n = 0; n < nv; ++n) {
                        const Vehicle& veh = r.vehicles[n];
                        for (const auto& [b, name] : r.network.nodes)
                            if (toward(p.origin, b) &&
                                veh.can_traverse(p.origin, b) &&
                                r.network.arc_exists(p.origin, b) &&
                                (b == p.target || reaches(b))) {
                                valid.push_back(n);
                                break;
                            }
                    }
                }
                if (!valid.empty()) {
                    v[i] = valid[rand_int(rng, 0, static_cast<int>(valid.size()) - 1)];
                    break;
                }
                if (++tries >= max_tries) {
                    // Window exhausted under this partial assignment; scrap
                    // the attempt and re-randomize from the top.
                    ok = false;
                    break;
                }
                // Try a later slice of the window.
                t_l = t_l == p.window_upper ? t_l : rand_int(rng, t_l, p.window_upper);
                x[i] = t_l == p.window_upper ? t_l : rand_int(rng, t_l, p.window_upper);
            }
        }
        if (ok && check_sequencing(x, r)) return x;
    }
    throw GuessGenerationError(
        "could not generate a schedule passing sequencing checks");
}

// Penalized evaluation of one schedule: sequencing gate, then the commodity
// flow MILP on the reduced timeline. Any failure (sequencing, infeasible MILP,
// solver limit) earns the death penalty. With accept_limit, a budget-limited
// solve that still produced an integer incumbent counts as feasible with the
// incumbent's mass (an upper bound); the GA uses this so expensive candidates
// are ranked by their best known cost instead of dying outright.
inline EvaluationResult evaluate(const ScheduleVector& schedule,
                                 const ProgramRequirements& r,
                                 const PenaltyConfig& penalty = {},
                                 const SolverConfig& solver_cfg = {},
                                 bool accept_limit = false) {
    EvaluationResult out;
    out.schedule = schedule;
    out.penalized_objective = r.constants.death_penalty;
    if (!check_sequencing(schedule, r)) return out;

    ReducedTimeline tl = build_reduced_timeline(schedule, r.network);
    DemandMatrix d = build_demand_matrix(r, schedule, tl);
    MilpModel model = build_milp(r, d, tl);
    SolveResult sr = solve_milp(model, solver_cfg);
    out.stats = sr.stats;
    bool usable = sr.status == SolveStatus::kOptimal ||
                  (accept_limit && sr.status == SolveStatus::kLimit &&
                   !sr.x.empty());
    if (!usable) return out;

    out.feasible = true;
    out.milp_objective = sr.objective;
    double gamma = 0.0;
    if (penalty.gamma_mode == PenaltyConfig::GammaMode::kCoincidentExponential)
        gamma = penalty.k * std::exp(static_cast<double>(
                                coincident_count(schedule, r)));
    out.penalized_objective = penalty.lambda * sr.objective + gamma;
    out.flow = FlowSolution{sr.objective, sr.x};
    return out;
}

struct OptimizeResult {
    EvaluationResult best;
    std::vector<double> history;  // best penalized objective per generation
    long long evaluations = 0;    // distinct schedules solved
};

// Progress callback: (generation, island, best penalized objective so far).
using ProgressFn = std::function<void(int, int, double)>;

// Island-model GA over launch schedules. Genes are co-payload groups (members
// move together); selection is tournament of two, crossover uniform per gene,
// mutation resamples a gene uniformly in its window intersection. Each
// generation the best individual of every island replaces the worst of the
// next island on a ring. Evolution-time MILP solves use a loosened gap and a
// time budget so expensive candidates fail fast to the death penalty; the
// winning schedule is re-evaluated with the caller's exact settings at the
// end, which can only confirm or improve its objective.
// Evolution-time evaluation cache; pass one across optimize() calls to reuse
// MILP solves of schedules both runs visit (the penalty and solver settings
// must match between the calls that share it).
using EvalCache = std::map<ScheduleVector, EvaluationResult>;

inline OptimizeResult optimize(const ProgramRequirements& r,
                               const GaConfig& ga = {},
                               const PenaltyConfig& penalty = {},
                               const SolverConfig& solver_cfg = {},
                               const ProgressFn& progress = {},
                               EvalCache* shared_cache = nullptr) {
    using scheduler_detail::rand_int;
    const auto groups = co_payload_groups(r.payloads);
    const int ng = static_cast<int>(groups.size());

    // Per-group window intersection for mutation bounds.
    std::vector<std::pair<int, int>> window(ng);
    for (int g = 0; g < ng; ++g) {
        int lo = std::numeric_limits<int>::min();
        int hi = std::numeric_limits<int>::max();
        for (int l : groups[g]) {
            lo = std::max(lo, r.payloads[l].window_lower);
            hi = std::min(hi, r.payloads[l].window_upper);
        }
        window[g] = {lo, hi};
    }
    auto set_gene = [&](ScheduleVector& s, int g, int month) {
        for (int l : groups[g]) s[l] = month;
    };

    SolverConfig inner = solver_cfg;
    inner.rel_gap = std::max(solver_cfg.rel_gap, 1e-4);
    if (ga.eval_time_budget_s > 0.0) inner.time_budget_s = ga.eval_time_budget_s;

    EvalCache local_cache;
    EvalCache& cache = shared_cache ? *shared_cache : local_cache;
    OptimizeResult out;
    auto eval_cached = [&](const ScheduleVector& s) -> const EvaluationResult& {
        auto it = cache.find(s);
        if (it == cache.end()) {
            ++out.evaluations;
            it = cache.emplace(s, evaluate(s, r, penalty, inner, true)).first;
        }
        return it->second;
    };

    struct Individual {
        ScheduleVector schedule;
        double fitness = 0.0;
    };
    std::vector<std::vector<Individual>> islands(ga.islands);
    std::vector<std::mt19937> rngs;
    for (int isl = 0; isl < ga.islands; ++isl)
        rngs.emplace_back(ga.rng_seed * 7919u + 104729u * (isl + 1));

    for (int isl = 0; isl < ga.islands; ++isl) {
        auto& pop = islands[isl];
        for (int i = 0; i < ga.population_per_island; ++i) {
            Individual ind;
            ind.schedule = generate_feasible_guess(r, rngs[isl]);
            ind.fitness = eval_cached(ind.schedule).penalized_objective;
            pop.push_back(std::move(ind));
        }
    }

    ScheduleVector best_schedule;
    double best_fitness = std::numeric_limits<double>::infinity();
    auto consider = [&](const Individual& ind) {
        if (ind.fitness < best_fitness) {
            best_fitness = ind.fitness;
            best_schedule = ind.schedule;
        }
    };
    for (const auto& pop : islands)
        for (const auto& ind : pop) consider(ind);

    int last_improvement = 0;
    for (int gen = 0; gen < ga.generations; ++gen) {
        double gen_start_best = best_fitness;
        for (int isl = 0; isl < ga.islands; ++isl) {
            auto& pop = islands[isl];
            auto& rng = rngs[isl];
            const int psize = static_cast<int>(pop.size());
            auto tournament = [&]() -> const Individual& {
                const Individual& a = pop[rand_int(rng, 0, psize - 1)];
                const Individual& b = pop[rand_int(rng, 0, psize - 1)];
                return a.fitness <= b.fitness ? a : b;
            };
            std::vector<Individual> next;
            // Elitism: carry the island's best unchanged.
            int eb = 0;
            for (int i = 1; i < psize; ++i)
                if (pop[i].fitness < pop[eb].fitness) eb = i;
            next.push_back(pop[eb]);
            while (static_cast<int>(next.size()) < psize) {
                const Individual& pa = tournament();
                const Individual& pb = tournament();
                Individual child;
                child.schedule = pa.schedule;
                for (int g = 0; g < ng; ++g) {
                    if (rand_int(rng, 0, 1))
                        set_gene(child.schedule, g, pb.schedule[groups[g].front()]);
                    if (std::generate_canonical<double, 32>(rng) <
                        ga.mutation_probability)
                        set_gene(child.schedule, g,
                                 rand_int(rng, window[g].first, window[g].second));
                }
                child.fitness = eval_cached(child.schedule).penalized_objective;
                next.push_back(std::move(child));
            }
            pop = std::move(next);
            for (const auto& ind : pop) consider(ind);
            if (progress) progress(gen, isl, best_fitness);
        }
        // Ring migration: each island's best replaces its neighbor's worst.
        if (ga.islands > 1) {
            std::vector<Individual> migrants;
            for (const auto& pop : islands) {
                int b = 0;
                for (int i = 1; i < static_cast<int>(pop.size()); ++i)
                    if (pop[i].fitness < pop[b].fitness) b = i;
                migrants.push_back(pop[b]);
            }
            for (int isl = 0; isl < ga.islands; ++isl) {
                auto& pop = islands[(isl + 1) % ga.islands];
                int w = 0;
                for (int i = 1; i < static_cast<int>(pop.size()); ++i)
                    if (pop[i].fitness > pop[w].fitness) w = i;
                pop[w] = migrants[isl];
            }
        }
        out.history.push_back(best_fitness);
        if (best_fitness < gen_start_best) last_improvement = gen;
        if (ga.stall_generations > 0 &&
            gen - last_improvement >= ga.stall_generations)
            break;
    }

    if (best_schedule.empty())
        throw GuessGenerationError("optimize: no individual was feasible");
    // Exact re-evaluation of the winner with the caller's settings.
    out.best = evaluate(best_schedule, r, penalty, solver_cfg);
    if (!out.best.feasible) {
        // The loose-budget evaluation found it feasible; fall back to it.
        out.best = cache.at(best_schedule);
    }
    return out;
}

}  // namespace campaignopt
