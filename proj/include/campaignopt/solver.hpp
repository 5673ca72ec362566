#pragma once

// MILP solving facade: substitution presolve, LP relaxation by dual simplex,
// best-bound branch-and-bound with warm starts, and an optional external
// backend invoked through the exported model file.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <unistd.h>
#include <fstream>
#include <queue>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "campaignopt/milp_model.hpp"
#include "campaignopt/solver/dual_simplex.hpp"
#include "campaignopt/solver/lp_presolve.hpp"

namespace campaignopt {

enum class SolveStatus { kOptimal, kInfeasible, kLimit, kError };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::kOptimal: return "optimal";
        case SolveStatus::kInfeasible: return "infeasible";
        case SolveStatus::kLimit: return "limit";
        default: return "error";
    }
}

struct SolverConfig {
    double rel_gap = 1e-6;
    long long node_limit = 200000;
    double time_budget_s = 0.0;  // 0: unlimited
    bool presolve = true;
    std::string backend;  // "" = builtin; "external:<command>" shells out
    double cutoff = std::numeric_limits<double>::infinity();  // prune bound
};

struct SolverStats {
    int variables = 0, constraints = 0;
    int reduced_variables = 0, reduced_constraints = 0;
    long long nodes = 0;
    long long simplex_iterations = 0;
    double root_relaxation = 0.0;
    double best_bound = 0.0;
    double wall_time_s = 0.0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::kError;
    double objective = 0.0;
    std::vector<double> x;  // aligned with the full model's variables
    SolverStats stats;
};

namespace solver::detail {

inline bool integral_enough(const std::vector<double>& x,
                            const std::vector<std::uint8_t>& isint, int n) {
    for (int j = 0; j < n; ++j)
        if (isint[j] && std::fabs(x[j] - std::round(x[j])) > 1e-6) return false;
    return true;
}

// Branching variable: most fractional integer, with flagged variables
// (aggregate counts that break step symmetry) taking priority.
inline int pick_branch_var(const std::vector<double>& x,
                           const std::vector<std::uint8_t>& isint,
                           const std::vector<std::uint8_t>& prefer, int n) {
    int best = -1;
    double best_score = 0.0;
    bool best_pref = false;
    for (int j = 0; j < n; ++j) {
        if (!isint[j]) continue;
        double f = x[j] - std::floor(x[j]);
        double dist = std::min(f, 1.0 - f);
        if (dist <= 1e-6) continue;
        bool pref = j < static_cast<int>(prefer.size()) && prefer[j];
        if (pref > best_pref || (pref == best_pref && dist > best_score)) {
            best_pref = pref;
            best_score = dist;
            best = j;
        }
    }
    return best;
}

}  // namespace solver::detail

// Solves min c'x over the LinearProgram (integrality per lp.integer).
inline SolveResult solve_linear_program(const LinearProgram& lp,
                                        const SolverConfig& cfg = {}) {
    using namespace solver;
    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    };

    SolveResult res;
    res.stats.variables = lp.num_vars();
    res.stats.constraints = lp.num_rows();

    PresolvedLp pre;
    const LinearProgram* work = &lp;
    if (cfg.presolve) {
        pre = presolve_substitute(lp);
        if (pre.infeasible) {
            res.status = SolveStatus::kInfeasible;
            res.stats.wall_time_s = elapsed();
            return res;
        }
        work = &pre.reduced;
    }
    res.stats.reduced_variables = work->num_vars();
    res.stats.reduced_constraints = work->num_rows();

    LpCore core(*work);
    DualSimplex simplex(core);
    if (cfg.time_budget_s > 0)
        simplex.deadline =
            t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(cfg.time_budget_s));
    const int nred = work->num_vars();

    std::vector<int> basic;
    std::vector<std::uint8_t> vstat;
    std::vector<double> x;

    auto finalize = [&](double obj_reduced, const std::vector<double>& xred) {
        std::vector<double> xr(xred.begin(), xred.begin() + nred);
        res.x = cfg.presolve ? pre.restore(xr) : xr;
        // Snap integers and recompute the objective on the original model.
        for (int j = 0; j < lp.num_vars(); ++j)
            if (lp.integer[j] &&
                std::fabs(res.x[j] - std::round(res.x[j])) < 1e-6)
                res.x[j] = std::round(res.x[j]);
        double obj = lp.objective_offset;
        for (int j = 0; j < lp.num_vars(); ++j) obj += lp.cost[j] * res.x[j];
        res.objective = obj;
        (void)obj_reduced;
    };

    SimplexResult root = simplex.solve(basic, vstat, x);
    res.stats.simplex_iterations += root.iterations;
    res.stats.nodes = 1;
    if (root.status == LpStatus::kInfeasible) {
        res.status = SolveStatus::kInfeasible;
        res.stats.wall_time_s = elapsed();
        return res;
    }
    if (root.status != LpStatus::kOptimal) {
        res.status = root.status == LpStatus::kIterLimit ? SolveStatus::kLimit
                                                         : SolveStatus::kError;
        res.stats.wall_time_s = elapsed();
        return res;
    }
    double root_obj = root.objective + work->objective_offset;
    res.stats.root_relaxation = root_obj;
    res.stats.best_bound = root_obj;

    if (solver::detail::integral_enough(x, work->integer, nred)) {
        finalize(root.objective, x);
        res.status = SolveStatus::kOptimal;
        res.stats.wall_time_s = elapsed();
        return res;
    }

    // Branch and bound. Bounds are reconstructed per node from the root
    // bounds plus the node's change list; the previous node's final basis is
    // always a valid dual-feasible warm start because reduced costs do not
    // depend on variable bounds.
    struct BoundChange {
        int var;
        double lb, ub;
    };
    struct Node {
        double bound;
        std::vector<BoundChange> changes;
        bool operator<(const Node& o) const { return bound > o.bound; }
    };
    // Node selection plunges: after each node, one child (the side the
    // fractional value leans toward) is processed next so consecutive solves
    // share a nearby basis, while the sibling goes to a best-bound queue.
    // This finds incumbents early and keeps warm starts cheap.
    std::priority_queue<Node> open;
    std::vector<Node> dive;
    double incumbent = cfg.cutoff;
    std::vector<double> best_x;
    double best_obj_reduced = 0.0;

    // Diving heuristic: from the root solution, repeatedly fix the most
    // fractional integer to its nearest value (retrying the other side once
    // if that is infeasible) and re-solve. Any integral outcome seeds the
    // incumbent, so cutoff pruning is active from the first tree node and
    // budget-limited runs still return a solution.
    {
        std::vector<int> hb = basic;
        std::vector<std::uint8_t> hv = vstat;
        std::vector<double> hx = x;
        for (int depth = 0; depth < 2 * nred; ++depth) {
            if (cfg.time_budget_s > 0 && elapsed() > cfg.time_budget_s) break;
            int j = solver::detail::pick_branch_var(hx, work->integer,
                                                    work->branch_first, nred);
            if (j < 0) {
                double obj = 0.0;
                for (int v = 0; v < nred; ++v) obj += work->cost[v] * hx[v];
                if (obj + work->objective_offset < incumbent) {
                    incumbent = obj + work->objective_offset;
                    best_obj_reduced = obj;
                    best_x = hx;
                }
                break;
            }
            double vlo = std::ceil(simplex.lb[j] - 1e-9);
            double vhi = std::floor(simplex.ub[j] + 1e-9);
            double lb0 = simplex.lb[j], ub0 = simplex.ub[j];
            double f = std::min(std::max(std::round(hx[j]), vlo), vhi);
            double frac = hx[j];
            simplex.lb[j] = simplex.ub[j] = f;
            SimplexResult hr = simplex.solve(hb, hv, hx);
            res.stats.simplex_iterations += hr.iterations;
            if (hr.status != LpStatus::kOptimal) {
                double g = f + (frac > f ? 1.0 : -1.0);
                if (g < vlo || g > vhi) break;
                simplex.lb[j] = lb0;
                simplex.ub[j] = ub0;
                simplex.lb[j] = simplex.ub[j] = g;
                hr = simplex.solve(hb, hv, hx);
                res.stats.simplex_iterations += hr.iterations;
                if (hr.status != LpStatus::kOptimal) break;
            }
        }
        simplex.lb = core.lb0;
        simplex.ub = core.ub0;
    }

    auto push_children = [&](const Node& parent, double bound,
                             const std::vector<double>& sol) {
        int bvar = solver::detail::pick_branch_var(sol, work->integer,
                                                   work->branch_first, nred);
        if (bvar < 0) return;
        double f = std::floor(sol[bvar]);
        Node down = parent;
        down.bound = bound;
        down.changes.push_back({bvar, simplex.lb[bvar], f});
        Node up = parent;
        up.bound = bound;
        up.changes.push_back({bvar, f + 1.0, simplex.ub[bvar]});
        bool up_first = sol[bvar] - f >= 0.5;
        dive.push_back(up_first ? std::move(up) : std::move(down));
        open.push(up_first ? std::move(down) : std::move(up));
    };
    push_children(Node{root_obj, {}}, root_obj, x);

    bool limit_hit = false;
    while (!open.empty() || !dive.empty()) {
        double gap_cut =
            incumbent - cfg.rel_gap * std::max(1.0, std::fabs(incumbent));
        while (!dive.empty() && dive.back().bound >= gap_cut) dive.pop_back();
        if (dive.empty() && !open.empty() && open.top().bound >= gap_cut)
            break;  // proven within gap
        if (cfg.node_limit > 0 && res.stats.nodes >= cfg.node_limit) {
            limit_hit = true;
            break;
        }
        if (cfg.time_budget_s > 0 && elapsed() > cfg.time_budget_s) {
            limit_hit = true;
            break;
        }
        Node node;
        if (!dive.empty()) {
            node = std::move(dive.back());
            dive.pop_back();
        } else {
            node = open.top();
            open.pop();
        }
        if (node.bound >= gap_cut) continue;
        // Apply node bounds.
        simplex.lb = core.lb0;
        simplex.ub = core.ub0;
        for (const auto& bc : node.changes) {
            simplex.lb[bc.var] = std::max(simplex.lb[bc.var], bc.lb);
            simplex.ub[bc.var] = std::min(simplex.ub[bc.var], bc.ub);
        }
        simplex.objective_cutoff = gap_cut - work->objective_offset;
        SimplexResult sr = simplex.solve(basic, vstat, x);
        ++res.stats.nodes;
        res.stats.simplex_iterations += sr.iterations;
        if (sr.status == LpStatus::kInfeasible ||
            sr.status == LpStatus::kCutoff)
            continue;
        if (sr.status != LpStatus::kOptimal) {
            limit_hit = true;
            break;
        }
        double obj = sr.objective + work->objective_offset;
        if (obj >= gap_cut) continue;
        if (solver::detail::integral_enough(x, work->integer, nred)) {
            if (obj < incumbent) {
                incumbent = obj;
                best_obj_reduced = sr.objective;
                best_x = x;
            }
            continue;
        }
        push_children(node, obj, x);
    }
    res.stats.best_bound =
        open.empty() ? incumbent : std::min(incumbent, open.top().bound);

    res.stats.wall_time_s = elapsed();
    if (!best_x.empty()) {
        finalize(best_obj_reduced, best_x);
        res.status = limit_hit ? SolveStatus::kLimit : SolveStatus::kOptimal;
    } else {
        res.status = limit_hit ? SolveStatus::kLimit : SolveStatus::kInfeasible;
    }
    return res;
}

// LP relaxation value (integrality dropped); used for bound checks.
inline SolveResult solve_lp_relaxation(const LinearProgram& lp,
                                       const SolverConfig& cfg = {}) {
    LinearProgram relaxed = lp;
    std::fill(relaxed.integer.begin(), relaxed.integer.end(), 0);
    return solve_linear_program(relaxed, cfg);
}

namespace solver::detail {

// Runs "<command> <model-file> <solution-file>" and parses the reply:
//   STATUS optimal|infeasible|limit
//   OBJ <value>
//   X <var-index> <value>
inline SolveResult solve_external(const LinearProgram& lp,
                                  const std::function<std::string(int)>& name,
                                  const std::string& command) {
    SolveResult res;
    res.stats.variables = lp.num_vars();
    res.stats.constraints = lp.num_rows();
    static int counter = 0;
    std::string base = "/tmp/campaignopt_" + std::to_string(::getpid()) + "_" +
                       std::to_string(counter++);
    std::string model_path = base + ".model";
    std::string sol_path = base + ".sol";
    export_lp(lp, model_path, name);
    std::string cmd = command + " " + model_path + " " + sol_path;
    int rc = std::system(cmd.c_str());
    std::ifstream in(sol_path);
    if (rc != 0 || !in) {
        std::remove(model_path.c_str());
        return res;  // kError
    }
    res.x.assign(lp.num_vars(), 0.0);
    std::string tag;
    bool bound_seen = false;
    while (in >> tag) {
        if (tag == "STATUS") {
            std::string s;
            in >> s;
            if (s == "optimal") res.status = SolveStatus::kOptimal;
            else if (s == "infeasible") res.status = SolveStatus::kInfeasible;
            else if (s == "limit") res.status = SolveStatus::kLimit;
        } else if (tag == "OBJ") {
            in >> res.objective;
        } else if (tag == "BOUND") {
            in >> res.stats.best_bound;
            bound_seen = true;
        } else if (tag == "X") {
            int idx;
            double v;
            in >> idx >> v;
            if (idx >= 0 && idx < lp.num_vars()) res.x[idx] = v;
        }
    }
    std::remove(model_path.c_str());
    std::remove(sol_path.c_str());
    if (!bound_seen) res.stats.best_bound = res.objective;
    return res;
}

}  // namespace solver::detail

inline SolveResult solve_milp(const MilpModel& model,
                              const SolverConfig& cfg = {}) {
    if (model.trivially_infeasible) {
        SolveResult res;
        res.status = SolveStatus::kInfeasible;
        res.stats.variables = model.lp.num_vars();
        res.stats.constraints = model.lp.num_rows();
        return res;
    }
    if (cfg.backend.rfind("external:", 0) == 0)
        return solver::detail::solve_external(
            model.lp, [&](int v) { return model.var_name(v); },
            cfg.backend.substr(9));
    return solve_linear_program(model.lp, cfg);
}

}  // namespace campaignopt
