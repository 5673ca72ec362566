#pragma once

// Bounded-variable dual simplex over a row/column sparse instance.
//
// The computational form is A x + s = b with every column (structural or
// slack) carrying finite-or-infinite bounds. The method starts from any dual
// feasible basis: the all-slack basis is dual feasible whenever each negative
// objective coefficient comes with a finite upper bound (always true here,
// since campaign models have nonnegative costs). Branch-and-bound tightens
// bounds between solves, which preserves dual feasibility of the parent
// basis, so nodes warm-start.
//
// Degeneracy handling: campaign flow models are massively dual degenerate
// (thousands of zero reduced costs), which stalls the plain method. Three
// measures keep it moving and still exact:
//  - a bound-flipping ratio test walks breakpoints of the dual objective in
//    ratio order and flips boxed columns instead of pivoting one at a time;
//  - when the dual bound makes no progress for a stretch of iterations, tiny
//    positive noise is injected into near-zero reduced costs so step lengths
//    become strictly positive (a pivoting heuristic only);
//  - claimed optima are verified against freshly recomputed primal and dual
//    values; residual dual violations are repaired by bound flips or by a
//    primal cleanup pivot, so the returned point is optimal for the true
//    costs regardless of any noise injected along the way.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <vector>

#include "campaignopt/milp_model.hpp"
#include "campaignopt/solver/sparse_lu.hpp"

namespace campaignopt::solver {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPrimalTol = 1e-7;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorEvery = 80;

enum class LpStatus { kOptimal, kInfeasible, kIterLimit, kCutoff, kError };

// Immutable coefficient data shared by all solves of one model.
struct LpCore {
    int m = 0;        // rows
    int nstruct = 0;  // structural columns; slacks occupy [nstruct, nstruct+m)
    std::vector<double> rhs;
    std::vector<double> cost;                // structural only; slacks cost 0
    std::vector<double> lb0, ub0;            // original bounds, all columns
    std::vector<int> col_ptr, col_row;       // CSC of structural columns
    std::vector<double> col_val;
    std::vector<int> row_ptr, row_col;       // CSR of structural part
    std::vector<double> row_val;

    int ncols() const { return nstruct + m; }

    explicit LpCore(const LinearProgram& lp) {
        m = lp.num_rows();
        nstruct = lp.num_vars();
        cost = lp.cost;
        lb0 = lp.lower;
        ub0 = lp.upper;
        rhs.resize(m);
        col_ptr.assign(nstruct + 1, 0);
        std::vector<std::vector<std::pair<int, double>>> cols(nstruct);
        row_ptr.assign(m + 1, 0);
        for (int r = 0; r < m; ++r) {
            rhs[r] = lp.rows[r].rhs;
            for (const auto& [v, c] : lp.rows[r].coeffs) cols[v].emplace_back(r, c);
            row_ptr[r + 1] = row_ptr[r] + static_cast<int>(lp.rows[r].coeffs.size());
        }
        row_col.reserve(row_ptr[m]);
        row_val.reserve(row_ptr[m]);
        for (int r = 0; r < m; ++r)
            for (const auto& [v, c] : lp.rows[r].coeffs) {
                row_col.push_back(v);
                row_val.push_back(c);
            }
        for (int j = 0; j < nstruct; ++j) {
            col_ptr[j + 1] = col_ptr[j] + static_cast<int>(cols[j].size());
            for (const auto& [r, c] : cols[j]) {
                col_row.push_back(r);
                col_val.push_back(c);
            }
        }
        // Slack bounds: equality rows get fixed slacks.
        for (int r = 0; r < m; ++r) {
            lb0.push_back(0.0);
            ub0.push_back(lp.rows[r].sense == 'E' ? 0.0 : kInf);
        }
    }
};

enum : std::uint8_t { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

struct SimplexResult {
    LpStatus status = LpStatus::kError;
    double objective = 0.0;
    long long iterations = 0;
};

class DualSimplex {
  public:
    explicit DualSimplex(const LpCore& core)
        : lb(core.lb0), ub(core.ub0), core_(core) {}

    // Bounds a branch-and-bound caller may tighten between solves.
    std::vector<double> lb, ub;

    long long iteration_limit = -1;  // -1: automatic

    // Wall-clock deadline; expiry surfaces as kIterLimit so a caller with a
    // time budget is not stuck inside one long pivot sequence.
    std::chrono::steady_clock::time_point deadline{};

    // Stop once the dual bound proves the optimum is at or above this value
    // (status kCutoff); a branch-and-bound caller sets it to the incumbent so
    // dominated and infeasible nodes stop early. A small relative margin
    // absorbs the noise the anti-stall heuristic may add to the bound.
    double objective_cutoff = kInf;

    // An infeasible primal makes the dual objective diverge; past this value
    // no campaign or test model has a real optimum, so treat it as an
    // infeasibility proof instead of chasing the ray through breakpoints.
    double divergence_limit = 1e13;

    // Warm-starts from (basic, vstat); both are updated in place so the final
    // basis can be snapshotted for child nodes. x receives all column values.
    SimplexResult solve(std::vector<int>& basic, std::vector<std::uint8_t>& vstat,
                        std::vector<double>& x) {
        const int m = core_.m, ncols = core_.ncols();
        SimplexResult res;
        for (int j = 0; j < ncols; ++j)
            if (lb[j] > ub[j] + 1e-12) {
                res.status = LpStatus::kInfeasible;
                return res;
            }

        if (!refactorize(basic, vstat)) {
            reset_to_slack_basis(basic, vstat);
            if (!refactorize(basic, vstat)) return res;  // kError
        }
        compute_duals(basic, vstat);
        // Repair nonbasic placement for dual feasibility under current
        // bounds. Irreparable columns (negative reduced cost, no finite upper
        // bound) force a cold start; if that fails too, give up.
        if (!reposition_nonbasic(vstat)) {
            reset_to_slack_basis(basic, vstat);
            if (!refactorize(basic, vstat)) return res;
            compute_duals(basic, vstat);
            if (!reposition_nonbasic(vstat)) return res;  // kError
        }
        compute_primal(basic, vstat);

        long long limit = iteration_limit > 0
                              ? iteration_limit
                              : 200000 + 50LL * (m + core_.nstruct);
        std::vector<double> rho(m), w_dense(m), fb(m);
        std::vector<double> alpha(ncols, 0.0);
        std::vector<int> touched, flips;
        struct Cand {
            double ratio, abar;
            int j;
        };
        std::vector<Cand> cands;
        SparseVec w;
        double best_bound_seen = -kInf;
        long long last_progress = 0;
        int cleanup_steps = 0;
        // True while d_/xb_ hold exactly recomputed values. Infeasibility and
        // cutoff conclusions are only accepted in this state; otherwise the
        // solver refactorizes and retries, so perturbed reduced costs or
        // incremental drift can never prune a feasible model.
        bool exact_state = true;

        for (long long iter = 0;; ++iter) {
            if (iter >= limit) {
                res.status = LpStatus::kIterLimit;
                res.iterations = iter;
                finish(basic, vstat, x, res);
                return res;
            }
            if ((iter & 31) == 0) {
                if (deadline.time_since_epoch().count() != 0 &&
                    std::chrono::steady_clock::now() > deadline) {
                    res.status = LpStatus::kIterLimit;
                    res.iterations = iter;
                    finish(basic, vstat, x, res);
                    return res;
                }
                double g = dual_bound(basic, vstat);
                if (g > divergence_limit ||
                    g > objective_cutoff + 1e-5 * (1.0 + std::fabs(g))) {
                    if (!exact_state) {
                        if (!recover(basic, vstat)) {
                            res.status = LpStatus::kError;
                            res.iterations = iter;
                            return res;
                        }
                        exact_state = true;
                        g = dual_bound(basic, vstat);
                    }
                    if (g > divergence_limit) {
                        res.status = LpStatus::kInfeasible;
                        res.iterations = iter;
                        finish(basic, vstat, x, res);
                        return res;
                    }
                    if (g > objective_cutoff + 1e-5 * (1.0 + std::fabs(g))) {
                        res.status = LpStatus::kCutoff;
                        res.iterations = iter;
                        res.objective = g;
                        return res;
                    }
                }
                if (g > best_bound_seen + 1e-7 * (1.0 + std::fabs(g))) {
                    best_bound_seen = g;
                    last_progress = iter;
                } else if (iter - last_progress >= 512) {
                    // Stalled on degenerate pivots: push near-zero reduced
                    // costs away from zero (legal sign only) so subsequent
                    // dual steps have positive length. Exactness is restored
                    // by the verification pass at termination.
                    std::uniform_real_distribution<double> u(1e-8, 1e-7);
                    for (int j = 0; j < ncols; ++j) {
                        if (vstat[j] == kBasic) continue;
                        if (vstat[j] == kAtLower && d_[j] < 1e-7 &&
                            d_[j] > -1e-7)
                            d_[j] = u(noise_rng_);
                        else if (vstat[j] == kAtUpper && d_[j] > -1e-7 &&
                                 d_[j] < 1e-7)
                            d_[j] = -u(noise_rng_);
                    }
                    exact_state = false;
                    last_progress = iter;
                }
            }
            // Leaving variable: worst bound violation among basic columns.
            int r = -1;
            double worst = kPrimalTol;
            double sigma = 0.0;  // +1 leaving to upper bound, -1 to lower
            for (int i = 0; i < m; ++i) {
                int col = basic[i];
                double v = xb_[i];
                double below = lb[col] - v, above = v - ub[col];
                if (below > worst) {
                    worst = below;
                    r = i;
                    sigma = -1.0;
                }
                if (above > worst) {
                    worst = above;
                    r = i;
                    sigma = 1.0;
                }
            }
            if (r < 0) {
                // Primal looks feasible; verify on exact recomputed values
                // and repair any residual dual infeasibility before claiming
                // optimality.
                if (!recover(basic, vstat)) {
                    res.status = LpStatus::kError;
                    res.iterations = iter;
                    return res;
                }
                exact_state = true;
                if (max_primal_violation(basic) > kPrimalTol) continue;
                int jv = worst_dual_violation(vstat);
                if (jv < 0) {
                    res.status = LpStatus::kOptimal;
                    res.iterations = iter;
                    finish(basic, vstat, x, res);
                    return res;
                }
                if (++cleanup_steps > 2000) {
                    res.status = LpStatus::kIterLimit;
                    res.iterations = iter;
                    finish(basic, vstat, x, res);
                    return res;
                }
                if (!primal_cleanup_step(jv, basic, vstat, w_dense)) {
                    res.status = LpStatus::kError;
                    res.iterations = iter;
                    return res;
                }
                if (!recover(basic, vstat)) {
                    res.status = LpStatus::kError;
                    res.iterations = iter;
                    return res;
                }
                exact_state = true;
                continue;
            }

            // Pricing row: rho = B^{-T} e_r, alpha_j = a_j . rho.
            std::fill(rho.begin(), rho.end(), 0.0);
            rho[r] = 1.0;
            lu_.btran(rho);
            touched.clear();
            for (int i = 0; i < m; ++i) {
                double ri = rho[i];
                if (std::fabs(ri) < 1e-13) continue;
                int sl = core_.nstruct + i;  // slack column of row i
                if (vstat[sl] != kBasic) {
                    if (alpha[sl] == 0.0) touched.push_back(sl);
                    alpha[sl] += ri;
                }
                for (int s = core_.row_ptr[i]; s < core_.row_ptr[i + 1]; ++s) {
                    int j = core_.row_col[s];
                    if (vstat[j] == kBasic) continue;
                    if (alpha[j] == 0.0 && core_.row_val[s] != 0.0)
                        touched.push_back(j);
                    alpha[j] += ri * core_.row_val[s];
                }
            }

            // Dual ratio test with bound flips. Candidates are breakpoints
            // of the piecewise-linear dual objective along the pricing ray;
            // walking them in ratio order and flipping boxed columns whose
            // range is absorbed by the remaining infeasibility avoids the
            // degenerate one-breakpoint steps that stall boxed models. The
            // pivot happens at the last breakpoint with positive slope; if
            // every breakpoint is consumed the dual is unbounded, i.e. the
            // primal is infeasible. Reduced costs are clamped to their legal
            // sign so drift cannot make step directions flip.
            int leave_col = basic[r];
            double leave_bound = sigma > 0 ? ub[leave_col] : lb[leave_col];
            cands.clear();
            for (int j : touched) {
                double abar =
                    vstat[j] == kAtLower ? sigma * alpha[j] : -sigma * alpha[j];
                if (abar <= kPivotTol || lb[j] >= ub[j] - 1e-12) continue;
                double dleg = vstat[j] == kAtLower ? std::max(d_[j], 0.0)
                                                   : std::max(-d_[j], 0.0);
                cands.push_back({dleg / abar, abar, j});
            }
            std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
                return a.ratio != b.ratio ? a.ratio < b.ratio : a.abar > b.abar;
            });
            int q = -1;
            double theta_abs = 0.0;
            double slope = std::fabs(xb_[r] - leave_bound);
            flips.clear();
            for (size_t ci = 0; ci < cands.size(); ++ci) {
                const Cand& c = cands[ci];
                double range = ub[c.j] - lb[c.j];
                if (std::isfinite(range) && c.abar * range < slope - 1e-12) {
                    flips.push_back(c.j);
                    slope -= c.abar * range;
                    continue;
                }
                // Stop breakpoint: among breakpoints whose ratio is within
                // tolerance of this one, pivot on the largest |alpha| so the
                // new basis stays well conditioned.
                q = c.j;
                double qa = c.abar;
                theta_abs = c.ratio;
                double rlim = c.ratio + 1e-9 * (1.0 + c.ratio);
                for (size_t k = ci + 1;
                     k < cands.size() && cands[k].ratio <= rlim; ++k)
                    if (cands[k].abar > qa) {
                        q = cands[k].j;
                        qa = cands[k].abar;
                        theta_abs = cands[k].ratio;
                    }
                break;
            }
            if (q < 0) {
                for (int j : touched) alpha[j] = 0.0;
                if (!exact_state) {
                    if (!recover(basic, vstat)) {
                        res.status = LpStatus::kError;
                        res.iterations = iter;
                        return res;
                    }
                    exact_state = true;
                    continue;
                }
                res.status = LpStatus::kInfeasible;
                res.iterations = iter;
                finish(basic, vstat, x, res);
                return res;
            }
            if (!flips.empty()) {
                std::fill(fb.begin(), fb.end(), 0.0);
                for (int j : flips) {
                    double newv = vstat[j] == kAtLower ? ub[j] : lb[j];
                    double dx = newv - xnb_[j];
                    if (j >= core_.nstruct) {
                        fb[j - core_.nstruct] += dx;
                    } else {
                        for (int s = core_.col_ptr[j]; s < core_.col_ptr[j + 1];
                             ++s)
                            fb[core_.col_row[s]] += core_.col_val[s] * dx;
                    }
                    xnb_[j] = newv;
                    vstat[j] = vstat[j] == kAtLower ? kAtUpper : kAtLower;
                }
                lu_.ftran(fb);
                for (int i = 0; i < m; ++i) xb_[i] -= fb[i];
                exact_state = false;
            }

            // FTRAN of the entering column, with a stability cross-check of
            // the pivot element against the pricing row.
            std::fill(w_dense.begin(), w_dense.end(), 0.0);
            scatter_column(q, w_dense);
            lu_.ftran(w_dense);
            double wr = w_dense[r];
            if (std::fabs(wr - alpha[q]) > 1e-7 * (1.0 + std::fabs(alpha[q]))) {
                for (int j : touched) alpha[j] = 0.0;
                ++n_stab;
                if (!recover(basic, vstat)) {
                    res.status = LpStatus::kError;
                    res.iterations = iter;
                    return res;
                }
                continue;
            }

            double delta = xb_[r] - leave_bound;
            double dxq = delta / wr;
            // theta carries the sign that keeps the leaving variable's new
            // reduced cost (-theta) legal for the bound it moves to.
            double theta = sigma * theta_abs;

            // Primal update.
            w.clear();
            for (int i = 0; i < m; ++i)
                if (w_dense[i] != 0.0) w.push(i, w_dense[i]);
            for (size_t s = 0; s < w.size(); ++s)
                xb_[w.idx[s]] -= dxq * w.val[s];
            double xq_new = (vstat[q] == kAtLower ? lb[q] : ub[q]) + dxq;
            xnb_[leave_col] = leave_bound;
            vstat[leave_col] = sigma > 0 ? kAtUpper : kAtLower;
            basic[r] = q;
            vstat[q] = kBasic;
            xb_[r] = xq_new;

            // Dual update.
            for (int j : touched) {
                if (j != q && vstat[j] != kBasic) d_[j] -= theta * alpha[j];
                alpha[j] = 0.0;
            }
            d_[leave_col] = -theta;
            d_[q] = 0.0;
            exact_state = false;

            if (!lu_.add_eta(r, w) || lu_.eta_count() >= kRefactorEvery) {
                if (!recover(basic, vstat)) {
                    res.status = LpStatus::kError;
                    res.iterations = iter;
                    return res;
                }
                exact_state = true;
            }
        }
    }

    long long n_stab = 0, n_singular = 0, n_refac = 0;

  private:
    void scatter_column(int j, std::vector<double>& dense) const {
        if (j >= core_.nstruct) {
            dense[j - core_.nstruct] += 1.0;
            return;
        }
        for (int s = core_.col_ptr[j]; s < core_.col_ptr[j + 1]; ++s)
            dense[core_.col_row[s]] += core_.col_val[s];
    }

    void reset_to_slack_basis(std::vector<int>& basic,
                              std::vector<std::uint8_t>& vstat) {
        basic.resize(core_.m);
        vstat.assign(core_.ncols(), kAtLower);
        for (int i = 0; i < core_.m; ++i) {
            basic[i] = core_.nstruct + i;
            vstat[core_.nstruct + i] = kBasic;
        }
    }

    // Refactorizes the current basis and recomputes exact duals and primal;
    // if the basis is numerically singular (a tiny pivot slipped through the
    // ratio test), falls back to the slack basis so the method can rebuild
    // instead of failing the solve.
    bool recover(std::vector<int>& basic, std::vector<std::uint8_t>& vstat) {
        ++n_refac;
        if (!refactorize(basic, vstat)) {
            ++n_singular;
            reset_to_slack_basis(basic, vstat);
            if (!refactorize(basic, vstat)) return false;
            compute_duals(basic, vstat);
            if (!reposition_nonbasic(vstat)) return false;
        } else {
            compute_duals(basic, vstat);
        }
        compute_primal(basic, vstat);
        return true;
    }

    bool refactorize(std::vector<int>& basic, std::vector<std::uint8_t>& vstat) {
        if (static_cast<int>(basic.size()) != core_.m) return false;
        cols_store_.assign(core_.m, {});
        std::vector<const SparseVec*> ptrs(core_.m);
        std::vector<char> seen(core_.ncols(), 0);
        for (int i = 0; i < core_.m; ++i) {
            int j = basic[i];
            if (j < 0 || j >= core_.ncols() || seen[j] || vstat[j] != kBasic)
                return false;
            seen[j] = 1;
            if (j >= core_.nstruct) {
                cols_store_[i].push(j - core_.nstruct, 1.0);
            } else {
                for (int s = core_.col_ptr[j]; s < core_.col_ptr[j + 1]; ++s)
                    cols_store_[i].push(core_.col_row[s], core_.col_val[s]);
            }
            ptrs[i] = &cols_store_[i];
        }
        try {
            lu_.factorize(ptrs, core_.m);
        } catch (const std::runtime_error&) {
            return false;
        }
        return true;
    }

    void compute_duals(const std::vector<int>& basic,
                       const std::vector<std::uint8_t>& vstat) {
        const int m = core_.m;
        std::vector<double> y(m, 0.0);
        bool any = false;
        for (int i = 0; i < m; ++i) {
            double c = basic[i] < core_.nstruct ? core_.cost[basic[i]] : 0.0;
            y[i] = c;
            any = any || c != 0.0;
        }
        if (any) lu_.btran(y);
        d_.assign(core_.ncols(), 0.0);
        for (int j = 0; j < core_.nstruct; ++j) {
            if (vstat[j] == kBasic) continue;
            double dj = core_.cost[j];
            for (int s = core_.col_ptr[j]; s < core_.col_ptr[j + 1]; ++s)
                dj -= y[core_.col_row[s]] * core_.col_val[s];
            d_[j] = dj;
        }
        for (int i = 0; i < m; ++i)
            if (vstat[core_.nstruct + i] != kBasic) d_[core_.nstruct + i] = -y[i];
    }

    // Put each nonbasic column on the bound matching its reduced-cost sign.
    bool reposition_nonbasic(std::vector<std::uint8_t>& vstat) {
        for (int j = 0; j < core_.ncols(); ++j) {
            if (vstat[j] == kBasic) continue;
            if (d_[j] < -kDualTol) {
                if (ub[j] >= kInf) return false;
                vstat[j] = kAtUpper;
            } else if (d_[j] > kDualTol) {
                if (lb[j] <= -kInf) return false;
                vstat[j] = kAtLower;
            } else if (vstat[j] == kAtUpper && ub[j] >= kInf) {
                vstat[j] = kAtLower;
            }
            if (vstat[j] == kAtLower && lb[j] <= -kInf) vstat[j] = kAtUpper;
        }
        return true;
    }

    void compute_primal(const std::vector<int>&,
                        const std::vector<std::uint8_t>& vstat) {
        std::vector<double> b = core_.rhs;
        xnb_.assign(core_.ncols(), 0.0);
        for (int j = 0; j < core_.ncols(); ++j) {
            if (vstat[j] == kBasic) continue;
            double v = vstat[j] == kAtLower ? lb[j] : ub[j];
            xnb_[j] = v;
            if (v == 0.0) continue;
            if (j >= core_.nstruct) {
                b[j - core_.nstruct] -= v;
            } else {
                for (int s = core_.col_ptr[j]; s < core_.col_ptr[j + 1]; ++s)
                    b[core_.col_row[s]] -= core_.col_val[s] * v;
            }
        }
        lu_.ftran(b);
        xb_ = b;
    }

    double max_primal_violation(const std::vector<int>& basic) const {
        double v = 0.0;
        for (int i = 0; i < core_.m; ++i) {
            int col = basic[i];
            v = std::max(v, lb[col] - xb_[i]);
            v = std::max(v, xb_[i] - ub[col]);
        }
        return v;
    }

    // Index of the nonbasic column with the worst wrong-sign reduced cost on
    // exact values, or -1 if the basis is dual feasible within tolerance.
    int worst_dual_violation(const std::vector<std::uint8_t>& vstat) const {
        int jv = -1;
        double worst = 1e-7;
        for (int j = 0; j < core_.ncols(); ++j) {
            if (vstat[j] == kBasic || lb[j] >= ub[j] - 1e-12) continue;
            double v = vstat[j] == kAtLower ? -d_[j] : d_[j];
            if (v > worst) {
                worst = v;
                jv = j;
            }
        }
        return jv;
    }

    // One primal simplex step on an improving nonbasic column: move it in
    // the improving direction until it reaches its opposite bound (a flip)
    // or a basic variable blocks (a pivot). Strictly lowers the objective of
    // the current point; used only to polish claimed optima.
    bool primal_cleanup_step(int j, std::vector<int>& basic,
                             std::vector<std::uint8_t>& vstat,
                             std::vector<double>& w_dense) {
        const int m = core_.m;
        double dir = vstat[j] == kAtLower ? 1.0 : -1.0;
        std::fill(w_dense.begin(), w_dense.end(), 0.0);
        scatter_column(j, w_dense);
        lu_.ftran(w_dense);
        double step = ub[j] - lb[j];  // may be +inf
        int rblk = -1;
        for (int i = 0; i < m; ++i) {
            double wi = dir * w_dense[i];  // xb_[i] decreases by wi per unit
            if (std::fabs(wi) < kPivotTol) continue;
            int col = basic[i];
            double room = wi > 0 ? xb_[i] - lb[col] : ub[col] - xb_[i];
            if (room >= kInf) continue;
            double s = std::max(room, 0.0) / std::fabs(wi);
            if (s < step - 1e-12) {
                step = s;
                rblk = i;
            }
        }
        if (!std::isfinite(step)) return false;  // unbounded: cannot happen
                                                 // with nonnegative costs
        for (int i = 0; i < m; ++i) xb_[i] -= dir * step * w_dense[i];
        if (rblk < 0) {
            xnb_[j] = vstat[j] == kAtLower ? ub[j] : lb[j];
            vstat[j] = vstat[j] == kAtLower ? kAtUpper : kAtLower;
            return true;
        }
        int out = basic[rblk];
        double wv = dir * w_dense[rblk];
        xnb_[out] = wv > 0 ? lb[out] : ub[out];
        vstat[out] = wv > 0 ? kAtLower : kAtUpper;
        double enter_val =
            (vstat[j] == kAtLower ? lb[j] : ub[j]) + dir * step;
        basic[rblk] = j;
        vstat[j] = kBasic;
        xb_[rblk] = enter_val;
        return true;
    }

    // Objective of the current pseudo-primal point; for a dual-feasible
    // basis this equals the dual objective, a lower bound on the optimum.
    double dual_bound(const std::vector<int>& basic,
                      const std::vector<std::uint8_t>& vstat) const {
        double g = 0.0;
        for (int j = 0; j < core_.nstruct; ++j)
            if (vstat[j] != kBasic) g += core_.cost[j] * xnb_[j];
        for (int i = 0; i < core_.m; ++i)
            if (basic[i] < core_.nstruct) g += core_.cost[basic[i]] * xb_[i];
        return g;
    }

    void finish(const std::vector<int>& basic,
                const std::vector<std::uint8_t>& vstat, std::vector<double>& x,
                SimplexResult& res) {
        x.assign(core_.ncols(), 0.0);
        for (int j = 0; j < core_.ncols(); ++j)
            if (vstat[j] != kBasic) x[j] = xnb_[j];
        for (int i = 0; i < core_.m; ++i) x[basic[i]] = xb_[i];
        double obj = 0.0;
        for (int j = 0; j < core_.nstruct; ++j) obj += core_.cost[j] * x[j];
        res.objective = obj;
    }

    const LpCore& core_;
    SparseLU lu_;
    std::mt19937 noise_rng_{0x5eedu};
    std::vector<SparseVec> cols_store_;
    std::vector<double> d_, xb_, xnb_;
};

}  // namespace campaignopt::solver
