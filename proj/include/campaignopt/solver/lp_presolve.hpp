#pragma once

// Equality-substitution presolve. Campaign models define almost every
// arc-exit quantity by an equality (conservation, boiloff, burn); eliminating
// those variables shrinks the LP by roughly half and removes most equality
// rows, which is what the dual simplex pays for from a slack start.
//
// x_k is eliminated from an equality row by rewriting it as an affine
// expression of the remaining variables and substituting everywhere else.
// Bounds of the eliminated variable that are not implied by interval
// arithmetic over the expression become new inequality rows. Integer
// variables are only eliminated through exact-copy rows (x_k - x_m = 0).

#include <cmath>
#include <vector>

#include "campaignopt/milp_model.hpp"

namespace campaignopt::solver {

struct Substitution {
    int var = -1;
    double c0 = 0.0;
    std::vector<std::pair<int, double>> terms;  // original variable ids
};

struct PresolvedLp {
    LinearProgram reduced;
    std::vector<int> var_map;            // original -> reduced index, -1 if gone
    std::vector<Substitution> subs;      // in elimination order
    bool infeasible = false;
    int original_vars = 0;

    std::vector<double> restore(const std::vector<double>& xr) const {
        std::vector<double> x(original_vars, 0.0);
        for (int v = 0; v < original_vars; ++v)
            if (var_map[v] >= 0) x[v] = xr[var_map[v]];
        for (auto it = subs.rbegin(); it != subs.rend(); ++it) {
            double v = it->c0;
            for (const auto& [j, c] : it->terms) v += c * x[j];
            x[it->var] = v;
        }
        return x;
    }
};

namespace detail {

inline void coalesce(std::vector<std::pair<int, double>>& v) {
    std::sort(v.begin(), v.end());
    size_t w = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        if (w > 0 && v[w - 1].first == v[i].first)
            v[w - 1].second += v[i].second;
        else
            v[w++] = v[i];
    }
    v.resize(w);
    w = 0;
    for (size_t i = 0; i < v.size(); ++i)
        if (std::fabs(v[i].second) > 1e-12) v[w++] = v[i];
    v.resize(w);
}

}  // namespace detail

inline PresolvedLp presolve_substitute(const LinearProgram& lp) {
    PresolvedLp out;
    const int n = lp.num_vars();
    out.original_vars = n;

    std::vector<double> lb = lp.lower, ub = lp.upper;
    std::vector<double> cost = lp.cost;
    std::vector<std::uint8_t> isint = lp.integer;
    std::vector<std::uint8_t> bfirst = lp.branch_first;
    bfirst.resize(n, 0);
    struct WRow {
        std::vector<std::pair<int, double>> c;
        char sense;
        double rhs;
        bool alive = true;
    };
    std::vector<WRow> rows;
    rows.reserve(lp.rows.size());
    for (const auto& r : lp.rows) rows.push_back({r.coeffs, r.sense, r.rhs, true});
    std::vector<std::vector<int>> col_rows(n);  // may hold stale entries
    for (size_t ri = 0; ri < rows.size(); ++ri)
        for (const auto& [v, c] : rows[ri].c) col_rows[v].push_back(ri);
    std::vector<char> gone(n, 0);

    auto occurrences = [&](int v) {
        int cnt = 0;
        for (int ri : col_rows[v])
            if (rows[ri].alive)
                for (const auto& [w, c] : rows[ri].c)
                    if (w == v && c != 0.0) {
                        ++cnt;
                        break;
                    }
        return cnt;
    };

    // Substitute x_k := c0 + terms into one coefficient list.
    auto apply_sub = [&](std::vector<std::pair<int, double>>& coeffs, double& rhs,
                         int k, double c0,
                         const std::vector<std::pair<int, double>>& terms,
                         size_t row_id_for_index) {
        double a = 0.0;
        for (auto& [v, c] : coeffs)
            if (v == k) {
                a = c;
                c = 0.0;
            }
        if (a == 0.0) return false;
        rhs -= a * c0;
        for (const auto& [v, c] : terms) {
            coeffs.emplace_back(v, a * c);
            if (row_id_for_index != static_cast<size_t>(-1))
                col_rows[v].push_back(static_cast<int>(row_id_for_index));
        }
        detail::coalesce(coeffs);
        return true;
    };

    double obj_offset = 0.0;
    std::vector<double> costw = cost;  // kept current under substitutions

    for (int pass = 0; pass < 2; ++pass) {
        const size_t nrows_at_pass = rows.size();
        for (size_t ri = 0; ri < nrows_at_pass; ++ri) {
            if (!rows[ri].alive || rows[ri].sense != 'E') continue;
            detail::coalesce(rows[ri].c);
            if (rows[ri].c.empty()) {
                if (std::fabs(rows[ri].rhs) > 1e-9) out.infeasible = true;
                rows[ri].alive = false;
                continue;
            }
            // Copy: rows may reallocate when bound rows are appended below.
            WRow row = rows[ri];
            double maxabs = 0.0;
            for (const auto& [v, c] : row.c) maxabs = std::max(maxabs, std::fabs(c));
            // Pick the eliminated variable: continuous, numerically safe,
            // fewest other rows touched.
            int k = -1, kocc = 1 << 30;
            double ka = 0.0;
            bool copy_pair = row.c.size() == 2 && std::fabs(row.rhs) < 1e-12 &&
                             std::fabs(row.c[0].second + row.c[1].second) <
                                 1e-12 * (1.0 + maxabs);
            for (const auto& [v, c] : row.c) {
                if (gone[v]) continue;
                if (std::fabs(c) < 1e-3 * maxabs) continue;
                if (isint[v] && !(copy_pair && isint[row.c[0].first] &&
                                  isint[row.c[1].first]))
                    continue;
                // Keep the objective nonnegative (the dual simplex cold-starts
                // from the slack basis): only eliminate cost-free variables,
                // or transfer cost through a positive two-term ratio.
                bool two_pos = row.c.size() == 2 && std::fabs(row.rhs) < 1e-12 &&
                               row.c[0].second * row.c[1].second < 0.0;
                if (costw[v] != 0.0 && !two_pos) continue;
                int occ = occurrences(v);
                if (occ > 40) continue;
                if (occ < kocc) {
                    kocc = occ;
                    k = v;
                    ka = c;
                }
            }
            if (k < 0) continue;

            Substitution sub;
            sub.var = k;
            sub.c0 = row.rhs / ka;
            for (const auto& [v, c] : row.c)
                if (v != k) sub.terms.emplace_back(v, -c / ka);

            // Two-term positive-ratio rows transfer the eliminated bounds to
            // the surviving variable; otherwise interval arithmetic decides
            // whether explicit bound rows are needed.
            bool bounds_done = false;
            if (sub.terms.size() == 1 && sub.c0 == 0.0 &&
                sub.terms[0].second > 0.0) {
                int mvar = sub.terms[0].first;
                double g = sub.terms[0].second;
                double nlb = lb[k] / g, nub = ub[k] / g;
                if (isint[mvar]) {
                    nlb = std::ceil(nlb - 1e-9);
                    if (std::isfinite(nub)) nub = std::floor(nub + 1e-9);
                }
                lb[mvar] = std::max(lb[mvar], nlb);
                ub[mvar] = std::min(ub[mvar], nub);
                if (lb[mvar] > ub[mvar] + 1e-9) out.infeasible = true;
                bounds_done = true;
            }
            if (!bounds_done) {
                double emin = sub.c0, emax = sub.c0;
                for (const auto& [v, c] : sub.terms) {
                    emin += std::min(c * lb[v], c * ub[v]);
                    emax += std::max(c * lb[v], c * ub[v]);
                }
                if (emin < lb[k] - 1e-9) {
                    WRow br;
                    br.sense = 'L';
                    br.rhs = sub.c0 - lb[k];
                    for (const auto& [v, c] : sub.terms) br.c.emplace_back(v, -c);
                    rows.push_back(br);
                    for (const auto& [v, c] : br.c)
                        col_rows[v].push_back(static_cast<int>(rows.size()) - 1);
                }
                if (emax > ub[k] + 1e-9) {
                    WRow br;
                    br.sense = 'L';
                    br.rhs = ub[k] - sub.c0;
                    br.c = sub.terms;
                    rows.push_back(br);
                    for (const auto& [v, c] : br.c)
                        col_rows[v].push_back(static_cast<int>(rows.size()) - 1);
                }
            }

            rows[ri].alive = false;
            gone[k] = 1;
            for (int rj : col_rows[k]) {
                if (!rows[rj].alive || rj == static_cast<int>(ri)) continue;
                apply_sub(rows[rj].c, rows[rj].rhs, k, sub.c0, sub.terms,
                          static_cast<size_t>(rj));
            }
            if (costw[k] != 0.0) {
                obj_offset += costw[k] * sub.c0;
                for (const auto& [v, c] : sub.terms) costw[v] += costw[k] * c;
                costw[k] = 0.0;
            }
            out.subs.push_back(std::move(sub));
        }
    }

    // Compact into the reduced program.
    out.var_map.assign(n, -1);
    const std::vector<double>& dense_cost = costw;
    int nr = 0;
    for (int v = 0; v < n; ++v)
        if (!gone[v]) out.var_map[v] = nr++;
    out.reduced.objective_offset = obj_offset;
    out.reduced.cost.reserve(nr);
    for (int v = 0; v < n; ++v) {
        if (gone[v]) continue;
        out.reduced.cost.push_back(dense_cost[v]);
        out.reduced.lower.push_back(lb[v]);
        out.reduced.upper.push_back(ub[v]);
        out.reduced.integer.push_back(isint[v]);
        out.reduced.branch_first.push_back(bfirst[v]);
    }
    for (auto& row : rows) {
        if (!row.alive) continue;
        detail::coalesce(row.c);
        if (row.c.empty()) {
            bool bad = row.sense == 'E' ? std::fabs(row.rhs) > 1e-9
                                        : row.rhs < -1e-9;
            if (bad) out.infeasible = true;
            continue;
        }
        LinearProgram::Row r;
        r.sense = row.sense;
        r.rhs = row.rhs;
        for (const auto& [v, c] : row.c) r.coeffs.emplace_back(out.var_map[v], c);
        out.reduced.rows.push_back(std::move(r));
        out.reduced.row_names.emplace_back();
    }
    return out;
}

}  // namespace campaignopt::solver
