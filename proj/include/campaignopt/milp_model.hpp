#pragma once

// Assembly of the commodity-flow mixed-integer linear program from a demand
// matrix and a reduced timeline.
//
// Variables x_{n,i,j,p,io,t} measure the quantity of commodity p carried by
// vehicle n over arc (i,j) at step t; io=0 is the quantity entering the arc,
// io=1 the quantity leaving it. Transfer arcs (i != j) begin and end within
// step t; holdover arcs (i == j) begin at step t and end at step t+1.
// Variables that fail arc_allowed are never created (the zero-fixing
// constraint family is applied by elimination).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "campaignopt/datamodel.hpp"
#include "campaignopt/demand.hpp"
#include "campaignopt/timeline.hpp"

namespace campaignopt {

// Generic MILP in row form, consumed by the solver and the model exporter.
struct LinearProgram {
    double objective_offset = 0.0;
    std::vector<double> cost;
    std::vector<double> lower, upper;  // upper may be +inf
    std::vector<std::uint8_t> integer;
    // Variables the branch-and-bound should decide first (aggregate counts
    // whose fixing resolves many symmetric alternatives at once).
    std::vector<std::uint8_t> branch_first;
    struct Row {
        std::vector<std::pair<int, double>> coeffs;  // (variable, value)
        char sense = 'L';                            // 'L' (<=) or 'E' (=)
        double rhs = 0.0;
    };
    std::vector<Row> rows;
    std::vector<std::string> row_names;

    int num_vars() const { return static_cast<int>(cost.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }

    int add_var(double c, double lb, double ub, bool is_int,
                bool prefer_branch = false) {
        cost.push_back(c);
        lower.push_back(lb);
        upper.push_back(ub);
        integer.push_back(is_int ? 1 : 0);
        branch_first.push_back(prefer_branch ? 1 : 0);
        return num_vars() - 1;
    }
    void add_row(Row row, std::string name) {
        // Coalesce repeated variables (e.g. propellant appears both as the
        // balance term and inside the burned-mass sum).
        std::sort(row.coeffs.begin(), row.coeffs.end());
        size_t w = 0;
        for (size_t i = 0; i < row.coeffs.size(); ++i) {
            if (w > 0 && row.coeffs[w - 1].first == row.coeffs[i].first)
                row.coeffs[w - 1].second += row.coeffs[i].second;
            else
                row.coeffs[w++] = row.coeffs[i];
        }
        row.coeffs.resize(w);
        rows.push_back(std::move(row));
        row_names.push_back(std::move(name));
    }
};

struct VarKey {
    int n, i, j, p, io, t;
    bool operator==(const VarKey& o) const {
        return n == o.n && i == o.i && j == o.j && p == o.p && io == o.io &&
               t == o.t;
    }
};

struct VarKeyHash {
    size_t operator()(const VarKey& k) const {
        size_t h = 1469598103934665603ull;
        for (int v : {k.n, k.i, k.j, k.p, k.io, k.t})
            h = (h ^ static_cast<size_t>(v + 7)) * 1099511628211ull;
        return h;
    }
};

struct MilpModel {
    LinearProgram lp;
    std::vector<VarKey> keys;  // aligned with lp variables
    std::unordered_map<VarKey, int, VarKeyHash> index;
    int vehicle_count = 0, node_count = 0, commodity_count = kNumCommodities;
    int step_count = 0;
    long long dense_variable_count = 0;  // N*I*I*P*2*T before pruning
    bool trivially_infeasible = false;   // a demand exists with no usable arcs

    int var(int n, int i, int j, int p, int io, int t) const {
        auto it = index.find({n, i, j, p, io, t});
        return it == index.end() ? -1 : it->second;
    }
    std::string var_name(int v) const {
        const VarKey& k = keys[v];
        char buf[64];
        if (k.i < 0)
            std::snprintf(buf, sizeof buf, "launch_total_%d", k.n);
        else
            std::snprintf(buf, sizeof buf, "x_%d.%d.%d.%d.%d.%d", k.n, k.i,
                          k.j, k.p, k.io, k.t);
        return buf;
    }
};

struct FlowSolution {
    double objective = 0.0;
    std::vector<double> values;  // aligned with MilpModel::keys
};

// Propellant mass fraction for vehicle n crossing (i,j): the mass of
// propellant burned per unit of final mass, from the ideal rocket equation.
// Holdover arcs and zero-dV arcs burn nothing.
inline double propellant_fraction(const Vehicle& n, int i, int j,
                                  const NetworkConfig& net,
                                  const GlobalConstants& k = {}) {
    if (i == j) return 0.0;
    double dv = net.dv(i, j);
    if (dv == 0.0) return 0.0;
    return std::exp(dv * 1000.0 / (k.g0 * n.isp)) - 1.0;
}

namespace detail {

// Which commodity types can matter for this program. Dropping a commodity is
// only done when zero flow of it is always optimal: crew costs mass and serves
// no demand; plant/maintenance matter only when demanded or when produced
// oxidizer can actually leave the lunar surface on some vehicle.
struct ActiveCommodities {
    bool active[kNumCommodities];
    bool operator()(int p) const { return active[p]; }
};

inline ActiveCommodities select_active_commodities(const ProgramRequirements& r,
                                                   const DemandMatrix& d) {
    bool demanded[kNumCommodities] = {};
    for (const auto& [key, v] : d.entries) {
        auto [n, i, p, t] = key;
        (void)n; (void)i; (void)t;
        if (v < 0.0) demanded[p] = true;
    }
    bool ascent_possible = false;
    for (const auto& v : r.vehicles)
        for (const auto& [i, j] : v.domain)
            if (i == 3 && j < i && r.network.arc_exists(i, j)) ascent_possible = true;
    ActiveCommodities a{};
    a.active[COM_VEHICLE] = true;
    a.active[COM_OXIDIZER] = true;
    a.active[COM_FUEL] = true;
    a.active[COM_CREW] = demanded[COM_CREW];
    a.active[COM_MISC] = demanded[COM_MISC];
    bool isru_useful = demanded[COM_ISRU_PLANT] ||
                       (r.constants.isru_production > 0.0 && ascent_possible);
    a.active[COM_ISRU_PLANT] = isru_useful;
    a.active[COM_MAINTENANCE] = isru_useful || demanded[COM_MAINTENANCE];
    a.active[COM_CONSUMABLES] = a.active[COM_CREW] || demanded[COM_CONSUMABLES];
    return a;
}

inline std::string rc(const char* fam, std::initializer_list<int> idx) {
    std::string s = fam;
    for (int v : idx) s += "_" + std::to_string(v);
    return s;
}

}  // namespace detail

inline MilpModel build_milp(const ProgramRequirements& r, const DemandMatrix& d,
                            const ReducedTimeline& tl) {
    if (d.step_count != tl.step_count ||
        d.node_count != r.network.node_count() ||
        d.vehicle_count != r.vehicle_count())
        throw std::invalid_argument("build_milp: inconsistent input dimensions");

    const NetworkConfig& net = r.network;
    const GlobalConstants& gc = r.constants;
    const int N = r.vehicle_count();
    const int I = net.node_count();
    const int T = tl.step_count;

    MilpModel m;
    m.vehicle_count = N;
    m.node_count = I;
    m.step_count = T;
    m.dense_variable_count =
        static_cast<long long>(N) * I * I * kNumCommodities * 2 * T;

    auto act = detail::select_active_commodities(r, d);

    // Implied upper bounds on the integer commodities: flows can never exceed
    // the total units supplied over the whole campaign.
    std::vector<double> base_units(r.base_vehicle_count(), 0.0);
    double total_crew = 0.0;
    for (const auto& [key, v] : d.entries) {
        auto [n, i, p, t] = key;
        (void)i; (void)t;
        if (v > 0.0 && p == COM_VEHICLE && n < r.base_vehicle_count())
            base_units[n] += v;
        if (v > 0.0 && p == COM_CREW) total_crew += v;
    }
    auto vehicle_cap = [&](int n) {
        if (n < r.base_vehicle_count()) return base_units[n];
        double cap = kUnlimitedSupply;
        for (int mbr : r.vehicles[n].stack_members)
            cap = std::min(cap, base_units[mbr]);
        return cap;
    };

    // --- variables ---
    for (int n = 0; n < N; ++n) {
        const Vehicle& veh = r.vehicles[n];
        for (int i = 0; i < I; ++i)
            for (int j = 0; j < I; ++j)
                for (int t = 0; t < T; ++t) {
                    if (!arc_allowed(veh, i, j, t, tl, net)) continue;
                    for (int p = 0; p < kNumCommodities; ++p) {
                        if (!act(p)) continue;
                        for (int io = 0; io < 2; ++io) {
                            double cost = 0.0;
                            if (i == 0 && j == 1 && io == 0) {
                                if (p == COM_VEHICLE) cost = veh.dry_mass;
                                else if (p == COM_CREW) cost = gc.crew_mass;
                                else cost = 1.0;
                            }
                            bool is_int = p < kNumIntegerCommodities;
                            double ub = std::numeric_limits<double>::infinity();
                            if (p == COM_VEHICLE) ub = vehicle_cap(n);
                            if (p == COM_CREW) ub = total_crew;
                            int v = m.lp.add_var(cost, 0.0, ub, is_int);
                            m.keys.push_back({n, i, j, p, io, t});
                            m.index.emplace(VarKey{n, i, j, p, io, t}, v);
                        }
                    }
                }
    }

    using Row = LinearProgram::Row;
    auto add_term = [&](Row& row, int v, double c) {
        if (v >= 0 && c != 0.0) row.coeffs.emplace_back(v, c);
    };

    // c1a: vehicle supply/demand per base vehicle, summed over its stack family.
    for (int n = 0; n < r.base_vehicle_count(); ++n)
        for (int i = 0; i < I; ++i)
            for (int t = 0; t < T; ++t) {
                Row row;
                for (int n2 : r.stack_family[n])
                    for (int j = 0; j < I; ++j) {
                        add_term(row, m.var(n2, i, j, COM_VEHICLE, 0, t), 1.0);
                        if (j != i)
                            add_term(row, m.var(n2, j, i, COM_VEHICLE, 1, t), -1.0);
                    }
                for (int n2 : r.stack_family[n])
                    add_term(row, m.var(n2, i, i, COM_VEHICLE, 1, t - 1), -1.0);
                row.sense = 'L';
                row.rhs = d.at(n, i, COM_VEHICLE, t);
                if (row.coeffs.empty() && row.rhs >= 0.0) continue;
                if (row.coeffs.empty()) m.trivially_infeasible = true;
                m.lp.add_row(std::move(row), detail::rc("c1a", {n, i, t}));
            }

    // c1b: all other commodities, pooled across vehicles.
    for (int p = 1; p < kNumCommodities; ++p) {
        if (!act(p)) continue;
        for (int i = 0; i < I; ++i)
            for (int t = 0; t < T; ++t) {
                Row row;
                for (int n = 0; n < N; ++n) {
                    for (int j = 0; j < I; ++j) {
                        add_term(row, m.var(n, i, j, p, 0, t), 1.0);
                        if (j != i) add_term(row, m.var(n, j, i, p, 1, t), -1.0);
                    }
                    add_term(row, m.var(n, i, i, p, 1, t - 1), -1.0);
                }
                row.sense = 'L';
                row.rhs = d.sum_over_vehicles(i, p, t);
                if (row.coeffs.empty() && row.rhs >= 0.0) continue;
                if (row.coeffs.empty()) m.trivially_infeasible = true;
                m.lp.add_row(std::move(row), detail::rc("c1b", {i, p, t}));
            }
    }

    // Per-arc constraints.
    for (int n = 0; n < N; ++n) {
        const Vehicle& veh = r.vehicles[n];
        for (int i = 0; i < I; ++i)
            for (int j = 0; j < I; ++j)
                for (int t = 0; t < T; ++t) {
                    int xveh = m.var(n, i, j, COM_VEHICLE, 0, t);
                    if (xveh < 0) continue;  // arc not allowed
                    double tau = tl.tau(i, j, t, net);
                    double z = propellant_fraction(veh, i, j, net, gc);

                    // c2: payload capacity; ISRU plants parked on the lunar
                    // surface do not occupy vehicle capacity, and cargo
                    // stored on the ground at Earth awaiting launch is
                    // outside vehicle logistics entirely.
                    if (!(i == 0 && j == 0)) {
                        Row row;
                        add_term(row, m.var(n, i, j, COM_CREW, 0, t), gc.crew_mass);
                        for (int p = COM_ISRU_PLANT; p <= COM_MISC; ++p) {
                            if (p == COM_ISRU_PLANT && i == 3 && j == 3) continue;
                            add_term(row, m.var(n, i, j, p, 0, t), 1.0);
                        }
                        add_term(row, xveh, -veh.payload_capacity);
                        if (!row.coeffs.empty() && row.coeffs.size() > 1) {
                            row.sense = 'L';
                            row.rhs = 0.0;
                            m.lp.add_row(std::move(row),
                                         detail::rc("c2", {n, i, j, t}));
                        }
                    }

                    // c3a/c3b: propellant tank capacity.
                    {
                        Row row;
                        add_term(row, m.var(n, i, j, COM_OXIDIZER, 0, t), 1.0);
                        add_term(row, xveh,
                                 -veh.oxidizer_ratio * veh.propellant_capacity);
                        row.sense = 'L';
                        row.rhs = 0.0;
                        m.lp.add_row(std::move(row), detail::rc("c3a", {n, i, j, t}));
                    }
                    {
                        Row row;
                        add_term(row, m.var(n, i, j, COM_FUEL, 0, t), 1.0);
                        add_term(row, xveh, -(1.0 - veh.oxidizer_ratio) *
                                                veh.propellant_capacity);
                        row.sense = 'L';
                        row.rhs = 0.0;
                        m.lp.add_row(std::move(row), detail::rc("c3b", {n, i, j, t}));
                    }

                    // c4a: crew consumables are consumed at a constant rate.
                    if (act(COM_CONSUMABLES)) {
                        Row row;
                        add_term(row, m.var(n, i, j, COM_CONSUMABLES, 1, t), 1.0);
                        add_term(row, m.var(n, i, j, COM_CONSUMABLES, 0, t), -1.0);
                        add_term(row, m.var(n, i, j, COM_CREW, 1, t),
                                 gc.consumable_rate * tau);
                        row.sense = 'E';
                        row.rhs = 0.0;
                        m.lp.add_row(std::move(row), detail::rc("c4a", {n, i, j, t}));
                    }

                    // c4c: oxidizer dynamics (per-vehicle cases; the lunar
                    // surface holdover is aggregated below).
                    if (i == j && i != 3) {
                        Row row;
                        add_term(row, m.var(n, i, j, COM_OXIDIZER, 1, t), 1.0);
                        add_term(row, m.var(n, i, j, COM_OXIDIZER, 0, t),
                                 -std::pow(1.0 - veh.boiloff_rate, tau));
                        row.sense = 'E';
                        row.rhs = 0.0;
                        m.lp.add_row(std::move(row), detail::rc("c4c", {n, i, j, t}));
                    } else if (i != j) {
                        Row row;
                        add_term(row, m.var(n, i, j, COM_OXIDIZER, 1, t), 1.0);
                        add_term(row, m.var(n, i, j, COM_OXIDIZER, 0, t), -1.0);
                        double f = veh.oxidizer_ratio * z;
                        add_term(row, xveh, f * veh.dry_mass);
                        add_term(row, m.var(n, i, j, COM_CREW, 0, t),
                                 f * gc.crew_mass);
                        for (int p = COM_ISRU_PLANT; p < kNumCommodities; ++p)
                            add_term(row, m.var(n, i, j, p, 1, t), f);
                        row.sense = 'E';
                        row.rhs = 0.0;
                        m.lp.add_row(std::move(row), detail::rc("c4c", {n, i, j, t}));
                    }

                    // c4d: fuel dynamics; Z = 0 while parked, so holdovers
                    // conserve fuel.
                    {
                        Row row;
                        add_term(row, m.var(n, i, j, COM_FUEL, 1, t), 1.0);
                        add_term(row, m.var(n, i, j, COM_FUEL, 0, t), -1.0);
                        if (i != j) {
                            double f = (1.0 - veh.oxidizer_ratio) * z;
                            add_term(row, xveh, f * veh.dry_mass);
                            add_term(row, m.var(n, i, j, COM_CREW, 0, t),
                                     f * gc.crew_mass);
                            for (int p = COM_ISRU_PLANT; p < kNumCommodities; ++p)
                                add_term(row, m.var(n, i, j, p, 1, t), f);
                        }
                        row.sense = 'E';
                        row.rhs = 0.0;
                        m.lp.add_row(std::move(row), detail::rc("c4d", {n, i, j, t}));
                    }

                    // c4e: remaining commodities are conserved across arcs.
                    // Consumables follow c4a, maintenance supplies on surface
                    // holdovers follow c4b.
                    for (int p : {COM_VEHICLE, COM_CREW, COM_ISRU_PLANT,
                                  COM_MAINTENANCE, COM_MISC}) {
                        if (!act(p)) continue;
                        if (p == COM_MAINTENANCE && i == 3 && j == 3) continue;
                        Row row;
                        add_term(row, m.var(n, i, j, p, 1, t), 1.0);
                        add_term(row, m.var(n, i, j, p, 0, t), -1.0);
                        row.sense = 'E';
                        row.rhs = 0.0;
                        m.lp.add_row(std::move(row),
                                     detail::rc("c4e", {n, i, j, p, t}));
                    }
                }
    }

    // c4b: maintenance consumption on lunar-surface holdovers, aggregated over
    // vehicles, proportional to the ISRU plant mass present.
    if (act(COM_MAINTENANCE))
        for (int t = 0; t + 1 < T; ++t) {
            Row row;
            double tau = tl.tau(3, 3, t, net);
            for (int n = 0; n < N; ++n) {
                add_term(row, m.var(n, 3, 3, COM_MAINTENANCE, 1, t), 1.0);
                add_term(row, m.var(n, 3, 3, COM_MAINTENANCE, 0, t), -1.0);
                add_term(row, m.var(n, 3, 3, COM_ISRU_PLANT, 1, t),
                         gc.isru_maintenance * tau);
            }
            if (row.coeffs.empty()) continue;
            row.sense = 'E';
            row.rhs = 0.0;
            m.lp.add_row(std::move(row), detail::rc("c4b", {t}));
        }

    // c4c on lunar-surface holdovers: ISRU production refuels oxidizer,
    // aggregated over vehicles so each kilogram is produced once.
    for (int t = 0; t + 1 < T; ++t) {
        Row row;
        double tau = tl.tau(3, 3, t, net);
        for (int n = 0; n < N; ++n) {
            add_term(row, m.var(n, 3, 3, COM_OXIDIZER, 1, t), 1.0);
            add_term(row, m.var(n, 3, 3, COM_OXIDIZER, 0, t), -1.0);
            if (act(COM_ISRU_PLANT))
                add_term(row, m.var(n, 3, 3, COM_ISRU_PLANT, 1, t),
                         -gc.isru_production * tau);
        }
        if (row.coeffs.empty()) continue;
        row.sense = 'E';
        row.rhs = 0.0;
        m.lp.add_row(std::move(row), detail::rc("c4c_isru", {t}));
    }


    return m;
}

// --- export (documented algebraic text format) ---
//
//   MILPCF 1
//   VARS <count>
//   V <name> <INT|CONT> <lb> <ub> <objective-coefficient>
//   ROWS <count>
//   R <name> <LE|EQ> <rhs>
//   C <row-index> <var-index> <value>
//   END
//
// Variables and rows appear in deterministic model order; indices in C lines
// refer to those orders.
inline void export_lp(const LinearProgram& lp, const std::string& path,
                      const std::function<std::string(int)>& name) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_lp: cannot open " + path);
    char buf[64];
    auto num = [&](double v) {
        if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "MILPCF 1\n";
    out << "VARS " << lp.num_vars() << "\n";
    for (int v = 0; v < lp.num_vars(); ++v)
        out << "V " << name(v) << ' ' << (lp.integer[v] ? "INT" : "CONT") << ' '
            << num(lp.lower[v]) << ' ' << num(lp.upper[v]) << ' '
            << num(lp.cost[v]) << "\n";
    out << "ROWS " << lp.num_rows() << "\n";
    for (int r = 0; r < lp.num_rows(); ++r) {
        const auto& row = lp.rows[r];
        std::string rn = r < static_cast<int>(lp.row_names.size()) &&
                                 !lp.row_names[r].empty()
                             ? lp.row_names[r]
                             : "r" + std::to_string(r);
        out << "R " << rn << ' ' << (row.sense == 'L' ? "LE" : "EQ") << ' '
            << num(row.rhs) << "\n";
        for (const auto& [v, c] : row.coeffs)
            out << "C " << r << ' ' << v << ' ' << num(c) << "\n";
    }
    out << "END\n";
}

inline void export_model(const MilpModel& m, const std::string& path) {
    export_lp(m.lp, path, [&](int v) { return m.var_name(v); });
}

// Residual audit of a solution against the generating model: returns the
// largest constraint violation (positive = violated).
inline double max_constraint_violation(const MilpModel& m,
                                       const std::vector<double>& x) {
    double worst = 0.0;
    for (const auto& row : m.lp.rows) {
        double lhs = 0.0;
        for (const auto& [v, c] : row.coeffs) lhs += c * x[v];
        double viol = row.sense == 'L' ? lhs - row.rhs : std::abs(lhs - row.rhs);
        worst = std::max(worst, viol);
    }
    for (int v = 0; v < m.lp.num_vars(); ++v) {
        worst = std::max(worst, m.lp.lower[v] - x[v]);
        worst = std::max(worst, x[v] - m.lp.upper[v]);
    }
    return worst;
}

}  // namespace campaignopt
