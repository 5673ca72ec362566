#pragma once

// Demand matrix generation: payload supplies/demands placed on the reduced
// timeline, vehicle supply events at Earth, and unlimited Earth supplies of
// the supporting commodities (ISRU plant mass, maintenance, consumables,
// propellant) that the flow model is free to launch as needed.

#include <cstdint>
#include <fstream>
#include <map>
#include <tuple>
#include <vector>

#include "campaignopt/datamodel.hpp"
#include "campaignopt/timeline.hpp"

namespace campaignopt {

// Effectively-unlimited supply for commodities sourced at Earth on demand.
inline constexpr double kUnlimitedSupply = 1.0e8;

struct DemandMatrix {
    int vehicle_count = 0;   // N (base + stacks)
    int node_count = 0;      // I
    int commodity_count = kNumCommodities;
    int step_count = 0;      // T_LP

    // Sparse signed entries: positive = supply, negative = demand.
    std::map<std::tuple<int, int, int, int>, double> entries;  // (n,i,p,t) -> d

    double at(int n, int i, int p, int t) const {
        auto it = entries.find({n, i, p, t});
        return it == entries.end() ? 0.0 : it->second;
    }
    void add(int n, int i, int p, int t, double v) {
        if (v != 0.0) entries[{n, i, p, t}] += v;
    }
    // Sum over the vehicle index, as constraint c1b consumes it.
    double sum_over_vehicles(int i, int p, int t) const {
        double s = 0.0;
        for (int n = 0; n < vehicle_count; ++n) s += at(n, i, p, t);
        return s;
    }
};

namespace detail {

// Cumulative units of vehicle n available by month m (1 at t_L, then one more
// per whole launch-frequency period).
inline int cumulative_vehicle_units(const Vehicle& v, int month) {
    if (month < v.earliest_launch) return 0;
    return 1 + (month - v.earliest_launch) / v.launch_frequency;
}

inline void add_vehicle_supplies(const ProgramRequirements& r,
                                 const ReducedTimeline& tl, DemandMatrix& d) {
    for (int n = 0; n < r.base_vehicle_count(); ++n) {
        const Vehicle& v = r.base_vehicles[n];
        int supplied = 0;
        for (size_t rk = 0; rk < tl.event_months.size(); ++rk) {
            int month = tl.event_months[rk];
            int total = cumulative_vehicle_units(v, month);
            if (total > supplied) {
                d.add(n, 0, COM_VEHICLE, 2 * static_cast<int>(rk),
                      static_cast<double>(total - supplied));
                supplied = total;
            }
        }
    }
}

inline void add_earth_supporting_supplies(const ProgramRequirements& r,
                                          const ReducedTimeline& tl,
                                          DemandMatrix& d) {
    // Supporting commodities (not scheduled payload types 0/1/5) are available
    // at Earth on every outbound step.
    (void)r;
    const int supporting[] = {COM_ISRU_PLANT, COM_MAINTENANCE, COM_CONSUMABLES,
                              COM_OXIDIZER, COM_FUEL};
    for (int t = 0; t < tl.step_count; t += 2)
        for (int p : supporting) d.add(0, 0, p, t, kUnlimitedSupply);
}

}  // namespace detail

inline DemandMatrix build_demand_matrix(const ProgramRequirements& r,
                                        const ScheduleVector& schedule,
                                        const ReducedTimeline& tl) {
    DemandMatrix d;
    d.vehicle_count = r.vehicle_count();
    d.node_count = r.network.node_count();
    d.step_count = tl.step_count;
    for (int l = 0; l < r.payload_count(); ++l) {
        const Payload& p = r.payloads[l];
        int t = attachment_step(p, schedule.at(l), tl);
        d.add(0, p.origin, p.type_index, t, p.quantity);
        d.add(0, p.target, p.type_index, t, -p.quantity);
    }
    detail::add_vehicle_supplies(r, tl, d);
    detail::add_earth_supporting_supplies(r, tl, d);
    return d;
}

// --- integrated window model (scheduler cross-validation) ---

class UnsupportedProgramError : public std::runtime_error {
public:
    explicit UnsupportedProgramError(const std::string& msg)
        : std::runtime_error(msg) {}
};

struct IntegratedModelInputs {
    ReducedTimeline timeline;  // full month-by-month timeline
    DemandMatrix demand;
};

// Builds the all-in-MILP demand matrix over the full timeline: each payload
// (after merging co-payload groups into composites) is supplied at its window
// lower bound and demanded at its window upper bound. Programs whose
// sequencing cannot be expressed purely through window bounds are rejected.
inline IntegratedModelInputs integrated_window_demands(
    const ProgramRequirements& r) {
    for (const auto& p : r.payloads) {
        if (!p.strict_precursors.empty())
            throw UnsupportedProgramError(
                "payload " + std::to_string(p.id) +
                ": strict-precursor constraints cannot be expressed as window "
                "bounds in the integrated model");
        if (!p.soft_precursors.empty())
            throw UnsupportedProgramError(
                "payload " + std::to_string(p.id) +
                ": soft-precursor constraints cannot be expressed as window "
                "bounds in the integrated model");
    }

    // Merge co-payload groups into composites: quantities sum, windows
    // intersect. Members must share route and type for the merge to be valid.
    struct Composite {
        int type, origin, target, t_l, t_u;
        double quantity;
    };
    std::vector<Composite> composites;
    int last_month = 0;
    for (const auto& group : co_payload_groups(r.payloads)) {
        const Payload& head = r.payloads[group.front()];
        Composite c{head.type_index, head.origin, head.target,
                    head.window_lower, head.window_upper, 0.0};
        for (int l : group) {
            const Payload& p = r.payloads[l];
            if (p.type_index != c.type || p.origin != c.origin ||
                p.target != c.target)
                throw UnsupportedProgramError(
                    "co-payload group containing payload " + std::to_string(l) +
                    " mixes routes or types and cannot be merged");
            c.t_l = std::max(c.t_l, p.window_lower);
            c.t_u = std::min(c.t_u, p.window_upper);
            c.quantity += p.quantity;
        }
        if (c.t_l > c.t_u)
            throw UnsupportedProgramError(
                "co-payload group containing payload " +
                std::to_string(group.front()) + " has an empty window intersection");
        composites.push_back(c);
        last_month = std::max(last_month, c.t_u);
    }

    IntegratedModelInputs out;
    out.timeline = build_full_timeline(0, last_month, r.network);
    DemandMatrix& d = out.demand;
    d.vehicle_count = r.vehicle_count();
    d.node_count = r.network.node_count();
    d.step_count = out.timeline.step_count;
    for (const auto& c : composites) {
        Payload proxy;
        proxy.origin = c.origin;
        proxy.target = c.target;
        d.add(0, c.origin, c.type, attachment_step(proxy, c.t_l, out.timeline),
              c.quantity);
        d.add(0, c.target, c.type, attachment_step(proxy, c.t_u, out.timeline),
              -c.quantity);
    }
    detail::add_vehicle_supplies(r, out.timeline, d);
    detail::add_earth_supporting_supplies(r, out.timeline, d);
    return out;
}

inline void dump_demand_csv(const DemandMatrix& d, const std::string& path) {
    std::ofstream out(path);
    out << "n,i,p,t,value\n";
    for (const auto& [key, v] : d.entries) {
        auto [n, i, p, t] = key;
        if (v != 0.0)
            out << n << ',' << i << ',' << p << ',' << t << ',' << v << '\n';
    }
}

}  // namespace campaignopt
