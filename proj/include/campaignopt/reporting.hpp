#pragma once

// Rendering of solved campaigns: per-launch manifests, vehicle usage counts,
// an ISRU production ledger, flow CSV dumps, and a deterministic graph file of
// the time-expanded network.

#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "campaignopt/datamodel.hpp"
#include "campaignopt/milp_model.hpp"
#include "campaignopt/timeline.hpp"

namespace campaignopt {

// Month 0 of a campaign rendered as a calendar date; defaults to the first
// bundled scenario epoch (December 2022).
struct ReportEpoch {
    int year = 2022;
    int month = 12;  // 1..12
};

inline std::string calendar_month(int campaign_month, const ReportEpoch& e = {}) {
    static const char* names[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    int idx = e.month - 1 + campaign_month;
    int year = e.year + idx / 12;
    idx %= 12;
    if (idx < 0) {
        idx += 12;
        --year;
    }
    return std::string(names[idx]) + " " + std::to_string(year);
}

// Flow below this is treated as numerical noise throughout reporting.
inline constexpr double kFlowTol = 1e-6;

struct LaunchManifest {
    int step = 0;
    int month = 0;             // campaign month of the step
    int vehicle = -1;          // vehicle (or stack) id
    double vehicle_units = 0;  // units launched Earth->LEO at this step
    double commodity_mass[kNumCommodities] = {};  // kg aboard, by commodity
    double total_mass = 0.0;   // kg to LEO including vehicle dry mass
};

struct IsruLedger {
    double oxidizer_produced = 0.0;      // kg created on surface holdovers
    double maintenance_delivered = 0.0;  // kg consumed maintaining the plant
    double plant_mass_peak = 0.0;        // largest plant mass parked at once
};

struct CampaignReport {
    double objective = 0.0;                 // total launched mass, kg
    std::vector<LaunchManifest> launches;   // one per (step, vehicle)
    std::map<int, double> vehicle_usage;    // vehicle id -> units launched
    int launch_count = 0;                   // steps with nonzero launch flow
    IsruLedger isru;
};

// Condenses a flow solution into launch manifests and usage/ISRU summaries.
// The launch count is the number of steps with any nonzero Earth->LEO vehicle
// flow; manifest masses re-sum to the model objective because the objective
// prices exactly the Earth->LEO entering arcs.
inline CampaignReport summarize(const MilpModel& model, const FlowSolution& flow,
                                const ProgramRequirements& r,
                                const ReducedTimeline& tl) {
    CampaignReport rep;
    rep.objective = flow.objective;

    std::map<std::pair<int, int>, LaunchManifest> manifests;  // (step, vehicle)
    std::map<int, double> plant_by_step;
    std::set<int> launch_steps;
    for (size_t v = 0; v < model.keys.size(); ++v) {
        double val = flow.values.at(v);
        if (std::fabs(val) <= kFlowTol) continue;
        const VarKey& k = model.keys[v];
        if (k.i == 0 && k.j == 1 && k.io == 0) {
            LaunchManifest& m = manifests[{k.t, k.n}];
            m.step = k.t;
            m.month = tl.month_of_step(k.t);
            m.vehicle = k.n;
            const Vehicle& veh = r.vehicles[k.n];
            if (k.p == COM_VEHICLE) {
                m.vehicle_units += val;
                m.commodity_mass[k.p] += val * veh.dry_mass;
                launch_steps.insert(k.t);
                rep.vehicle_usage[k.n] += val;
            } else if (k.p == COM_CREW) {
                m.commodity_mass[k.p] += val * r.constants.crew_mass;
            } else {
                m.commodity_mass[k.p] += val;
            }
        }
        if (k.i == 3 && k.j == 3 && k.p == COM_ISRU_PLANT && k.io == 1)
            plant_by_step[k.t] += val;
        if (k.i == 3 && k.j == 3 && k.p == COM_OXIDIZER) {
            // Production = outgoing minus incoming oxidizer on the holdover.
            rep.isru.oxidizer_produced += (k.io == 1 ? val : -val);
        }
        if (k.i == 3 && k.j == 3 && k.p == COM_MAINTENANCE) {
            // Consumption = incoming minus outgoing maintenance supplies.
            rep.isru.maintenance_delivered += (k.io == 0 ? val : -val);
        }
    }
    for (auto& [key, m] : manifests) {
        for (double c : m.commodity_mass) m.total_mass += c;
        rep.launches.push_back(m);
    }
    rep.launch_count = static_cast<int>(launch_steps.size());
    for (const auto& [t, mass] : plant_by_step)
        rep.isru.plant_mass_peak = std::max(rep.isru.plant_mass_peak, mass);
    if (rep.isru.oxidizer_produced < kFlowTol) rep.isru.oxidizer_produced = 0.0;
    if (rep.isru.maintenance_delivered < kFlowTol)
        rep.isru.maintenance_delivered = 0.0;
    return rep;
}

// Nonzero flows, one variable per line, in deterministic model order.
inline void write_flows_csv(const MilpModel& model, const FlowSolution& flow,
                            const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_flows_csv: cannot open " + path);
    out << "vehicle,origin,destination,commodity,io,step,value\n";
    for (size_t v = 0; v < model.keys.size(); ++v) {
        double val = flow.values.at(v);
        if (std::fabs(val) <= kFlowTol) continue;
        const VarKey& k = model.keys[v];
        char buf[96];
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%d,%.9g\n", k.n, k.i,
                      k.j, k.p, k.io, k.t, val);
        out << buf;
    }
}

// Writes the time-expanded network as a directed graph in DOT format: one
// node per (location, step), one edge per nonzero flow variable (transfers
// within a step, holdovers into the next step), deterministically ordered.
inline void emit_graph(const MilpModel& model, const FlowSolution& flow,
                       const ProgramRequirements& r, const ReducedTimeline& tl,
                       const std::string& path, const ReportEpoch& epoch = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_graph: cannot open " + path);
    out << "digraph campaign {\n  rankdir=LR;\n";
    for (const auto& [idx, name] : r.network.nodes)
        for (int t = 0; t < tl.step_count; ++t)
            out << "  n" << idx << "_t" << t << " [label=\"" << name << "\\n"
                << calendar_month(tl.month_of_step(t), epoch) << " step " << t
                << "\"];\n";
    char buf[160];
    for (size_t v = 0; v < model.keys.size(); ++v) {
        double val = flow.values.at(v);
        if (std::fabs(val) <= kFlowTol) continue;
        const VarKey& k = model.keys[v];
        int tj = k.i == k.j ? k.t + 1 : k.t;
        std::snprintf(buf, sizeof buf,
                      "  n%d_t%d -> n%d_t%d [label=\"v%d p%d %s %.6g\"];\n",
                      k.i, k.t, k.j, tj, k.n, k.p, k.io ? "out" : "in", val);
        out << buf;
    }
    out << "}\n";
}

}  // namespace campaignopt
