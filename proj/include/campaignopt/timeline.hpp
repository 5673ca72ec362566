#pragma once

// Mapping of campaign months onto the reduced, direction-alternating
// time-expanded network.
//
// Every event month m with rank r among the sorted unique schedule months
// becomes the step pair (2r, 2r+1): outbound flow on the even step, return
// flow on the odd step. Transfer arcs move commodities within a step; holdover
// arcs carry them from step t to t+1. Real elapsed days are folded into the
// holdover times of flight so that one macro-period totals 30 days and months
// skipped by the reduction add 30 days each to the odd-to-even (long stay)
// holdover.

#include <algorithm>
#include <map>
#include <vector>

#include "campaignopt/datamodel.hpp"

namespace campaignopt {

inline constexpr double kDaysPerMonth = 30.0;

// Launch month per payload, index-aligned with ProgramRequirements::payloads.
using ScheduleVector = std::vector<int>;

struct ReducedTimeline {
    std::vector<int> event_months;   // sorted unique months
    int step_count = 0;              // T_LP = 2 * |event_months|
    std::map<int, int> even_step_of_month;  // month -> its even step 2r

    // Holdover time of flight, [node][step]; step in [0, T_LP-2].
    std::vector<std::vector<double>> holdover_tof;

    int month_of_step(int t) const { return event_months[t / 2]; }
    bool is_even_step(int t) const { return t % 2 == 0; }

    double tau(int i, int j, int t, const NetworkConfig& net) const {
        if (i != j) return net.transfer_tof(i, j);
        return holdover_tof[i][t];
    }
};

inline ReducedTimeline build_timeline_from_months(std::vector<int> months,
                                                  const NetworkConfig& net) {
    std::sort(months.begin(), months.end());
    months.erase(std::unique(months.begin(), months.end()), months.end());
    ReducedTimeline tl;
    tl.event_months = months;
    tl.step_count = 2 * static_cast<int>(months.size());
    for (size_t r = 0; r < months.size(); ++r)
        tl.even_step_of_month[months[r]] = 2 * static_cast<int>(r);

    tl.holdover_tof.assign(net.node_count(), {});
    for (const auto& [node, h] : net.holdover) {
        auto& tofs = tl.holdover_tof[node];
        tofs.assign(std::max(0, tl.step_count - 1), 0.0);
        for (int t = 0; t + 1 < tl.step_count; ++t) {
            if (node == 0) {
                tofs[t] = 0.0;  // pre-launch time does not accrue
            } else if (t % 2 == 0) {
                tofs[t] = h.even_to_odd;
            } else {
                // Months skipped between this event and the next each add a
                // full macro-period to the long-stay arc.
                int gap = months[t / 2 + 1] - months[t / 2];
                tofs[t] = h.odd_to_even + kDaysPerMonth * (gap - 1);
            }
        }
    }
    return tl;
}

inline ReducedTimeline build_reduced_timeline(const ScheduleVector& schedule,
                                              const NetworkConfig& net) {
    return build_timeline_from_months(schedule, net);
}

// A full month-by-month timeline spanning [first_month, last_month]; used for
// cross-validation against the reduced form.
inline ReducedTimeline build_full_timeline(int first_month, int last_month,
                                           const NetworkConfig& net) {
    std::vector<int> months;
    for (int m = first_month; m <= last_month; ++m) months.push_back(m);
    return build_timeline_from_months(months, net);
}

// True iff vehicle n may use arc (i,j) at step t: the arc must exist, lie in
// the vehicle's domain, and match the step's flow direction (outbound arcs on
// even steps, return arcs on odd steps, holdovers always).
inline bool arc_allowed(const Vehicle& n, int i, int j, int t,
                        const ReducedTimeline& tl, const NetworkConfig& net) {
    if (!net.arc_exists(i, j)) return false;
    if (!n.can_traverse(i, j)) return false;
    if (i < j && !tl.is_even_step(t)) return false;
    if (i > j && tl.is_even_step(t)) return false;
    if (i == j && t + 1 >= tl.step_count) return false;  // nothing to hold into
    return true;
}

// Step a payload's supply and demand attach to: outbound payloads (origin
// below target) ride even steps, return payloads odd steps.
inline int attachment_step(const Payload& p, int month, const ReducedTimeline& tl) {
    int even = tl.even_step_of_month.at(month);
    return p.origin < p.target ? even : even + 1;
}

}  // namespace campaignopt
