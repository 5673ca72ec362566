#pragma once

// Campaign input data: vehicles, stacks, payloads, network, constants.
// All types are immutable after validation and safe to share across threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace campaignopt {

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

using Arc = std::pair<int, int>;  // directed (origin node, target node)

// Commodity type indices.
enum Commodity : int {
    COM_VEHICLE = 0,
    COM_CREW = 1,
    COM_ISRU_PLANT = 2,
    COM_MAINTENANCE = 3,
    COM_CONSUMABLES = 4,
    COM_MISC = 5,
    COM_OXIDIZER = 6,
    COM_FUEL = 7,
};
inline constexpr int kNumCommodities = 8;
inline constexpr int kNumIntegerCommodities = 2;  // vehicle, crew

// Specific impulse at or above this is treated as cryogenic propellant.
inline constexpr double kCryogenicIspThreshold = 370.0;
inline constexpr double kCryoOxidizerBoiloffPerDay = 0.00016;  // 0.016%/day LOX

inline bool is_cryogenic(double isp) { return isp >= kCryogenicIspThreshold; }

struct Vehicle {
    int id = -1;
    std::string name;
    double payload_capacity = 0.0;    // m_pay, kg
    double propellant_capacity = 0.0; // m_prop, kg
    double dry_mass = 0.0;            // m_dry, kg
    double isp = 0.0;                 // I_sp, s
    int launch_frequency = 1;         // t_F, months between supplied units
    int earliest_launch = 0;          // t_L, month index
    std::set<Arc> domain;             // arcs the vehicle may traverse

    // Secondary parameters, derived from isp unless a stack overrides them.
    double oxidizer_ratio = 0.0;      // phi
    double boiloff_rate = 0.0;        // beta, fraction of oxidizer lost per day

    bool is_stack = false;            // synthetic vehicle created from a StackDef
    std::vector<int> stack_members;   // base vehicle ids, leader first (stacks only)

    bool can_traverse(int i, int j) const { return domain.count({i, j}) > 0; }
};

// Default oxidizer mass ratios by propellant family. The mixture ratios are
// not campaign inputs; they only split propellant between the two commodity
// streams, so the objective is insensitive to the exact values.
inline constexpr double kCryoOxidizerRatio = 0.845;      // ~LOX/LH2 at O/F 5.5
inline constexpr double kStorableOxidizerRatio = 0.655;  // ~NTO/MMH at O/F 1.9

inline void derive_secondary_parameters(Vehicle& v) {
    if (is_cryogenic(v.isp)) {
        v.oxidizer_ratio = kCryoOxidizerRatio;
        v.boiloff_rate = kCryoOxidizerBoiloffPerDay;
    } else {
        v.oxidizer_ratio = kStorableOxidizerRatio;
        v.boiloff_rate = 0.0;
    }
}

struct StackDef {
    std::vector<int> members;  // vehicle ids, leading (active) element first
    // Optional file-level overrides for quantities the data model has to
    // choose defaults for.
    std::optional<double> propellant_capacity;
    std::optional<int> earliest_launch;
    std::optional<int> launch_frequency;
};

struct Payload {
    int id = -1;
    std::string name;
    int type_index = 5;        // commodity type p
    double quantity = 0.0;     // kg, or unit count for integer types
    int origin = 0;            // node i
    int target = 0;            // node j
    int window_lower = 0;      // t_L, month
    int window_upper = 0;      // t_U, month
    std::set<int> soft_precursors;   // P: must launch at or before this payload
    std::set<int> strict_precursors; // Q: must launch strictly before
    std::set<int> co_payloads;       // C: must launch with this payload
};

struct HoldoverTof {
    double even_to_odd = 0.0;  // days
    double odd_to_even = 0.0;  // days
};

struct NetworkConfig {
    std::vector<std::pair<int, std::string>> nodes;  // (index, name)
    struct ArcData {
        double dv_km_s = 0.0;
        double tof_days = 0.0;
    };
    std::map<Arc, ArcData> arcs;           // transfer arcs only (i != j)
    std::map<int, HoldoverTof> holdover;   // per-node holdover times of flight

    int node_count() const { return static_cast<int>(nodes.size()); }
    bool has_node(int i) const {
        return std::any_of(nodes.begin(), nodes.end(),
                           [i](const auto& n) { return n.first == i; });
    }
    bool arc_exists(int i, int j) const {
        if (i == j) return holdover.count(i) > 0;
        return arcs.count({i, j}) > 0;
    }
    double dv(int i, int j) const {
        if (i == j) return 0.0;
        auto it = arcs.find({i, j});
        return it == arcs.end() ? 0.0 : it->second.dv_km_s;
    }
    double transfer_tof(int i, int j) const {
        auto it = arcs.find({i, j});
        return it == arcs.end() ? 0.0 : it->second.tof_days;
    }
};

struct GlobalConstants {
    double crew_mass = 100.0;          // kg per crew member
    double consumable_rate = 8.655;    // kg per crew member per day
    double isru_production = 0.00153;  // kg oxidizer per day per kg plant
    double isru_maintenance = 0.1 / 365.0;  // kg supplies per kg plant per day
    double g0 = 9.80665;               // m/s^2
    double death_penalty = 1.0e9;      // objective for infeasible candidates
};

struct ConstantsOverrides {
    std::optional<double> crew_mass;
    std::optional<double> consumable_rate;
    std::optional<double> isru_production;
    std::optional<double> isru_maintenance;
    std::optional<double> g0;
    std::optional<double> death_penalty;
};

inline GlobalConstants apply_overrides(GlobalConstants c, const ConstantsOverrides& o) {
    if (o.crew_mass) c.crew_mass = *o.crew_mass;
    if (o.consumable_rate) c.consumable_rate = *o.consumable_rate;
    if (o.isru_production) c.isru_production = *o.isru_production;
    if (o.isru_maintenance) c.isru_maintenance = *o.isru_maintenance;
    if (o.g0) c.g0 = *o.g0;
    if (o.death_penalty) c.death_penalty = *o.death_penalty;
    return c;
}

// The validated bundle of everything a campaign evaluation needs.
struct ProgramRequirements {
    std::vector<Vehicle> base_vehicles;   // as loaded, before stack expansion
    std::vector<StackDef> stacks;
    std::vector<Vehicle> vehicles;        // base vehicles + synthetic stacks
    // stack_family[n] = {n} plus ids of synthetic stack vehicles containing n,
    // for every base vehicle n (the S' mapping).
    std::vector<std::vector<int>> stack_family;
    std::vector<Payload> payloads;
    NetworkConfig network;
    GlobalConstants constants;

    int vehicle_count() const { return static_cast<int>(vehicles.size()); }
    int base_vehicle_count() const { return static_cast<int>(base_vehicles.size()); }
    int payload_count() const { return static_cast<int>(payloads.size()); }
};

inline void validate_vehicle(const Vehicle& v, const NetworkConfig& net) {
    auto fail = [&](const std::string& rule) {
        throw ValidationError("vehicle " + std::to_string(v.id) + " (" + v.name +
                              "): " + rule);
    };
    if (v.payload_capacity < 0) fail("payload capacity must be >= 0");
    if (v.propellant_capacity <= 0) fail("propellant capacity must be > 0");
    if (v.dry_mass <= 0) fail("dry mass must be > 0");
    if (v.isp <= 0) fail("specific impulse must be > 0");
    if (v.launch_frequency < 1) fail("launch frequency must be >= 1");
    if (v.earliest_launch < 0) fail("earliest launch must be >= 0");
    for (const auto& [i, j] : v.domain) {
        if (!net.has_node(i) || !net.has_node(j))
            fail("domain arc " + std::to_string(i) + "-" + std::to_string(j) +
                 " references an undefined node");
    }
}

inline void validate_payload(const Payload& p, int payload_count,
                             const NetworkConfig& net) {
    auto fail = [&](const std::string& rule) {
        throw ValidationError("payload " + std::to_string(p.id) + " (" + p.name +
                              "): " + rule);
    };
    if (p.window_lower > p.window_upper) fail("launch window is inverted (t_L > t_U)");
    if (p.origin == p.target) fail("origin and target nodes must differ");
    if (!net.has_node(p.origin) || !net.has_node(p.target))
        fail("origin/target references an undefined node");
    if (p.type_index < 0 || p.type_index >= kNumCommodities)
        fail("unknown payload type index");
    if (p.quantity < 0) fail("quantity must be >= 0");
    auto check_refs = [&](const std::set<int>& s, const char* which) {
        for (int q : s) {
            if (q < 0 || q >= payload_count)
                fail(std::string(which) + " references unknown payload id " +
                     std::to_string(q));
            if (q == p.id) fail(std::string(which) + " lists the payload itself");
        }
    };
    check_refs(p.soft_precursors, "soft precursor set");
    check_refs(p.strict_precursors, "strict precursor set");
    check_refs(p.co_payloads, "co-payload set");
}

// Transitive closure of the (symmetric) co-payload relation; returns the group
// containing each payload, as sorted id lists.
inline std::vector<std::vector<int>> co_payload_groups(
    const std::vector<Payload>& payloads) {
    int n = static_cast<int>(payloads.size());
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (const auto& p : payloads)
        for (int q : p.co_payloads) unite(p.id, q);
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    out.reserve(groups.size());
    for (auto& [root, ids] : groups) {
        std::sort(ids.begin(), ids.end());
        out.push_back(std::move(ids));
    }
    return out;
}

inline void validate_program(const ProgramRequirements& r) {
    for (const auto& v : r.base_vehicles) validate_vehicle(v, r.network);
    for (const auto& p : r.payloads)
        validate_payload(p, r.payload_count(), r.network);
    // No pair within a co-payload group (transitively closed) may also be in a
    // strict-precursor relation: both cannot hold at once.
    auto groups = co_payload_groups(r.payloads);
    for (const auto& g : groups) {
        std::set<int> members(g.begin(), g.end());
        for (int l : g)
            for (int q : r.payloads[l].strict_precursors)
                if (members.count(q))
                    throw ValidationError(
                        "payload " + std::to_string(l) + ": strict precursor " +
                        std::to_string(q) +
                        " is in the same co-payload group, which is inconsistent");
    }
    for (const auto& s : r.stacks) {
        if (s.members.size() < 2)
            throw ValidationError("stack must list at least two member vehicles");
        std::set<int> seen;
        for (int m : s.members) {
            if (m < 0 || m >= r.base_vehicle_count())
                throw ValidationError("stack references unknown vehicle id " +
                                      std::to_string(m));
            if (!seen.insert(m).second)
                throw ValidationError("stack lists vehicle " + std::to_string(m) +
                                      " more than once");
        }
    }
}

// Appends one synthetic vehicle per stack. The leading element is the active
// element: the stack takes its I_sp, domain and propellant family. Dry masses
// sum; the members' tanks remain part of the stack, so propellant capacity
// sums as well unless the stack definition overrides it. Availability is the
// max over members: a stack cannot exist before all of its members can launch.
inline std::vector<Vehicle> expand_stacks(const std::vector<Vehicle>& vehicles,
                                          const std::vector<StackDef>& stacks) {
    std::vector<Vehicle> out = vehicles;
    for (const auto& s : stacks) {
        const Vehicle& leader = vehicles.at(s.members.front());
        Vehicle v;
        v.id = static_cast<int>(out.size());
        v.name = "stack[";
        for (size_t k = 0; k < s.members.size(); ++k)
            v.name += (k ? "," : "") + std::to_string(s.members[k]);
        v.name += "] " + leader.name;
        v.isp = leader.isp;
        v.domain = leader.domain;
        v.oxidizer_ratio = leader.oxidizer_ratio;
        v.boiloff_rate = leader.boiloff_rate;
        v.is_stack = true;
        v.stack_members = s.members;
        v.payload_capacity = leader.payload_capacity;
        v.dry_mass = 0.0;
        double prop_sum = 0.0;
        int t_l = 0, t_f = 1;
        for (size_t k = 0; k < s.members.size(); ++k) {
            const Vehicle& m = vehicles.at(s.members[k]);
            v.dry_mass += m.dry_mass;
            prop_sum += m.propellant_capacity;
            t_l = std::max(t_l, m.earliest_launch);
            t_f = std::max(t_f, m.launch_frequency);
            if (k > 0) v.payload_capacity -= m.dry_mass;
        }
        v.propellant_capacity = s.propellant_capacity.value_or(prop_sum);
        v.earliest_launch = s.earliest_launch.value_or(t_l);
        v.launch_frequency = s.launch_frequency.value_or(t_f);
        if (v.payload_capacity < 0)
            throw ValidationError(
                "stack " + v.name +
                ": inactive member dry masses exceed the leader's payload capacity (" +
                std::to_string(v.payload_capacity) + " kg)");
        out.push_back(std::move(v));
    }
    return out;
}

inline std::vector<std::vector<int>> build_stack_family(
    const std::vector<Vehicle>& all, int base_count) {
    std::vector<std::vector<int>> family(base_count);
    for (int n = 0; n < base_count; ++n) family[n].push_back(n);
    for (int n = base_count; n < static_cast<int>(all.size()); ++n)
        for (int m : all[n].stack_members) family[m].push_back(n);
    return family;
}

// The default four-node Earth/LEO/LLO/lunar-surface network. The arc dV values
// are estimates assembled from public Earth-Moon transfer budgets (the launch
// arc is free: launcher performance up to translunar injection is outside the
// model); scenario network files carry the authoritative copies.
inline NetworkConfig default_network() {
    NetworkConfig net;
    net.nodes = {{0, "Earth Surface"}, {1, "LEO"}, {2, "LLO"}, {3, "Lunar Surface"}};
    net.arcs[{0, 1}] = {0.0, 0.0};
    net.arcs[{1, 0}] = {0.0, 0.0};
    net.arcs[{1, 2}] = {0.90, 3.0};
    net.arcs[{2, 1}] = {4.04, 3.0};
    net.arcs[{2, 0}] = {0.90, 3.0};
    net.arcs[{2, 3}] = {1.87, 1.0};
    net.arcs[{3, 2}] = {1.87, 1.0};
    net.holdover[0] = {0.0, 0.0};
    net.holdover[1] = {5.0, 25.0};
    net.holdover[2] = {5.0, 25.0};
    net.holdover[3] = {3.0, 27.0};
    return net;
}

// Bundle loose parts into a validated ProgramRequirements.
inline ProgramRequirements make_program(std::vector<Vehicle> vehicles,
                                        std::vector<StackDef> stacks,
                                        std::vector<Payload> payloads,
                                        NetworkConfig network,
                                        GlobalConstants constants = {}) {
    ProgramRequirements r;
    r.base_vehicles = std::move(vehicles);
    r.stacks = std::move(stacks);
    r.payloads = std::move(payloads);
    r.network = std::move(network);
    r.constants = constants;
    for (auto& v : r.base_vehicles)
        if (!v.is_stack) derive_secondary_parameters(v);
    validate_program(r);
    r.vehicles = expand_stacks(r.base_vehicles, r.stacks);
    r.stack_family = build_stack_family(r.vehicles, r.base_vehicle_count());
    return r;
}

}  // namespace campaignopt
