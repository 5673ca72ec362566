#pragma once

// Catalog of the bundled scenario input sets under scenarios/.

#include <string>
#include <vector>

#include "campaignopt/io.hpp"

namespace campaignopt {

struct ScenarioInfo {
    std::string name;
    std::string notes;
    double expected_objective = 0.0;  // 0: no published anchor
    double tolerance = 0.0;           // relative
};

inline const std::vector<ScenarioInfo>& list_scenarios() {
    static const std::vector<ScenarioInfo> catalog = {
        {"apollo", "single-mission crewed landing, full stack logistics", 37486.0,
         0.05},
        {"clps", "commercial lander payload deliveries, December 2022 epoch",
         19061.0, 0.05},
        {"artemis_1_2a", "CLPS plus crewed Artemis 3-6 surface missions", 0.0,
         0.0},
        {"artemis_2b", "outpost build-up with ISRU propellant production",
         886750.0, 0.10},
        {"toy_2x2", "two payloads, two landers; exhaustively solvable", 0.0, 0.0},
        {"toy_single", "one payload, one lander smoke case", 0.0, 0.0},
    };
    return catalog;
}

inline std::string scenario_root() {
#ifdef CAMPAIGNOPT_SOURCE_DIR
    return std::string(CAMPAIGNOPT_SOURCE_DIR) + "/scenarios";
#else
    return "scenarios";
#endif
}

inline ProgramRequirements load_scenario(const std::string& name,
                                         std::string root = "") {
    bool known = false;
    for (const auto& s : list_scenarios()) known = known || s.name == name;
    if (!known) throw ValidationError("unknown scenario: " + name);
    if (root.empty()) root = scenario_root();
    std::string dir = root + "/" + name;
    std::string stacks = dir + "/stacks.txt";
    if (!std::ifstream(stacks)) stacks.clear();
    return load_campaign(dir + "/vehicles.txt", dir + "/payloads.txt",
                         dir + "/network.txt", stacks);
}

}  // namespace campaignopt
