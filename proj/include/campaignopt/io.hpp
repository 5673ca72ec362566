#pragma once

// Line-oriented readers and writers for the campaign input files.
//
//   vehicles: id|name|m_pay|m_prop|m_dry|isp|t_F|t_L|domain
//             domain is comma-separated i-j pairs, e.g. 0-0,0-1,1-2
//   stacks:   comma-separated member ids, leader first; optional |key=value
//             overrides (m_prop, t_L, t_F)
//   payloads: id|name|type|quantity|origin|target|t_L|t_U|P|Q|C
//             sets are comma-separated ids or empty
//   network:  N:index:name / A:i:j:dv_km_s:tof_days / H:i:tof_e2o:tof_o2e
//
// Lines starting with '#' and blank lines are ignored everywhere.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "campaignopt/datamodel.hpp"

namespace campaignopt {

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

inline double parse_num(const std::string& s, const std::string& ctx) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(ctx + ": cannot parse number '" + s + "'");
    }
}

inline int parse_int(const std::string& s, const std::string& ctx) {
    double v = parse_num(s, ctx);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ParseError(ctx + ": expected integer, got '" + s + "'");
    return i;
}

inline std::set<int> parse_id_set(const std::string& s, const std::string& ctx) {
    std::set<int> out;
    if (trim(s).empty()) return out;
    for (const auto& tok : split(s, ','))
        if (!tok.empty()) out.insert(parse_int(tok, ctx));
    return out;
}

// Yields (line number, content) for every non-comment, non-blank line.
inline std::vector<std::pair<int, std::string>> data_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::vector<std::pair<int, std::string>> out;
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        out.emplace_back(no, t);
    }
    return out;
}

}  // namespace detail

inline std::vector<Vehicle> read_vehicles(const std::string& path) {
    std::vector<Vehicle> out;
    for (const auto& [no, line] : detail::data_lines(path)) {
        std::string ctx = path + ":" + std::to_string(no);
        auto f = detail::split(line, '|');
        if (f.size() != 9)
            throw ParseError(ctx + ": expected 9 fields, got " +
                             std::to_string(f.size()));
        Vehicle v;
        v.id = detail::parse_int(f[0], ctx);
        v.name = f[1];
        v.payload_capacity = detail::parse_num(f[2], ctx);
        v.propellant_capacity = detail::parse_num(f[3], ctx);
        v.dry_mass = detail::parse_num(f[4], ctx);
        v.isp = detail::parse_num(f[5], ctx);
        v.launch_frequency = detail::parse_int(f[6], ctx);
        v.earliest_launch = detail::parse_int(f[7], ctx);
        for (const auto& tok : detail::split(f[8], ',')) {
            if (tok.empty()) continue;
            auto ij = detail::split(tok, '-');
            if (ij.size() != 2)
                throw ParseError(ctx + ": bad domain arc '" + tok + "'");
            v.domain.insert({detail::parse_int(ij[0], ctx),
                             detail::parse_int(ij[1], ctx)});
        }
        if (v.id != static_cast<int>(out.size()))
            throw ParseError(ctx + ": vehicle ids must be consecutive from 0");
        out.push_back(std::move(v));
    }
    return out;
}

inline std::vector<StackDef> read_stacks(const std::string& path) {
    std::vector<StackDef> out;
    for (const auto& [no, line] : detail::data_lines(path)) {
        std::string ctx = path + ":" + std::to_string(no);
        auto parts = detail::split(line, '|');
        StackDef s;
        for (const auto& tok : detail::split(parts[0], ','))
            if (!tok.empty()) s.members.push_back(detail::parse_int(tok, ctx));
        for (size_t k = 1; k < parts.size(); ++k) {
            auto kv = detail::split(parts[k], '=');
            if (kv.size() != 2)
                throw ParseError(ctx + ": bad stack override '" + parts[k] + "'");
            if (kv[0] == "m_prop")
                s.propellant_capacity = detail::parse_num(kv[1], ctx);
            else if (kv[0] == "t_L")
                s.earliest_launch = detail::parse_int(kv[1], ctx);
            else if (kv[0] == "t_F")
                s.launch_frequency = detail::parse_int(kv[1], ctx);
            else
                throw ParseError(ctx + ": unknown stack override '" + kv[0] + "'");
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<Payload> read_payloads(const std::string& path) {
    std::vector<Payload> out;
    for (const auto& [no, line] : detail::data_lines(path)) {
        std::string ctx = path + ":" + std::to_string(no);
        auto f = detail::split(line, '|');
        if (f.size() != 11)
            throw ParseError(ctx + ": expected 11 fields, got " +
                             std::to_string(f.size()));
        Payload p;
        p.id = detail::parse_int(f[0], ctx);
        p.name = f[1];
        p.type_index = detail::parse_int(f[2], ctx);
        p.quantity = detail::parse_num(f[3], ctx);
        p.origin = detail::parse_int(f[4], ctx);
        p.target = detail::parse_int(f[5], ctx);
        p.window_lower = detail::parse_int(f[6], ctx);
        p.window_upper = detail::parse_int(f[7], ctx);
        p.soft_precursors = detail::parse_id_set(f[8], ctx);
        p.strict_precursors = detail::parse_id_set(f[9], ctx);
        p.co_payloads = detail::parse_id_set(f[10], ctx);
        if (p.id != static_cast<int>(out.size()))
            throw ParseError(ctx + ": payload ids must be consecutive from 0");
        out.push_back(std::move(p));
    }
    return out;
}

inline NetworkConfig read_network(const std::string& path) {
    NetworkConfig net;
    for (const auto& [no, line] : detail::data_lines(path)) {
        std::string ctx = path + ":" + std::to_string(no);
        auto f = detail::split(line, ':');
        if (f.empty()) continue;
        if (f[0] == "N") {
            if (f.size() != 3) throw ParseError(ctx + ": bad node line");
            net.nodes.emplace_back(detail::parse_int(f[1], ctx), f[2]);
        } else if (f[0] == "A") {
            if (f.size() != 5) throw ParseError(ctx + ": bad arc line");
            int i = detail::parse_int(f[1], ctx), j = detail::parse_int(f[2], ctx);
            net.arcs[{i, j}] = {detail::parse_num(f[3], ctx),
                                detail::parse_num(f[4], ctx)};
        } else if (f[0] == "H") {
            if (f.size() != 4) throw ParseError(ctx + ": bad holdover line");
            int i = detail::parse_int(f[1], ctx);
            net.holdover[i] = {detail::parse_num(f[2], ctx),
                               detail::parse_num(f[3], ctx)};
        } else {
            throw ParseError(ctx + ": unknown record type '" + f[0] + "'");
        }
    }
    for (const auto& [arc, data] : net.arcs)
        if (!net.has_node(arc.first) || !net.has_node(arc.second))
            throw ValidationError("network arc " + std::to_string(arc.first) + "->" +
                                  std::to_string(arc.second) +
                                  " references an undefined node");
    return net;
}

inline ProgramRequirements load_campaign(const std::string& vehicle_file,
                                         const std::string& payload_file,
                                         const std::string& network_file,
                                         const std::string& stack_file = "",
                                         const ConstantsOverrides& overrides = {}) {
    NetworkConfig net = read_network(network_file);
    std::vector<Vehicle> vehicles = read_vehicles(vehicle_file);
    std::vector<Payload> payloads = read_payloads(payload_file);
    std::vector<StackDef> stacks;
    if (!stack_file.empty()) stacks = read_stacks(stack_file);
    return make_program(std::move(vehicles), std::move(stacks), std::move(payloads),
                        std::move(net), apply_overrides(GlobalConstants{}, overrides));
}

// --- writers (round-trip support) ---

namespace detail {
inline std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}
inline std::string fmt_id_set(const std::set<int>& s) {
    std::string out;
    for (int q : s) out += (out.empty() ? "" : ",") + std::to_string(q);
    return out;
}
}  // namespace detail

inline void write_vehicles(const std::vector<Vehicle>& vehicles,
                           const std::string& path) {
    std::ofstream out(path);
    out << "# id|name|m_pay|m_prop|m_dry|isp|t_F|t_L|domain\n";
    for (const auto& v : vehicles) {
        if (v.is_stack) continue;
        out << v.id << '|' << v.name << '|' << detail::fmt_num(v.payload_capacity)
            << '|' << detail::fmt_num(v.propellant_capacity) << '|'
            << detail::fmt_num(v.dry_mass) << '|' << detail::fmt_num(v.isp) << '|'
            << v.launch_frequency << '|' << v.earliest_launch << '|';
        bool first = true;
        for (const auto& [i, j] : v.domain) {
            out << (first ? "" : ",") << i << '-' << j;
            first = false;
        }
        out << '\n';
    }
}

inline void write_stacks(const std::vector<StackDef>& stacks,
                         const std::string& path) {
    std::ofstream out(path);
    out << "# member ids, leader first\n";
    for (const auto& s : stacks) {
        for (size_t k = 0; k < s.members.size(); ++k)
            out << (k ? "," : "") << s.members[k];
        if (s.propellant_capacity)
            out << "|m_prop=" << detail::fmt_num(*s.propellant_capacity);
        if (s.earliest_launch) out << "|t_L=" << *s.earliest_launch;
        if (s.launch_frequency) out << "|t_F=" << *s.launch_frequency;
        out << '\n';
    }
}

inline void write_payloads(const std::vector<Payload>& payloads,
                           const std::string& path) {
    std::ofstream out(path);
    out << "# id|name|type|quantity|origin|target|t_L|t_U|P|Q|C\n";
    for (const auto& p : payloads) {
        out << p.id << '|' << p.name << '|' << p.type_index << '|'
            << detail::fmt_num(p.quantity) << '|' << p.origin << '|' << p.target
            << '|' << p.window_lower << '|' << p.window_upper << '|'
            << detail::fmt_id_set(p.soft_precursors) << '|'
            << detail::fmt_id_set(p.strict_precursors) << '|'
            << detail::fmt_id_set(p.co_payloads) << '\n';
    }
}

inline void write_network(const NetworkConfig& net, const std::string& path) {
    std::ofstream out(path);
    out << "# N:index:name | A:i:j:dv_km_s:tof_days | H:i:tof_e2o:tof_o2e\n";
    for (const auto& [idx, name] : net.nodes) out << "N:" << idx << ':' << name << '\n';
    for (const auto& [arc, d] : net.arcs)
        out << "A:" << arc.first << ':' << arc.second << ':'
            << detail::fmt_num(d.dv_km_s) << ':' << detail::fmt_num(d.tof_days)
            << '\n';
    for (const auto& [i, h] : net.holdover)
        out << "H:" << i << ':' << detail::fmt_num(h.even_to_odd) << ':'
            << detail::fmt_num(h.odd_to_even) << '\n';
}

inline void save_campaign(const ProgramRequirements& r, const std::string& dir) {
    write_vehicles(r.base_vehicles, dir + "/vehicles.txt");
    write_stacks(r.stacks, dir + "/stacks.txt");
    write_payloads(r.payloads, dir + "/payloads.txt");
    write_network(r.network, dir + "/network.txt");
}

}  // namespace campaignopt
