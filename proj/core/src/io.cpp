#include "decoupler/io.hpp"

#include <fstream>
#include <sstream>

#include "decoupler/error.hpp"
#include "json_util.hpp"

namespace decoupler {

using detail::field;
using detail::field_as;
using detail::get_as;
using detail::json;

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

namespace {

json gate_json(const Gate& g) {
    json j{{"name", gate_name(g.kind)}};
    if (g.kind == GateKind::CX) {
        j["qubits"] = {g.control, g.target};
        return j;
    }
    j["qubit"] = g.target;
    if (g.kind == GateKind::RZ) j["theta"] = g.angle;
    if (g.kind == GateKind::Rk) j["k"] = g.k;
    return j;
}

Gate gate_from(const json& j, const std::string& where) {
    const auto name = field_as<std::string>(j, "name", where);
    const auto kind = parse_gate_name(name);
    if (!kind) throw Error(Errc::ParseError, "unknown gate '" + name + "' in " + where);
    Gate g;
    g.kind = *kind;
    if (g.kind == GateKind::CX) {
        const auto q = field_as<std::vector<int>>(j, "qubits", where);
        if (q.size() != 2) throw Error(Errc::ParseError, "'qubits' of CX must have two entries in " + where);
        g.control = q[0];
        g.target = q[1];
        return g;
    }
    g.target = field_as<int>(j, "qubit", where);
    if (g.kind == GateKind::RZ) g.angle = field_as<double>(j, "theta", where);
    if (g.kind == GateKind::Rk) g.k = field_as<int>(j, "k", where);
    return g;
}

struct InstructionToJson {
    json operator()(const Gate& g) const {
        json j = gate_json(g);
        j["kind"] = "gate";
        return j;
    }
    json operator()(const Measure& m) const {
        return {{"kind", "measure"}, {"qubit", m.qubit}, {"clbit", m.clbit}};
    }
    json operator()(const Conditional& c) const {
        return {{"kind", "conditional"}, {"gate", gate_json(c.gate)}, {"clbit", c.clbit}, {"value", c.value}};
    }
    json operator()(const Delay& d) const {
        return {{"kind", "delay"}, {"qubit", d.qubit}, {"duration", d.duration}};
    }
    json operator()(const Barrier& b) const { return {{"kind", "barrier"}, {"qubits", b.qubits}}; }
};

Instruction instruction_from(const json& j, std::size_t index) {
    const std::string where = "instructions[" + std::to_string(index) + "]";
    const auto kind = field_as<std::string>(j, "kind", where);
    if (kind == "gate") return gate_from(j, where);
    if (kind == "measure") return Measure{field_as<int>(j, "qubit", where), field_as<int>(j, "clbit", where)};
    if (kind == "conditional") {
        Conditional c;
        c.gate = gate_from(field(j, "gate", where), where + ".gate");
        c.clbit = field_as<int>(j, "clbit", where);
        c.value = j.contains("value") ? get_as<int>(j["value"], "value") : 1;
        return c;
    }
    if (kind == "delay") return Delay{field_as<int>(j, "qubit", where), field_as<Nanos>(j, "duration", where)};
    if (kind == "barrier") return Barrier{field_as<std::vector<int>>(j, "qubits", where)};
    throw Error(Errc::ParseError, "unknown instruction kind '" + kind + "' in " + where);
}

}  // namespace

std::string circuit_to_json(const DynamicCircuit& circuit, int indent) {
    json instructions = json::array();
    for (const auto& inst : circuit.instructions) instructions.push_back(std::visit(InstructionToJson{}, inst));
    json j{{"n_qubits", circuit.n_qubits}, {"n_clbits", circuit.n_clbits}, {"instructions", instructions}};
    return j.dump(indent) + "\n";
}

DynamicCircuit circuit_from_json(const std::string& text) {
    const json j = detail::parse_json(text);
    DynamicCircuit c(field_as<int>(j, "n_qubits", "circuit"), field_as<int>(j, "n_clbits", "circuit"));
    const auto& list = field(j, "instructions", "circuit");
    if (!list.is_array()) throw Error(Errc::ParseError, "'instructions' must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) c.instructions.push_back(instruction_from(list[i], i));
    return c;
}

DynamicCircuit load_circuit(const std::filesystem::path& path) {
    try {
        return circuit_from_json(read_text_file(path));
    } catch (const Error& e) {
        if (e.code() != Errc::ParseError) throw;
        throw Error(Errc::ParseError, path.string() + ": " + e.detail());
    }
}

void save_circuit(const DynamicCircuit& circuit, const std::filesystem::path& path) {
    write_text_file(path, circuit_to_json(circuit));
}

std::string device_to_json(const DeviceModel& d, int indent) {
    json edges = json::array();
    for (const auto& e : d.edges) edges.push_back({e.a, e.b, e.coupling_mhz});
    json zphase = json::array();
    for (const auto& z : d.noise.zphase_rate) zphase.push_back({z.measured, z.unitary, z.rad_per_ns});
    json collisions = json::array();
    for (const auto& c : d.noise.collision_pairs) collisions.push_back({c.measured, c.unitary, c.delta_mhz, c.j_eff_mhz});
    json noise{{"zphase_rate", zphase},
               {"zz_rate", d.noise.zz_rate},
               {"readout_error", d.noise.readout_error},
               {"collision_pairs", collisions},
               {"pulse_error", d.noise.pulse_error},
               {"t2_dephasing_rate", d.noise.t2_dephasing_rate},
               {"static_z_rate", d.noise.static_z_rate}};
    json timing{{"gate_ns", d.timing.gate_ns}, {"tau_m", d.timing.tau_m}, {"tau_ff", d.timing.tau_ff}};
    json j{{"n_qubits", d.n_qubits}, {"edges", edges},   {"omega01", d.omega01},
           {"omega12", d.omega12},   {"timing", timing}, {"noise", noise}};
    return j.dump(indent) + "\n";
}

DeviceModel device_from_json(const std::string& text) {
    const json j = detail::parse_json(text);
    DeviceModel d;
    d.n_qubits = field_as<int>(j, "n_qubits", "device");
    for (const auto& e : field(j, "edges", "device")) {
        const auto v = get_as<std::vector<double>>(e, "edges");
        if (v.size() != 3 && v.size() != 2) throw Error(Errc::ParseError, "'edges' entries must be [a, b, J]");
        d.edges.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), v.size() == 3 ? v[2] : 0.0});
    }
    d.omega01 = field_as<std::vector<double>>(j, "omega01", "device");
    d.omega12 = field_as<std::vector<double>>(j, "omega12", "device");
    if (j.contains("timing")) {
        const auto& t = j["timing"];
        if (t.contains("gate_ns")) {
            for (const auto& [name, ns] : get_as<std::map<std::string, Nanos>>(t["gate_ns"], "gate_ns")) {
                d.timing.gate_ns[name] = ns;
            }
        }
        if (t.contains("tau_m")) d.timing.tau_m = get_as<Nanos>(t["tau_m"], "tau_m");
        if (t.contains("tau_ff")) d.timing.tau_ff = get_as<Nanos>(t["tau_ff"], "tau_ff");
    }
    if (j.contains("noise")) {
        const auto& n = j["noise"];
        auto& nz = d.noise;
        if (n.contains("zphase_rate")) {
            for (const auto& z : n["zphase_rate"]) {
                const auto v = get_as<std::vector<double>>(z, "zphase_rate");
                if (v.size() != 3) throw Error(Errc::ParseError, "'zphase_rate' entries must be [m, u, rate]");
                nz.zphase_rate.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), v[2]});
            }
        }
        if (n.contains("zz_rate")) nz.zz_rate = get_as<std::vector<double>>(n["zz_rate"], "zz_rate");
        if (n.contains("readout_error")) nz.readout_error = get_as<std::vector<double>>(n["readout_error"], "readout_error");
        if (n.contains("collision_pairs")) {
            for (const auto& c : n["collision_pairs"]) {
                const auto v = get_as<std::vector<double>>(c, "collision_pairs");
                if (v.size() != 4) throw Error(Errc::ParseError, "'collision_pairs' entries must be [m, u, delta, J]");
                nz.collision_pairs.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), v[2], v[3]});
            }
        }
        if (n.contains("pulse_error")) nz.pulse_error = get_as<double>(n["pulse_error"], "pulse_error");
        if (n.contains("t2_dephasing_rate")) {
            nz.t2_dephasing_rate = get_as<std::vector<double>>(n["t2_dephasing_rate"], "t2_dephasing_rate");
        }
        if (n.contains("static_z_rate")) nz.static_z_rate = get_as<std::vector<double>>(n["static_z_rate"], "static_z_rate");
    }
    const auto problems = validate(d);
    if (!problems.empty()) throw Error(Errc::ParseError, "invalid device: " + problems.front());
    return d;
}

DeviceModel load_device(const std::filesystem::path& path) {
    try {
        return device_from_json(read_text_file(path));
    } catch (const Error& e) {
        if (e.code() != Errc::ParseError) throw;
        throw Error(Errc::ParseError, path.string() + ": " + e.detail());
    }
}

void save_device(const DeviceModel& device, const std::filesystem::path& path) {
    write_text_file(path, device_to_json(device));
}

}  // namespace decoupler
