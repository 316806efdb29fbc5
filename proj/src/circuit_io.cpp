#include "qexp/circuit_io.hpp"

#include "qexp/errors.hpp"

namespace qexp {

namespace {

Json int_list(const std::vector<int> &values) {
    Json out = Json::array();
    for (int v : values) {
        out.push_back(v);
    }
    return out;
}

Json gate_to_json(const Gate &g) {
    Json j = Json::object();
    j["kind"] = std::string(to_string(g.kind));
    if (!g.controls.empty()) {
        j["controls"] = int_list(g.controls);
    }
    if (!g.polarities.empty()) {
        j["polarities"] = int_list(g.polarities);
    }
    if (!g.targets.empty()) {
        j["targets"] = int_list(g.targets);
    }
    if (g.base) {
        j["base"] = std::string(to_string(*g.base));
    }
    if (g.matrix) {
        j["matrix"] = matrix_to_json(*g.matrix);
    }
    if (g.kind == GateKind::GLOBAL_PHASE) {
        j["phase"] = complex_to_json(g.phase);
    }
    return j;
}

Gate gate_from_json(const JsonDocument &doc, const JsonPath &path) {
    doc.check_keys(path, {"kind", "targets", "controls", "polarities", "base", "matrix", "phase"});
    Gate g;
    const std::string kind = doc.get_string(path / "kind");
    const auto parsed = gate_kind_from_string(kind);
    if (!parsed) {
        doc.fail(path / "kind", "unknown gate kind '" + kind + "'");
    }
    g.kind = *parsed;
    if (doc.has(path / "targets")) {
        g.targets = doc.get_int_list(path / "targets");
    }
    if (doc.has(path / "controls")) {
        g.controls = doc.get_int_list(path / "controls");
    }
    if (doc.has(path / "polarities")) {
        g.polarities = doc.get_int_list(path / "polarities");
    }
    if (doc.has(path / "base")) {
        const std::string base = doc.get_string(path / "base");
        const auto b = gate_kind_from_string(base);
        if (!b || !is_single_qubit_kind(*b)) {
            doc.fail(path / "base", "MCU base must be one of X, Y, Z, H, S, T, got '" + base + "'");
        }
        g.base = *b;
    }
    if (doc.has(path / "matrix")) {
        g.matrix = doc.get_matrix(path / "matrix");
    }
    if (doc.has(path / "phase")) {
        if (g.kind != GateKind::GLOBAL_PHASE) {
            doc.fail(path / "phase", "only GLOBAL_PHASE gates carry a phase");
        }
        g.phase = doc.get_complex(path / "phase");
    } else if (g.kind == GateKind::GLOBAL_PHASE) {
        doc.fail(path, "GLOBAL_PHASE gate needs a phase");
    }
    return g;
}

// Field of the gate most likely responsible for a validation message.
std::string blame_field(const std::string &message, const Gate &g) {
    if (message.find("polarit") != std::string::npos) {
        return "polarities";
    }
    if (message.find("matrix") != std::string::npos || message.find("unitary") != std::string::npos) {
        return "matrix";
    }
    if (message.find("phase") != std::string::npos) {
        return "phase";
    }
    if (message.find("control") != std::string::npos && !g.controls.empty()) {
        return "controls";
    }
    return g.targets.empty() ? "kind" : "targets";
}

}  // namespace

Json circuit_to_json(const GateCircuit &circuit) {
    Json j = Json::object();
    j["qubits"] = circuit.num_qubits();
    Json gates = Json::array();
    for (const auto &g : circuit.gates()) {
        gates.push_back(gate_to_json(g));
    }
    j["gates"] = std::move(gates);
    return j;
}

std::string serialize_circuit(const GateCircuit &circuit) {
    return dump(circuit_to_json(circuit));
}

GateCircuit circuit_from_json(const JsonDocument &doc, const JsonPath &path) {
    doc.check_keys(path, {"qubits", "gates"});
    const int qubits = doc.get_int(path / "qubits");
    if (qubits < 1) {
        doc.fail(path / "qubits", "circuit needs at least one qubit");
    }
    GateCircuit circuit(qubits);
    const Json &gates = doc.at(path / "gates");
    if (!gates.is_array()) {
        doc.fail(path / "gates", "expected an array of gates");
    }
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const JsonPath gp = path / "gates" / i;
        Gate g = gate_from_json(doc, gp);
        try {
            circuit.add(g);
        } catch (const Error &e) {
            doc.fail(gp / blame_field(e.what(), g), e.what());
        }
    }
    return circuit;
}

GateCircuit parse_circuit(std::string text, std::string source) {
    const JsonDocument doc = JsonDocument::parse(std::move(text), std::move(source));
    return circuit_from_json(doc, {});
}

GateCircuit load_circuit(const std::filesystem::path &file) {
    const JsonDocument doc = JsonDocument::load(file);
    return circuit_from_json(doc, {});
}

}  // namespace qexp
