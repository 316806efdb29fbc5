#pragma once

// Circuit files:
//   {"qubits": m,
//    "gates": [{"kind": "H", "targets": [0]},
//              {"kind": "CNOT", "controls": [0], "targets": [1]},
//              {"kind": "MCU", "controls": [0, 2], "polarities": [1, 0],
//               "targets": [1], "base": "Z"},
//              {"kind": "MCU", "targets": [1], "matrix": [[[re, im], ...], ...]},
//              {"kind": "GLOBAL_PHASE", "phase": [-1.0, 0.0]}]}
// serialize_circuit emits fields in the order kind, controls, polarities,
// targets, base, matrix, phase and omits empty ones.

#include "qexp/circuit.hpp"
#include "qexp/json_io.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace qexp {

Json circuit_to_json(const GateCircuit &circuit);
std::string serialize_circuit(const GateCircuit &circuit);

GateCircuit circuit_from_json(const JsonDocument &doc, const JsonPath &path);
// Throws ParseError carrying the line and column of the offending value.
GateCircuit parse_circuit(std::string text, std::string source = {});
GateCircuit load_circuit(const std::filesystem::path &file);

}  // namespace qexp
