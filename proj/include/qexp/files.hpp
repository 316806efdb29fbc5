#pragma once

// Instance, channel, reduction-spec, thermal-model, witness and state files.
// All share the JSON container of json_io.hpp; relative paths inside a file
// resolve against that file's directory.
//
// Unitary entries (in "kraus" and "unitaries") take one of the forms
//   "circuits/foo.json"                 circuit file, simulated to a unitary
//   {"file": "circuits/foo.json"}       same
//   {"circuit": {"qubits": .., ...}}    inline circuit
//   {"matrix": [[[re, im], ...], ...]}  explicit matrix
//
// Channel / instance file:
//   {"qubits": n, "kraus": [...], "weights": [...]?,
//    "alpha": x?, "beta": y?, "separation": s?}
// or with "layers": [{"kraus": [...], "weights": [...]?}, ...] in place of
// "kraus"/"weights" for a composition of mixtures applied in order.

#include "qexp/json_io.hpp"
#include "qexp/reduction.hpp"
#include "qexp/thermal.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>

namespace qexp {

struct ChannelFile {
    Channel channel;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> separation;
    // Contraction recorded by the producer (e.g. synth-expander), if any.
    std::optional<double> certified_kappa;
};

ChannelFile channel_file_from_json(const JsonDocument &doc);
ChannelFile load_channel_file(const std::filesystem::path &file);

// Requires alpha and beta; reports violations of alpha > beta at "alpha".
NonExpanderInstance instance_from_json(const JsonDocument &doc);
NonExpanderInstance load_instance(const std::filesystem::path &file);

Json channel_to_json(const Channel &channel);

// Reduction spec file:
//   {"verifier": <circuit path or inline circuit>,
//    "witness_qubits": n_w, "ancilla_qubits": n_a, "a": a, "b": b,
//    "strict": true?,
//    "base_expander": {"file": <channel file>} |
//                     {"synthesize": {"degree_per_stage": 4, "seed": 7, "target_kappa": 0.1}}}
struct ReductionSpecFile {
    ReductionSpec spec;
    // Set when the base expander was synthesized.
    std::optional<BaseExpander> synthesized;
};

ReductionSpecFile reduction_spec_from_json(const JsonDocument &doc);
ReductionSpecFile load_reduction_spec(const std::filesystem::path &file);

// Thermal model file: {"qubits": n, "unitaries": [...], "R0": r0, "R1": r1}.
ThermalModel thermal_model_from_json(const JsonDocument &doc);
ThermalModel load_thermal_model(const std::filesystem::path &file);

// Witness file: {"amplitudes": [[re, im], ...]} (unit norm within 1e-9) or
// {"matrix": ...} (any nonzero operator, normalized).
VectorizedState witness_from_json(const JsonDocument &doc);
VectorizedState load_witness(const std::filesystem::path &file);

// Density matrix file: {"matrix": ...}.
Operator density_from_json(const JsonDocument &doc);
Operator load_density(const std::filesystem::path &file);

}  // namespace qexp
