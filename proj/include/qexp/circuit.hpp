#pragma once

// Gate-level circuits and their dense simulation.
//
// Qubit 0 is the most significant bit of a basis-state index: on m qubits,
// qubit q corresponds to bit (m - 1 - q).

#include "qexp/channel.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace qexp {

enum class GateKind { X, Y, Z, H, S, T, CNOT, CZ, TOFFOLI, MCU, GLOBAL_PHASE };

std::string_view to_string(GateKind kind);
std::optional<GateKind> gate_kind_from_string(std::string_view name);
bool is_single_qubit_kind(GateKind kind);

// 2x2 matrix of a single-qubit named gate (X, Y, Z, H, S, T).
Matrix single_qubit_matrix(GateKind kind);

struct Gate {
    GateKind kind = GateKind::X;
    std::vector<int> targets;
    std::vector<int> controls;
    // One bit per control; 1 = act on |1>, 0 = act on |0>. Only MCU may use 0.
    std::vector<int> polarities;
    // MCU base: either a named single-qubit kind or an inline unitary.
    std::optional<GateKind> base;
    std::optional<Matrix> matrix;
    // GLOBAL_PHASE scalar.
    cdouble phase{1.0, 0.0};

    // The 2^k x 2^k matrix applied to the targets when the controls match.
    Matrix target_matrix() const;
    // Controls with their polarity bits, normalizing CNOT/CZ/TOFFOLI.
    std::vector<int> control_polarities() const;
};

bool operator==(const Gate &a, const Gate &b);

Gate make_gate(GateKind kind, std::vector<int> targets, std::vector<int> controls = {});
Gate global_phase(cdouble phase);

// Native multi-controlled gate applying base to the targets iff every
// control qubit is in the state given by its polarity bit.
Gate multi_controlled(GateKind base, int target, std::vector<int> controls, std::vector<int> polarities);
Gate multi_controlled(const UnitaryMatrix &base, std::vector<int> targets, std::vector<int> controls,
                      std::vector<int> polarities);

class GateCircuit;

Gate multi_controlled(const GateCircuit &base, std::vector<int> targets, std::vector<int> controls,
                      std::vector<int> polarities);

class GateCircuit {
public:
    explicit GateCircuit(int num_qubits, std::vector<Gate> gates = {});

    int num_qubits() const { return num_qubits_; }
    const std::vector<Gate> &gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    // Validates and appends. Throws InvalidArgument naming the problem.
    GateCircuit &add(Gate gate);
    GateCircuit &append(const GateCircuit &other);

    // Throws InvalidArgument if gate violates the circuit invariants.
    void validate(const Gate &gate) const;

    bool operator==(const GateCircuit &other) const = default;

private:
    int num_qubits_;
    std::vector<Gate> gates_;
};

// Circuits simulate densely up to this many qubits.
inline constexpr int kMaxSimulatedQubits = 7;

UnitaryMatrix simulate_unitary(const GateCircuit &circuit, int max_qubits = kMaxSimulatedQubits);

// Applies one gate to every column of a 2^m x k block in place.
void apply_gate(const Gate &gate, int num_qubits, Matrix &state);

// Embeds a k-qubit operator acting on `targets` into the m-qubit space.
Matrix embed(const Matrix &op, const std::vector<int> &targets, int num_qubits);

// Projector onto basis states whose `qubits` read `values`.
Matrix basis_projector(const std::vector<int> &qubits, const std::vector<int> &values, int num_qubits);

// Gate count of the ancilla-free decomposition of an MCU with c controls,
// taken as c^2 (no decomposition is ever performed).
std::size_t decomposed_gate_count(const Gate &gate);

struct RegisterLayout {
    int witness_qubits = 1;
    int ancilla_qubits = 0;

    RegisterLayout(int n_w, int n_a);

    int total() const { return witness_qubits + ancilla_qubits + 1; }
    // Witness plus ancilla: the space the verifier acts on.
    int verifier_qubits() const { return witness_qubits + ancilla_qubits; }
    std::vector<int> witness() const;
    std::vector<int> ancilla() const;
    int indicator() const { return witness_qubits + ancilla_qubits; }
    // Output qubit of the verifier: the first witness qubit.
    int top() const { return 0; }
};

}  // namespace qexp
