#include "qexp/circuit.hpp"

#include "qexp/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace qexp {

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 11> kNames{{
    {GateKind::X, "X"},
    {GateKind::Y, "Y"},
    {GateKind::Z, "Z"},
    {GateKind::H, "H"},
    {GateKind::S, "S"},
    {GateKind::T, "T"},
    {GateKind::CNOT, "CNOT"},
    {GateKind::CZ, "CZ"},
    {GateKind::TOFFOLI, "TOFFOLI"},
    {GateKind::MCU, "MCU"},
    {GateKind::GLOBAL_PHASE, "GLOBAL_PHASE"},
}};

std::size_t bit_of(int qubit, int num_qubits) {
    return std::size_t{1} << (num_qubits - 1 - qubit);
}

}  // namespace

std::string_view to_string(GateKind kind) {
    for (const auto &[k, name] : kNames) {
        if (k == kind) {
            return name;
        }
    }
    return "?";
}

std::optional<GateKind> gate_kind_from_string(std::string_view name) {
    for (const auto &[k, n] : kNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

bool is_single_qubit_kind(GateKind kind) {
    switch (kind) {
        case GateKind::X:
        case GateKind::Y:
        case GateKind::Z:
        case GateKind::H:
        case GateKind::S:
        case GateKind::T:
            return true;
        default:
            return false;
    }
}

Matrix single_qubit_matrix(GateKind kind) {
    Matrix m = Matrix::Identity(2, 2);
    switch (kind) {
        case GateKind::X:
            return pauli(1);
        case GateKind::Y:
            return pauli(2);
        case GateKind::Z:
            return pauli(3);
        case GateKind::H:
            return hadamard();
        case GateKind::S:
            m(1, 1) = cdouble(0.0, 1.0);
            return m;
        case GateKind::T:
            m(1, 1) = std::polar(1.0, std::numbers::pi / 4.0);
            return m;
        default:
            throw InvalidArgument("gate " + std::string(to_string(kind)) + " is not a single-qubit gate");
    }
}

Matrix Gate::target_matrix() const {
    switch (kind) {
        case GateKind::CNOT:
        case GateKind::TOFFOLI:
            return pauli(1);
        case GateKind::CZ:
            return pauli(3);
        case GateKind::MCU:
            if (matrix) {
                return *matrix;
            }
            if (base) {
                return single_qubit_matrix(*base);
            }
            throw InvalidArgument("MCU gate needs a base kind or a matrix");
        case GateKind::GLOBAL_PHASE:
            return Matrix::Identity(1, 1) * phase;
        default:
            return single_qubit_matrix(kind);
    }
}

std::vector<int> Gate::control_polarities() const {
    if (kind == GateKind::MCU && !polarities.empty()) {
        return polarities;
    }
    return std::vector<int>(controls.size(), 1);
}

bool operator==(const Gate &a, const Gate &b) {
    if (a.kind != b.kind || a.targets != b.targets || a.controls != b.controls || a.polarities != b.polarities ||
        a.base != b.base || a.phase != b.phase || a.matrix.has_value() != b.matrix.has_value()) {
        return false;
    }
    if (a.matrix) {
        return a.matrix->rows() == b.matrix->rows() && a.matrix->cols() == b.matrix->cols() && *a.matrix == *b.matrix;
    }
    return true;
}

Gate make_gate(GateKind kind, std::vector<int> targets, std::vector<int> controls) {
    Gate g;
    g.kind = kind;
    g.targets = std::move(targets);
    g.controls = std::move(controls);
    return g;
}

Gate global_phase(cdouble phase) {
    Gate g;
    g.kind = GateKind::GLOBAL_PHASE;
    g.phase = phase;
    return g;
}

namespace {

void check_disjoint(const std::vector<int> &targets, const std::vector<int> &controls) {
    std::set<int> seen;
    for (int q : targets) {
        if (!seen.insert(q).second) {
            throw InvalidArgument("qubit " + std::to_string(q) + " appears twice among the targets");
        }
    }
    for (int q : controls) {
        if (!seen.insert(q).second) {
            throw InvalidArgument("control qubit " + std::to_string(q) + " overlaps another control or target");
        }
    }
}

}  // namespace

Gate multi_controlled(GateKind base, int target, std::vector<int> controls, std::vector<int> polarities) {
    if (!is_single_qubit_kind(base)) {
        throw InvalidArgument("MCU base must be one of X, Y, Z, H, S, T");
    }
    Gate g;
    g.kind = GateKind::MCU;
    g.targets = {target};
    g.controls = std::move(controls);
    g.polarities = std::move(polarities);
    g.base = base;
    check_disjoint(g.targets, g.controls);
    return g;
}

Gate multi_controlled(const UnitaryMatrix &base, std::vector<int> targets, std::vector<int> controls,
                      std::vector<int> polarities) {
    Gate g;
    g.kind = GateKind::MCU;
    g.targets = std::move(targets);
    g.controls = std::move(controls);
    g.polarities = std::move(polarities);
    g.matrix = base.matrix();
    check_disjoint(g.targets, g.controls);
    if (base.dim() != static_cast<Eigen::Index>(std::size_t{1} << g.targets.size())) {
        throw DimensionError("MCU base dimension does not match its number of targets");
    }
    return g;
}

Gate multi_controlled(const GateCircuit &base, std::vector<int> targets, std::vector<int> controls,
                      std::vector<int> polarities) {
    if (static_cast<std::size_t>(base.num_qubits()) != targets.size()) {
        throw DimensionError("base circuit acts on " + std::to_string(base.num_qubits()) + " qubits but " +
                             std::to_string(targets.size()) + " targets were given");
    }
    return multi_controlled(simulate_unitary(base), std::move(targets), std::move(controls), std::move(polarities));
}

// --- GateCircuit ---------------------------------------------------------

GateCircuit::GateCircuit(int num_qubits, std::vector<Gate> gates) : num_qubits_(num_qubits) {
    if (num_qubits < 1) {
        throw InvalidArgument("circuit needs at least one qubit");
    }
    for (auto &g : gates) {
        add(std::move(g));
    }
}

void GateCircuit::validate(const Gate &gate) const {
    auto check_index = [&](int q) {
        if (q < 0 || q >= num_qubits_) {
            throw InvalidArgument("qubit index " + std::to_string(q) + " out of range for a " +
                                  std::to_string(num_qubits_) + "-qubit circuit");
        }
    };
    for (int q : gate.targets) {
        check_index(q);
    }
    for (int q : gate.controls) {
        check_index(q);
    }
    check_disjoint(gate.targets, gate.controls);

    auto expect = [&](std::size_t targets, std::size_t controls) {
        if (gate.targets.size() != targets || gate.controls.size() != controls) {
            throw InvalidArgument(std::string(to_string(gate.kind)) + " takes " + std::to_string(controls) +
                                  " control(s) and " + std::to_string(targets) + " target(s)");
        }
    };
    if (gate.kind != GateKind::MCU && !gate.polarities.empty()) {
        throw InvalidArgument("only MCU gates carry control polarities");
    }
    if (gate.kind != GateKind::MCU && (gate.base || gate.matrix)) {
        throw InvalidArgument("only MCU gates carry a base or matrix");
    }
    switch (gate.kind) {
        case GateKind::CNOT:
        case GateKind::CZ:
            expect(1, 1);
            break;
        case GateKind::TOFFOLI:
            expect(1, 2);
            break;
        case GateKind::GLOBAL_PHASE:
            expect(0, 0);
            if (std::abs(std::abs(gate.phase) - 1.0) > 1e-12) {
                throw InvalidArgument("global phase must have unit modulus");
            }
            break;
        case GateKind::MCU: {
            if (gate.targets.empty()) {
                throw InvalidArgument("MCU needs at least one target");
            }
            if (!gate.polarities.empty() && gate.polarities.size() != gate.controls.size()) {
                throw InvalidArgument("MCU needs one polarity bit per control");
            }
            for (int p : gate.polarities) {
                if (p != 0 && p != 1) {
                    throw InvalidArgument("control polarity must be 0 or 1");
                }
            }
            if (gate.base.has_value() == gate.matrix.has_value()) {
                throw InvalidArgument("MCU needs exactly one of a base kind or a matrix");
            }
            if (gate.base) {
                if (!is_single_qubit_kind(*gate.base) || gate.targets.size() != 1) {
                    throw InvalidArgument("MCU base kind must be a single-qubit gate with one target");
                }
            } else {
                const auto expected = static_cast<Eigen::Index>(std::size_t{1} << gate.targets.size());
                if (gate.matrix->rows() != expected || gate.matrix->cols() != expected) {
                    throw InvalidArgument("MCU matrix must be " + std::to_string(expected) + "x" +
                                          std::to_string(expected));
                }
                UnitaryMatrix check(*gate.matrix);
            }
            break;
        }
        default:
            expect(1, 0);
            break;
    }
}

GateCircuit &GateCircuit::add(Gate gate) {
    validate(gate);
    gates_.push_back(std::move(gate));
    return *this;
}

GateCircuit &GateCircuit::append(const GateCircuit &other) {
    if (other.num_qubits_ != num_qubits_) {
        throw DimensionError("cannot append circuits on different qubit counts");
    }
    for (const auto &g : other.gates_) {
        add(g);
    }
    return *this;
}

// --- simulation ----------------------------------------------------------

void apply_gate(const Gate &gate, int num_qubits, Matrix &state) {
    const auto dim = std::size_t{1} << num_qubits;
    if (static_cast<std::size_t>(state.rows()) != dim) {
        throw DimensionError("state block has the wrong number of rows");
    }
    if (gate.kind == GateKind::GLOBAL_PHASE) {
        state *= gate.phase;
        return;
    }
    const Matrix m = gate.target_matrix();
    const auto polarity = gate.control_polarities();

    std::size_t control_mask = 0;
    std::size_t control_value = 0;
    for (std::size_t c = 0; c < gate.controls.size(); ++c) {
        const auto bit = bit_of(gate.controls[c], num_qubits);
        control_mask |= bit;
        if (polarity[c]) {
            control_value |= bit;
        }
    }
    const auto k = gate.targets.size();
    const auto sub = std::size_t{1} << k;
    std::vector<std::size_t> target_bits(k);
    std::size_t target_mask = 0;
    for (std::size_t t = 0; t < k; ++t) {
        // targets[0] is the most significant bit of the k-qubit sub-index.
        target_bits[t] = bit_of(gate.targets[t], num_qubits);
        target_mask |= target_bits[t];
    }
    std::vector<std::size_t> offsets(sub);
    for (std::size_t s = 0; s < sub; ++s) {
        std::size_t off = 0;
        for (std::size_t t = 0; t < k; ++t) {
            if (s & (std::size_t{1} << (k - 1 - t))) {
                off |= target_bits[t];
            }
        }
        offsets[s] = off;
    }

    Matrix block(static_cast<Eigen::Index>(sub), state.cols());
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & target_mask) {
            continue;
        }
        if ((base & control_mask) != control_value) {
            continue;
        }
        for (std::size_t s = 0; s < sub; ++s) {
            block.row(static_cast<Eigen::Index>(s)) = state.row(static_cast<Eigen::Index>(base | offsets[s]));
        }
        const Matrix out = m * block;
        for (std::size_t s = 0; s < sub; ++s) {
            state.row(static_cast<Eigen::Index>(base | offsets[s])) = out.row(static_cast<Eigen::Index>(s));
        }
    }
}

UnitaryMatrix simulate_unitary(const GateCircuit &circuit, int max_qubits) {
    if (circuit.num_qubits() > max_qubits) {
        throw CapExceeded("circuit on " + std::to_string(circuit.num_qubits()) +
                          " qubits exceeds the dense simulation cap of " + std::to_string(max_qubits));
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << circuit.num_qubits());
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto &g : circuit.gates()) {
        apply_gate(g, circuit.num_qubits(), u);
    }
    return UnitaryMatrix(std::move(u));
}

Matrix embed(const Matrix &op, const std::vector<int> &targets, int num_qubits) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
    if (op.rows() != static_cast<Eigen::Index>(std::size_t{1} << targets.size()) || op.rows() != op.cols()) {
        throw DimensionError("embedded operator does not match its target count");
    }
    Gate g;
    g.kind = GateKind::MCU;
    g.targets = targets;
    g.matrix = op;
    Matrix out = Matrix::Identity(dim, dim);
    apply_gate(g, num_qubits, out);
    return out;
}

Matrix basis_projector(const std::vector<int> &qubits, const std::vector<int> &values, int num_qubits) {
    if (qubits.size() != values.size()) {
        throw InvalidArgument("projector needs one value per qubit");
    }
    const auto dim = std::size_t{1} << num_qubits;
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        bool match = true;
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            const bool set = (i & bit_of(qubits[k], num_qubits)) != 0;
            match = match && (set == (values[k] != 0));
        }
        if (match) {
            p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        }
    }
    return p;
}

std::size_t decomposed_gate_count(const Gate &gate) {
    const auto c = gate.controls.size();
    return c <= 1 ? 1 : c * c;
}

RegisterLayout::RegisterLayout(int n_w, int n_a) : witness_qubits(n_w), ancilla_qubits(n_a) {
    if (n_w < 1 || n_a < 0) {
        throw InvalidArgument("layout needs n_w >= 1 and n_a >= 0");
    }
}

std::vector<int> RegisterLayout::witness() const {
    std::vector<int> out(static_cast<std::size_t>(witness_qubits));
    for (int q = 0; q < witness_qubits; ++q) {
        out[static_cast<std::size_t>(q)] = q;
    }
    return out;
}

std::vector<int> RegisterLayout::ancilla() const {
    std::vector<int> out;
    for (int q = witness_qubits; q < witness_qubits + ancilla_qubits; ++q) {
        out.push_back(q);
    }
    return out;
}

}  // namespace qexp
