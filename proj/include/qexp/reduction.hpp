#pragma once

// Channel Phi built from a QMA verifier circuit V:
//   1. ancilla verifier: depolarize the indicator if the ancillas are not all |0>;
//   2. witness verifier: same, conditioned on V's top output qubit being |0>;
//   3. controlled base expander on witness+ancilla, conditioned on indicator |1>.
// Phi is kappa-contractive with kappa <= beta for NO instances and is not
// alpha-contractive for YES instances, with alpha and beta from thresholds().

#include "qexp/circuit.hpp"
#include "qexp/spectral.hpp"

#include <cstdint>
#include <optional>

namespace qexp {

// Projector P (the "apply" subspace) defined by a basis-state pattern,
// optionally viewed in a rotated frame: P = F^dag P_basis F.
struct ControlPattern {
    std::vector<int> qubits;
    std::vector<int> values;
    // When set, P projects onto states that do NOT match the pattern.
    bool negate = false;
    std::optional<UnitaryMatrix> frame;

    static ControlPattern matches(std::vector<int> qubits, std::vector<int> values);
    // "Some qubit in the list is |1>".
    static ControlPattern not_all_zero(std::vector<int> qubits);
    ControlPattern conjugated_by(UnitaryMatrix frame_unitary) const;

    Matrix projector(int num_qubits) const;
};

struct ControlledChannel {
    ControlPattern control;
    std::vector<int> targets;
    Channel target_channel;
    // Kraus {P (x) U_d + Q (x) I} on the joint space.
    Channel realized;
    int num_qubits = 0;

    Matrix apply_projector() const { return control.projector(num_qubits); }
    Matrix skip_projector() const;
    // ||sum_d w_d U_d||_F over the target channel's effective Kraus set.
    double zero_sum_residual() const;
};

// Realizes the controlled version of target acting on `targets`.
// Throws InvalidArgument if the control projector does not commute with
// the target operators (overlapping registers).
ControlledChannel control_channel(const ControlPattern &control, std::vector<int> targets, const Channel &target,
                                  int num_qubits);

// {U_i} u {-U_i} with halved weights; same action, zero Kraus sum.
Channel sign_double(const Channel &channel);

bool has_zero_sum(const Channel &channel, double tol = kDefaultTol);

// 8-element {+-I, +-X, +-Y, +-Z} depolarizer on `target`, controlled by P.
ControlledChannel controlled_depolarizer(const ControlPattern &control, int target, int num_qubits);

struct BaseExpander {
    Channel channel;
    double certified_kappa = 1.0;
    double stage_kappa = 1.0;
    int repetitions = 1;
    std::uint64_t seed = 0;
    int attempts = 1;
};

// Composes `stage` with itself r times, r minimal with stage_kappa^r <= target,
// and re-measures. Throws Error if the stage has kappa = 1 or the composed
// channel misses the target.
BaseExpander certify_power(const Channel &stage, double target_kappa, int max_repetitions = 256);

// Seeded random stage of Haar unitaries, amplified by certify_power.
// Retries with derived seeds up to `attempts` times before failing.
BaseExpander build_base_expander(int num_qubits, double target_kappa = 0.1, int degree_per_stage = 4,
                                 std::uint64_t seed = 0, int attempts = 8);

struct Thresholds {
    double alpha;
    double beta;
};

// beta = (1 + kappa_F + 2^{n_w+1} b) / sqrt 2, alpha = sqrt(1 - (8/5)(1 - a^2)).
// In strict mode throws InvalidArgument unless alpha > beta.
Thresholds thresholds(double a, double b, double kappa_f, int n_w, bool strict = true);

struct ReductionSpec {
    GateCircuit verifier;
    RegisterLayout layout;
    double a = 1.0;
    double b = 0.0;
    Channel base_expander;
    double kappa_f = 0.0;
    bool strict = true;
};

struct Reduction {
    Channel channel;
    Thresholds thresholds;
    ControlledChannel ancilla_verifier;
    ControlledChannel witness_verifier;
    ControlledChannel final_expander;
    // Degree of the zero-sum base expander used inside the final stage.
    std::uint64_t base_degree = 0;
};

Reduction build_reduction(const ReductionSpec &spec);

// A = |psi><psi| (x) |0..0><0..0| (x) |0><0| - I / 2^{n_w+n_a+1}.
Operator yes_witness(const RegisterLayout &layout, const Vector &psi);

// Q_a, P_a, Q_w, P_w on the witness+ancilla register (no indicator).
struct VerifierProjectors {
    Matrix q_a;
    Matrix p_a;
    Matrix q_w;
    Matrix p_w;
};

VerifierProjectors verifier_projectors(const UnitaryMatrix &verifier, const RegisterLayout &layout);

// ||P_top V |psi>|0..0>||^2.
double acceptance_probability(const UnitaryMatrix &verifier, const RegisterLayout &layout, const Vector &psi);
// Maximum acceptance probability over all witnesses, and a maximizing witness.
std::pair<double, Vector> max_acceptance(const UnitaryMatrix &verifier, const RegisterLayout &layout);

// Accepts (top output |1>) exactly the witness |1..1> when ancillas start in |0..0>.
// Needs n_a >= 1.
GateCircuit toy_yes_verifier(const RegisterLayout &layout);
// Swaps the top qubit with the first ancilla, so nothing is ever accepted.
GateCircuit toy_no_verifier(const RegisterLayout &layout);
// Toy verifiers followed by a rotation on the top qubit: the YES variant
// accepts |1..1> with probability 1 - epsilon, the NO variant accepts every
// witness with probability epsilon.
GateCircuit noisy_yes_verifier(const RegisterLayout &layout, double epsilon);
GateCircuit noisy_no_verifier(const RegisterLayout &layout, double epsilon);

}  // namespace qexp
