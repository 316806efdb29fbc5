#include "qexp/reduction.hpp"

#include "qexp/errors.hpp"
#include "qexp/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace qexp {

// --- control patterns ----------------------------------------------------

ControlPattern ControlPattern::matches(std::vector<int> qubits, std::vector<int> values) {
    if (qubits.size() != values.size()) {
        throw InvalidArgument("control pattern needs one value per qubit");
    }
    ControlPattern p;
    p.qubits = std::move(qubits);
    p.values = std::move(values);
    return p;
}

ControlPattern ControlPattern::not_all_zero(std::vector<int> qubits) {
    ControlPattern p = matches(qubits, std::vector<int>(qubits.size(), 0));
    p.negate = true;
    return p;
}

ControlPattern ControlPattern::conjugated_by(UnitaryMatrix frame_unitary) const {
    ControlPattern p = *this;
    p.frame = std::move(frame_unitary);
    return p;
}

Matrix ControlPattern::projector(int num_qubits) const {
    Matrix p = basis_projector(qubits, values, num_qubits);
    if (negate) {
        p = Matrix::Identity(p.rows(), p.cols()) - p;
    }
    if (frame) {
        if (frame->dim() != p.rows()) {
            throw DimensionError("control frame does not act on the full register");
        }
        p = frame->matrix().adjoint() * p * frame->matrix();
    }
    return p;
}

Matrix ControlledChannel::skip_projector() const {
    const Matrix p = apply_projector();
    return Matrix::Identity(p.rows(), p.cols()) - p;
}

double ControlledChannel::zero_sum_residual() const {
    return target_channel.mean_unitary().norm();
}

ControlledChannel control_channel(const ControlPattern &control, std::vector<int> targets, const Channel &target,
                                  int num_qubits) {
    if (target.dim() != static_cast<Eigen::Index>(std::size_t{1} << targets.size())) {
        throw DimensionError("target channel dimension does not match its " + std::to_string(targets.size()) +
                             " target qubit(s)");
    }
    for (int q : control.qubits) {
        for (int t : targets) {
            if (q == t) {
                throw InvalidArgument("control qubit " + std::to_string(q) + " is also a target");
            }
        }
    }
    const Matrix p = control.projector(num_qubits);
    const Matrix q = Matrix::Identity(p.rows(), p.cols()) - p;
    const double commute_tol = kDefaultTol * static_cast<double>(p.rows());

    std::vector<KrausLayer> layers;
    for (const auto &layer : target.layers()) {
        KrausLayer lifted;
        for (const auto &term : layer) {
            const Matrix u = embed(term.unitary.matrix(), targets, num_qubits);
            if ((p * u - u * p).norm() > commute_tol) {
                throw InvalidArgument("control projector overlaps the target register");
            }
            lifted.push_back({term.weight, UnitaryMatrix(p * u + q)});
        }
        layers.push_back(std::move(lifted));
    }
    return ControlledChannel{control, std::move(targets), target, Channel(std::move(layers)), num_qubits};
}

Channel sign_double(const Channel &channel) {
    if (channel.layers().size() == 1) {
        KrausLayer doubled;
        for (const auto &term : channel.layers().front()) {
            doubled.push_back({0.5 * term.weight, term.unitary});
        }
        for (const auto &term : channel.layers().front()) {
            doubled.push_back({0.5 * term.weight, -term.unitary});
        }
        return Channel(std::move(doubled));
    }
    // For a composition, a leading {+I, -I} layer yields exactly the doubled product set.
    const auto id = UnitaryMatrix::identity(channel.dim());
    std::vector<KrausLayer> layers{KrausLayer{{0.5, id}, {0.5, -id}}};
    layers.insert(layers.end(), channel.layers().begin(), channel.layers().end());
    return Channel(std::move(layers));
}

bool has_zero_sum(const Channel &channel, double tol) {
    return channel.mean_unitary().norm() <= tol;
}

ControlledChannel controlled_depolarizer(const ControlPattern &control, int target, int num_qubits) {
    if (target < 0 || target >= num_qubits) {
        throw InvalidArgument("depolarizer target out of range");
    }
    return control_channel(control, {target}, sign_double(Channel::complete_depolarizer(1)), num_qubits);
}

// --- base expander -------------------------------------------------------

BaseExpander certify_power(const Channel &stage, double target_kappa, int max_repetitions) {
    if (!(target_kappa > 0.0 && target_kappa < 1.0)) {
        throw InvalidArgument("target kappa must lie in (0, 1)");
    }
    const double stage_kappa = spectral_gap(stage).kappa;
    if (stage_kappa >= 1.0 - 1e-9) {
        throw Error("stage channel is not contractive (kappa = " + std::to_string(stage_kappa) + ")");
    }
    int r = 1;
    if (stage_kappa > target_kappa) {
        r = static_cast<int>(std::ceil(std::log(target_kappa) / std::log(stage_kappa)));
        while (std::pow(stage_kappa, r) > target_kappa) {
            ++r;
        }
    }
    if (r > max_repetitions) {
        throw Error("stage kappa " + std::to_string(stage_kappa) + " needs " + std::to_string(r) +
                    " repetitions, more than " + std::to_string(max_repetitions));
    }
    BaseExpander out{power(stage, r), 1.0, stage_kappa, r};
    out.certified_kappa = spectral_gap(out.channel).kappa;
    if (out.certified_kappa > target_kappa) {
        throw Error("composed channel has kappa " + std::to_string(out.certified_kappa) + " above the target " +
                    std::to_string(target_kappa));
    }
    return out;
}

BaseExpander build_base_expander(int num_qubits, double target_kappa, int degree_per_stage, std::uint64_t seed,
                                 int attempts) {
    if (num_qubits < 1 || degree_per_stage < 1) {
        throw InvalidArgument("base expander needs at least one qubit and one unitary per stage");
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
    const Rng root(seed);
    std::string last_error;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        Rng rng = root.split(static_cast<std::uint64_t>(attempt));
        std::vector<UnitaryMatrix> unitaries;
        for (int d = 0; d < degree_per_stage; ++d) {
            unitaries.emplace_back(haar_unitary(rng, dim));
        }
        try {
            BaseExpander out = certify_power(Channel::uniform(unitaries), target_kappa);
            out.seed = seed;
            out.attempts = attempt + 1;
            return out;
        } catch (const Error &e) {
            last_error = e.what();
        }
    }
    throw Error("could not certify a base expander from seed " + std::to_string(seed) + " after " +
                std::to_string(attempts) + " attempts: " + last_error);
}

// --- thresholds and the reduction ----------------------------------------

Thresholds thresholds(double a, double b, double kappa_f, int n_w, bool strict) {
    auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in_unit(a) || !in_unit(b) || !in_unit(kappa_f) || n_w < 1) {
        throw InvalidArgument("thresholds need a, b, kappa_F in [0, 1] and n_w >= 1");
    }
    const double beta = (1.0 + kappa_f + std::ldexp(b, n_w + 1)) / std::sqrt(2.0);
    const double radicand = 1.0 - 1.6 * (1.0 - a * a);
    const double alpha = radicand > 0.0 ? std::sqrt(radicand) : 0.0;
    if (strict && !(alpha > beta)) {
        throw InvalidArgument("alpha = " + std::to_string(alpha) + " does not exceed beta = " + std::to_string(beta));
    }
    return {alpha, beta};
}

namespace {

std::vector<int> range(int begin, int end) {
    std::vector<int> out;
    for (int q = begin; q < end; ++q) {
        out.push_back(q);
    }
    return out;
}

}  // namespace

Reduction build_reduction(const ReductionSpec &spec) {
    const RegisterLayout &layout = spec.layout;
    const int total = layout.total();
    const int vq = layout.verifier_qubits();
    if (spec.verifier.num_qubits() != vq) {
        throw DimensionError("verifier acts on " + std::to_string(spec.verifier.num_qubits()) +
                             " qubits but the layout has n_w + n_a = " + std::to_string(vq));
    }
    if (spec.base_expander.dim() != static_cast<Eigen::Index>(std::size_t{1} << vq)) {
        throw DimensionError("base expander must act on the " + std::to_string(vq) + " witness and ancilla qubits");
    }
    if (spec.strict) {
        if (!(spec.a > 0.99)) {
            throw InvalidArgument("strict mode requires a > 0.99");
        }
        if (!(spec.b < 0.1 * std::ldexp(1.0, -(layout.witness_qubits + 1)))) {
            throw InvalidArgument("strict mode requires b < 0.1 * 2^-(n_w+1)");
        }
        if (!(spec.kappa_f < 0.1)) {
            throw InvalidArgument("strict mode requires kappa_F < 0.1");
        }
    }
    const Thresholds th = thresholds(spec.a, spec.b, spec.kappa_f, layout.witness_qubits, spec.strict);
    if (!(th.alpha > th.beta)) {
        throw InvalidArgument("alpha = " + std::to_string(th.alpha) + " does not exceed beta = " +
                              std::to_string(th.beta));
    }

    const UnitaryMatrix v(embed(simulate_unitary(spec.verifier).matrix(), range(0, vq), total));

    ControlledChannel ancilla =
        controlled_depolarizer(ControlPattern::not_all_zero(layout.ancilla()), layout.indicator(), total);
    ControlledChannel witness = controlled_depolarizer(
        ControlPattern::matches({layout.top()}, {0}).conjugated_by(v), layout.indicator(), total);

    Channel base = has_zero_sum(spec.base_expander) ? spec.base_expander : sign_double(spec.base_expander);
    if (!has_zero_sum(base)) {
        throw InvalidArgument("base expander lacks the zero-sum property after sign doubling");
    }
    ControlledChannel final_stage =
        control_channel(ControlPattern::matches({layout.indicator()}, {1}), range(0, vq), base, total);

    Channel phi = compose(final_stage.realized, compose(witness.realized, ancilla.realized));
    return Reduction{std::move(phi), th, std::move(ancilla), std::move(witness), std::move(final_stage),
                     base.degree()};
}

Operator yes_witness(const RegisterLayout &layout, const Vector &psi) {
    const auto wdim = static_cast<Eigen::Index>(std::size_t{1} << layout.witness_qubits);
    if (psi.size() != wdim) {
        throw DimensionError("witness vector must have length 2^n_w");
    }
    if (std::abs(psi.norm() - 1.0) > 1e-9) {
        throw InvalidArgument("witness vector is not normalized");
    }
    const auto adim = static_cast<Eigen::Index>(std::size_t{1} << layout.ancilla_qubits);
    Matrix zero_anc = Matrix::Zero(adim, adim);
    zero_anc(0, 0) = 1.0;
    Matrix zero_ind = Matrix::Zero(2, 2);
    zero_ind(0, 0) = 1.0;
    const Matrix big_psi = kron(kron(psi * psi.adjoint(), zero_anc), zero_ind);
    const auto n = big_psi.rows();
    return big_psi - Matrix::Identity(n, n) / static_cast<double>(n);
}

VerifierProjectors verifier_projectors(const UnitaryMatrix &verifier, const RegisterLayout &layout) {
    const int vq = layout.verifier_qubits();
    if (verifier.dim() != static_cast<Eigen::Index>(std::size_t{1} << vq)) {
        throw DimensionError("verifier dimension does not match the layout");
    }
    const auto anc = layout.ancilla();
    VerifierProjectors out;
    out.q_a = basis_projector(anc, std::vector<int>(anc.size(), 0), vq);
    out.p_a = Matrix::Identity(out.q_a.rows(), out.q_a.cols()) - out.q_a;
    const Matrix top_one = basis_projector({layout.top()}, {1}, vq);
    out.q_w = verifier.matrix().adjoint() * top_one * verifier.matrix();
    out.p_w = Matrix::Identity(out.q_w.rows(), out.q_w.cols()) - out.q_w;
    return out;
}

namespace {

// Columns embed a witness vector as |psi>|0..0> in the verifier register.
Matrix zero_ancilla_embedding(const RegisterLayout &layout) {
    const auto wdim = static_cast<Eigen::Index>(std::size_t{1} << layout.witness_qubits);
    const auto adim = static_cast<Eigen::Index>(std::size_t{1} << layout.ancilla_qubits);
    Matrix e = Matrix::Zero(wdim * adim, wdim);
    for (Eigen::Index w = 0; w < wdim; ++w) {
        e(w * adim, w) = 1.0;
    }
    return e;
}

}  // namespace

double acceptance_probability(const UnitaryMatrix &verifier, const RegisterLayout &layout, const Vector &psi) {
    const Matrix top_one = basis_projector({layout.top()}, {1}, layout.verifier_qubits());
    const Vector out = top_one * verifier.matrix() * zero_ancilla_embedding(layout) * psi;
    return out.squaredNorm();
}

std::pair<double, Vector> max_acceptance(const UnitaryMatrix &verifier, const RegisterLayout &layout) {
    const Matrix top_one = basis_projector({layout.top()}, {1}, layout.verifier_qubits());
    const Matrix e = zero_ancilla_embedding(layout);
    const Matrix m = e.adjoint() * verifier.matrix().adjoint() * top_one * verifier.matrix() * e;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const auto last = es.eigenvalues().size() - 1;
    return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

namespace {

void require_ancilla(const RegisterLayout &layout) {
    if (layout.ancilla_qubits < 1) {
        throw InvalidArgument("toy verifiers need at least one ancilla qubit");
    }
}

Matrix ry(double theta) {
    Matrix m(2, 2);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    m << c, -s, s, c;
    return m;
}

Gate acceptance_rotation(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw InvalidArgument("epsilon must lie in [0, 1]");
    }
    return multi_controlled(UnitaryMatrix(ry(2.0 * std::asin(std::sqrt(epsilon)))), {0}, {}, {});
}

}  // namespace

GateCircuit toy_yes_verifier(const RegisterLayout &layout) {
    require_ancilla(layout);
    const int flag = layout.witness_qubits;
    GateCircuit c(layout.verifier_qubits());
    c.add(multi_controlled(GateKind::X, flag, layout.witness(), std::vector<int>(layout.witness().size(), 1)));
    c.add(make_gate(GateKind::CNOT, {flag}, {layout.top()}));
    c.add(make_gate(GateKind::CNOT, {layout.top()}, {flag}));
    return c;
}

GateCircuit toy_no_verifier(const RegisterLayout &layout) {
    require_ancilla(layout);
    const int a0 = layout.witness_qubits;
    GateCircuit c(layout.verifier_qubits());
    c.add(make_gate(GateKind::CNOT, {a0}, {layout.top()}));
    c.add(make_gate(GateKind::CNOT, {layout.top()}, {a0}));
    c.add(make_gate(GateKind::CNOT, {a0}, {layout.top()}));
    return c;
}

GateCircuit noisy_yes_verifier(const RegisterLayout &layout, double epsilon) {
    GateCircuit c = toy_yes_verifier(layout);
    c.add(acceptance_rotation(epsilon));
    return c;
}

GateCircuit noisy_no_verifier(const RegisterLayout &layout, double epsilon) {
    GateCircuit c = toy_no_verifier(layout);
    c.add(acceptance_rotation(epsilon));
    return c;
}

}  // namespace qexp
