#include "qexp/protocol.hpp"

#include "qexp/errors.hpp"

#include <cmath>

namespace qexp {

namespace {

void require_unit(const VectorizedState &psi) {
    if (std::abs(psi.norm() - 1.0) > 1e-9) {
        throw InvalidArgument("witness state is not normalized (norm " + std::to_string(psi.norm()) + ")");
    }
}

KrausLayer regular_kraus(const Channel &channel) {
    if (!channel.is_regular()) {
        throw InvalidArgument("the contraction identity needs a D-regular (uniformly weighted) channel");
    }
    return channel.kraus();
}

// One-sided normal tail beyond kMarginSigmas.
double margin_confidence() {
    return 1.0 - 0.5 * std::erfc(kMarginSigmas / std::sqrt(2.0));
}

}  // namespace

HadamardTestSpec hadamard_test_spec(const KrausLayer &kraus, std::size_t d, std::size_t e) {
    if (d >= kraus.size() || e >= kraus.size()) {
        throw InvalidArgument("Kraus index out of range");
    }
    const Matrix &ud = kraus[d].unitary.matrix();
    const Matrix &ue = kraus[e].unitary.matrix();
    Matrix v = kron(ud.adjoint(), ud.transpose()) * kron(ue, ue.conjugate());
    return {d, e, UnitaryMatrix(std::move(v))};
}

Vector apply_v(const Matrix &u_d, const Matrix &u_e, const VectorizedState &psi) {
    const Matrix g = u_d.adjoint() * u_e;
    const Operator a = psi.to_operator();
    return vec(g * a * g.adjoint()).amplitudes();
}

double hadamard_test_probability(const UnitaryMatrix &v, const VectorizedState &psi) {
    require_unit(psi);
    if (v.dim() != psi.amplitudes().size()) {
        throw DimensionError("Hadamard test unitary and state dimensions differ");
    }
    const cdouble overlap = psi.amplitudes().dot(v.matrix() * psi.amplitudes());
    return 0.5 * (1.0 + overlap.real());
}

double hadamard_test_probability(const Matrix &u_d, const Matrix &u_e, const VectorizedState &psi) {
    require_unit(psi);
    if (u_d.rows() != psi.dim() || u_e.rows() != psi.dim()) {
        throw DimensionError("Kraus operator and witness dimensions differ");
    }
    const cdouble overlap = psi.amplitudes().dot(apply_v(u_d, u_e, psi));
    return 0.5 * (1.0 + overlap.real());
}

namespace {

std::uint64_t count_zeros(double p, std::uint64_t shots, Rng &rng) {
    std::uint64_t zeros = 0;
    for (std::uint64_t s = 0; s < shots; ++s) {
        zeros += rng.bernoulli(p) ? 1 : 0;
    }
    return zeros;
}

}  // namespace

double sample_hadamard_test(const UnitaryMatrix &v, const VectorizedState &psi, std::uint64_t shots,
                            std::uint64_t seed) {
    if (shots < 1) {
        throw InvalidArgument("need at least one shot");
    }
    const double p = hadamard_test_probability(v, psi);
    Rng rng(seed);
    return static_cast<double>(count_zeros(p, shots, rng)) / static_cast<double>(shots);
}

ContractionEstimate estimate_contraction(const Channel &channel, const VectorizedState &psi,
                                         std::uint64_t shots_per_pair, Rng rng) {
    require_unit(psi);
    if (psi.dim() != channel.dim()) {
        throw DimensionError("witness dimension does not match the channel");
    }
    const KrausLayer kraus = regular_kraus(channel);
    const auto degree = static_cast<double>(kraus.size());
    const double scale = 2.0 / (degree * degree);

    ContractionEstimate out;
    double pair_sum = 0.0;
    std::uint64_t pairs = 0;
    for (std::size_t d = 0; d < kraus.size(); ++d) {
        for (std::size_t e = d + 1; e < kraus.size(); ++e) {
            const double p = hadamard_test_probability(kraus[d].unitary.matrix(), kraus[e].unitary.matrix(), psi);
            double p_hat = p;
            if (shots_per_pair != kExactShots) {
                Rng pair_rng = rng.split(d).split(e);
                p_hat = static_cast<double>(count_zeros(p, shots_per_pair, pair_rng)) /
                        static_cast<double>(shots_per_pair);
                out.samples += shots_per_pair;
            }
            pair_sum += 2.0 * p_hat - 1.0;
            ++pairs;
        }
    }
    out.value = 1.0 / degree + scale * pair_sum;
    if (shots_per_pair != kExactShots) {
        out.standard_error = scale * std::sqrt(static_cast<double>(pairs) / static_cast<double>(shots_per_pair));
    }
    return out;
}

double estimate_contraction_sq(const Channel &channel, const VectorizedState &psi, std::uint64_t shots_per_pair,
                               std::uint64_t seed) {
    return estimate_contraction(channel, psi, shots_per_pair, Rng(seed)).value;
}

bool check_orthogonality(const VectorizedState &psi, double tol) {
    const Vector phi = VectorizedState::maximally_entangled(psi.dim()).amplitudes();
    return std::abs(phi.dot(psi.amplitudes())) <= tol;
}

OrthogonalityOutcome sample_orthogonality(const VectorizedState &psi, Rng &rng) {
    require_unit(psi);
    const Vector phi = VectorizedState::maximally_entangled(psi.dim()).amplitudes();
    const cdouble overlap = phi.dot(psi.amplitudes());
    OrthogonalityOutcome out;
    out.reject_probability = std::min(1.0, std::norm(overlap));
    out.passed = !rng.bernoulli(out.reject_probability);
    if (out.passed) {
        Vector projected = psi.amplitudes() - overlap * phi;
        out.state = VectorizedState(projected / projected.norm());
    } else {
        out.state = psi;
    }
    return out;
}

VerifierOutcome arthur_verify(const NonExpanderInstance &instance, const VectorizedState &psi,
                              std::uint64_t shots_per_pair, std::uint64_t seed) {
    require_unit(psi);
    const double alpha_sq = instance.alpha() * instance.alpha();
    VerifierOutcome out;
    out.threshold = alpha_sq;

    if (shots_per_pair == kExactShots) {
        out.orthogonality_passed = check_orthogonality(psi);
        if (!out.orthogonality_passed) {
            return out;
        }
        out.estimated_contraction_sq = estimate_contraction(instance.channel(), psi, kExactShots, Rng(seed)).value;
        out.accepted = out.estimated_contraction_sq > alpha_sq;
        out.confidence = 1.0;
        return out;
    }

    const Rng root(seed);
    Rng ortho_rng = root.split(0);
    const OrthogonalityOutcome ortho = sample_orthogonality(psi, ortho_rng);
    out.samples_used = 1;
    out.orthogonality_passed = ortho.passed;
    out.confidence = margin_confidence();
    if (!ortho.passed) {
        return out;
    }
    const ContractionEstimate est = estimate_contraction(instance.channel(), ortho.state, shots_per_pair, root.split(1));
    out.estimated_contraction_sq = est.value;
    out.standard_error = est.standard_error;
    out.samples_used += est.samples;
    out.threshold = alpha_sq - kMarginSigmas * est.standard_error;
    out.accepted = est.value > out.threshold;
    return out;
}

VectorizedState merlin_witness(const Channel &channel) {
    return spectral_gap(channel).witness;
}

std::uint64_t recommended_shots(double alpha, double beta) {
    const double s = alpha * alpha - beta * beta;
    if (!(s > 0.0)) {
        throw InvalidArgument("shot budget needs alpha^2 > beta^2");
    }
    return static_cast<std::uint64_t>(std::ceil(100.0 / (s * s)));
}

}  // namespace qexp
