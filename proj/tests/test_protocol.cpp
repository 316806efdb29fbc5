#include "qexp/errors.hpp"
#include "qexp/protocol.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace qexp;

namespace {

VectorizedState sigma_state(int k) {
    return vec(pauli(k)).normalized();
}

Channel iz_channel() {
    return Channel::uniform({UnitaryMatrix::identity(2), UnitaryMatrix(pauli(3))});
}

VectorizedState ket(Eigen::Index n, Eigen::Index k) {
    Vector v = Vector::Zero(n);
    v(k) = 1.0;
    return VectorizedState(v);
}

}  // namespace

TEST(HadamardTest, Examples) {
    Rng r(1);
    const VectorizedState psi(random_unit_vector(r, 4));
    EXPECT_NEAR(hadamard_test_probability(UnitaryMatrix::identity(4), psi), 1.0, 1e-15);
    EXPECT_NEAR(hadamard_test_probability(UnitaryMatrix(kron(pauli(3), pauli(0))), ket(4, 0)), 1.0, 1e-15);
    EXPECT_NEAR(hadamard_test_probability(UnitaryMatrix(kron(pauli(1), pauli(0))), ket(4, 0)), 0.5, 1e-15);
}

TEST(HadamardTest, RejectsUnnormalized) {
    const VectorizedState psi(Vector::Ones(4));
    EXPECT_THROW(hadamard_test_probability(UnitaryMatrix::identity(4), psi), InvalidArgument);
}

TEST(HadamardTest, SpecMatchesDirectDefinition) {
    Rng r(2);
    const Channel c = oracle::random_channel(r, 1, 3);
    const KrausLayer k = c.kraus();
    for (std::size_t d = 0; d < 3; ++d) {
        for (std::size_t e = 0; e < 3; ++e) {
            const Matrix ud = k[d].unitary.matrix(), ue = k[e].unitary.matrix();
            const Matrix expect = oracle::kron2(ud.adjoint(), ud.transpose()) * oracle::kron2(ue, ue.conjugate());
            const HadamardTestSpec spec = hadamard_test_spec(k, d, e);
            EXPECT_LT((spec.unitary.matrix() - expect).norm(), 1e-12);
            const VectorizedState psi(random_unit_vector(r, 4));
            EXPECT_LT((apply_v(ud, ue, psi) - expect * psi.amplitudes()).norm(), 1e-12);
        }
        EXPECT_LT((hadamard_test_spec(k, d, d).unitary.matrix() - Matrix::Identity(4, 4)).norm(), 1e-10);
        const std::size_t e = (d + 1) % 3;
        EXPECT_LT((hadamard_test_spec(k, d, e).unitary.matrix() -
                   hadamard_test_spec(k, e, d).unitary.matrix().adjoint())
                      .norm(),
                  1e-10);
    }
}

TEST(SampleHadamardTest, IdentityAlwaysZero) {
    const VectorizedState psi = sigma_state(1);
    EXPECT_EQ(sample_hadamard_test(UnitaryMatrix::identity(4), psi, 1000, 3), 1.0);
}

TEST(SampleHadamardTest, ConcentratesAndIsDeterministic) {
    const UnitaryMatrix x(kron(pauli(1), pauli(0)));
    int close = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const double f = sample_hadamard_test(x, ket(4, 0), 1000000, seed);
        close += std::abs(f - 0.5) <= 0.002;
        EXPECT_EQ(f, sample_hadamard_test(x, ket(4, 0), 1000000, seed));
    }
    EXPECT_GE(close, 19);
}

TEST(SampleHadamardTest, MeanOverSeedsMatchesExact) {
    Rng r(4);
    const UnitaryMatrix v(haar_unitary(r, 4));
    const VectorizedState psi(random_unit_vector(r, 4));
    const double p = hadamard_test_probability(v, psi);
    const int seeds = 400;
    const std::uint64_t shots = 200;
    double mean = 0.0;
    for (int s = 0; s < seeds; ++s) {
        mean += sample_hadamard_test(v, psi, shots, s);
    }
    mean /= seeds;
    const double se = std::sqrt(p * (1 - p) / (shots * seeds));
    EXPECT_LE(std::abs(mean - p), 3 * se + 1e-12);
}

TEST(EstimateContraction, Examples) {
    Rng r(5);
    const VectorizedState psi(random_unit_vector(r, 4));
    EXPECT_NEAR(estimate_contraction_sq(Channel::identity(2), psi, kExactShots, 0), 1.0, 1e-12);
    EXPECT_NEAR(estimate_contraction_sq(Channel::complete_depolarizer(1), sigma_state(3), kExactShots, 0), 0.0,
                1e-12);
}

TEST(EstimateContraction, ExactModeMatchesDirectKrausApplication) {
    Rng r(6);
    for (int trial = 0; trial < 50; ++trial) {
        const Channel c = oracle::random_channel(r, 2, 2 + trial % 3);
        const Matrix a = oracle::random_traceless(r, 4);
        const double expect = std::pow(oracle::frob(oracle::apply(oracle::layers_of(c), a)) / oracle::frob(a), 2);
        EXPECT_NEAR(estimate_contraction_sq(c, vec(a).normalized(), kExactShots, 0), expect, 1e-10);
    }
}

TEST(EstimateContraction, IdentityWithBuildW) {
    Rng r(7);
    for (int trial = 0; trial < 100; ++trial) {
        const Channel c = oracle::random_channel(r, 1 + trial % 2, 2 + trial % 3);
        const VectorizedState psi(random_unit_vector(r, c.dim() * c.dim()));
        const Matrix w = build_w(c);
        const double expect = (psi.amplitudes().adjoint() * w.adjoint() * w * psi.amplitudes())(0).real();
        EXPECT_NEAR(estimate_contraction_sq(c, psi, kExactShots, 0), expect, 1e-9);
    }
}

TEST(EstimateContraction, RequiresRegularChannel) {
    Rng r(8);
    const Channel c = oracle::random_channel(r, 1, 3, false);
    EXPECT_THROW(estimate_contraction_sq(c, sigma_state(1), kExactShots, 0), InvalidArgument);
}

TEST(EstimateContraction, SampledWithinStandardError) {
    Rng r(9);
    const Channel c = oracle::random_channel(r, 1, 3);
    const VectorizedState psi = vec(oracle::random_traceless(r, 2)).normalized();
    const double exact = estimate_contraction_sq(c, psi, kExactShots, 0);
    int within = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const ContractionEstimate est = estimate_contraction(c, psi, 2000, Rng(seed));
        within += std::abs(est.value - exact) <= 3 * est.standard_error;
        EXPECT_EQ(est.samples, 3u * 2000u);
    }
    EXPECT_GE(within, 95);
}

TEST(Orthogonality, Examples) {
    EXPECT_TRUE(check_orthogonality(sigma_state(1)));
    EXPECT_FALSE(check_orthogonality(VectorizedState::maximally_entangled(2)));
    Rng r(10);
    const OrthogonalityOutcome out = sample_orthogonality(ket(4, 0), r);
    EXPECT_NEAR(out.reject_probability, 0.5, 1e-15);
}

TEST(Orthogonality, SampledRejectFrequencyAndProjection) {
    Rng root(11);
    int rejects = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
        Rng r = root.split(i);
        const OrthogonalityOutcome out = sample_orthogonality(ket(4, 0), r);
        if (!out.passed) {
            ++rejects;
        } else {
            EXPECT_LT(std::abs(out.state.to_operator().trace()), 1e-12);
            EXPECT_NEAR(out.state.norm(), 1.0, 1e-12);
        }
    }
    EXPECT_NEAR(static_cast<double>(rejects) / trials, 0.5, 3 * std::sqrt(0.25 / trials));
}

TEST(ArthurVerify, Examples) {
    const NonExpanderInstance yes(iz_channel(), 0.9, 0.5);
    const VerifierOutcome a = arthur_verify(yes, sigma_state(3), kExactShots, 0);
    EXPECT_TRUE(a.accepted);
    EXPECT_NEAR(a.estimated_contraction_sq, 1.0, 1e-12);

    const NonExpanderInstance no(Channel::complete_depolarizer(1), 0.9, 0.5);
    for (int k = 1; k < 4; ++k) {
        const VerifierOutcome b = arthur_verify(no, sigma_state(k), kExactShots, 0);
        EXPECT_FALSE(b.accepted);
        EXPECT_NEAR(b.estimated_contraction_sq, 0.0, 1e-12);
    }

    const VerifierOutcome c = arthur_verify(yes, VectorizedState::maximally_entangled(2), kExactShots, 0);
    EXPECT_FALSE(c.accepted);
    EXPECT_FALSE(c.orthogonality_passed);
}

TEST(ArthurVerify, SoundnessExactOverProjectedStates) {
    Rng r(12);
    const Channel c = oracle::random_channel(r, 2, 4);
    const double beta = spectral_gap(c).kappa;
    for (int i = 0; i < 100; ++i) {
        Rng s = r.split(i);
        const VectorizedState psi(random_unit_vector(s, 16));
        const OrthogonalityOutcome o = sample_orthogonality(psi, s);
        if (o.passed) {
            EXPECT_LE(estimate_contraction_sq(c, o.state, kExactShots, 0), beta * beta + 1e-9);
        }
    }
}

TEST(ArthurVerify, CompletenessAndSoundnessSampled) {
    const NonExpanderInstance yes(iz_channel(), 0.9, 0.5);
    std::vector<Matrix> no_set{pauli(0), pauli(0), pauli(3), pauli(3), pauli(1), pauli(2)};
    std::vector<UnitaryMatrix> no_u;
    for (const auto &m : no_set) {
        no_u.emplace_back(m);
    }
    const NonExpanderInstance no(Channel::uniform(no_u), 0.9, 0.5);
    const std::uint64_t shots = recommended_shots(0.9, 0.5);
    EXPECT_EQ(shots, static_cast<std::uint64_t>(std::ceil(100.0 / std::pow(0.81 - 0.25, 2))));
    const VectorizedState yes_w = merlin_witness(yes.channel());
    const VectorizedState no_w = merlin_witness(no.channel());
    int accepted = 0, rejected = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        accepted += arthur_verify(yes, yes_w, shots, seed).accepted;
        rejected += !arthur_verify(no, no_w, shots, seed).accepted;
    }
    EXPECT_GE(accepted, 95);
    EXPECT_GE(rejected, 95);
}

TEST(ArthurVerify, OutcomeInvariantsAndDeterminism) {
    Rng r(13);
    const Channel c = oracle::random_channel(r, 1, 3);
    const NonExpanderInstance inst(c, 0.9, 0.2);
    const VectorizedState psi = merlin_witness(c);
    const VerifierOutcome a = arthur_verify(inst, psi, 500, 77);
    const VerifierOutcome b = arthur_verify(inst, psi, 500, 77);
    EXPECT_EQ(a.estimated_contraction_sq, b.estimated_contraction_sq);
    EXPECT_EQ(a.accepted, b.accepted);
    const double slack = 3 * a.standard_error;
    EXPECT_GE(a.estimated_contraction_sq, -slack);
    EXPECT_LE(a.estimated_contraction_sq, 1 + slack);
    EXPECT_GT(a.confidence, 0.99);
}

TEST(MerlinWitness, AchievesKappa) {
    const VectorizedState w = merlin_witness(iz_channel());
    EXPECT_NEAR(oracle::frob(iz_channel().apply(w.to_operator())), 1.0, 1e-12);
    const VectorizedState d = merlin_witness(Channel::complete_depolarizer(1));
    EXPECT_LT(std::abs(d.to_operator().trace()), 1e-9);
    EXPECT_LT(oracle::frob(Channel::complete_depolarizer(1).apply(d.to_operator())), 1e-12);
    Rng r(14);
    for (int i = 0; i < 10; ++i) {
        const Channel c = oracle::random_channel(r, 2, 3);
        const VectorizedState m = merlin_witness(c);
        EXPECT_NEAR(oracle::frob(c.apply(m.to_operator())), oracle::kappa(c), 1e-8);
    }
}
