#include "qexp/errors.hpp"
#include "qexp/reduction.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace qexp;
using oracle::kron2;

namespace {

Matrix ketbra(int bit) {
    Matrix p = Matrix::Zero(2, 2);
    p(bit, bit) = 1.0;
    return p;
}

const BaseExpander &base4() {
    static const BaseExpander b = build_base_expander(4, 0.1, 4, 7);
    return b;
}

Reduction reduce(const GateCircuit &verifier, double a, double b, bool strict = true) {
    const RegisterLayout layout(2, 2);
    return build_reduction(ReductionSpec{verifier, layout, a, b, base4().channel, base4().certified_kappa, strict});
}

}  // namespace

TEST(SignDouble, DepolarizerBecomesZeroSumEightElements) {
    const Channel d = Channel::complete_depolarizer(1);
    const Channel dd = sign_double(d);
    EXPECT_EQ(dd.degree(), 8u);
    EXPECT_TRUE(has_zero_sum(dd));
    EXPECT_FALSE(has_zero_sum(d));
    Rng r(1);
    const Matrix a = oracle::random_matrix(r, 2);
    EXPECT_LT((dd.apply(a) - d.apply(a)).norm(), 1e-12);
    EXPECT_LT((dd.apply(a) - Matrix::Identity(2, 2) * a.trace() / 2.0).norm(), 1e-12);
}

TEST(SignDouble, IdempotentInActionAndPreservesRandomChannels) {
    Rng r(2);
    for (int i = 0; i < 10; ++i) {
        const Channel c = oracle::random_channel(r, 2, 3, i % 2 == 0);
        const Channel dd = sign_double(c);
        const Channel ddd = sign_double(dd);
        const Matrix a = oracle::random_matrix(r, 4);
        EXPECT_LT((dd.apply(a) - c.apply(a)).norm(), 1e-12);
        EXPECT_LT((ddd.apply(a) - c.apply(a)).norm(), 1e-12);
        EXPECT_TRUE(has_zero_sum(dd));
        EXPECT_TRUE(has_zero_sum(ddd));
    }
    const Channel composed = compose(oracle::random_channel(r, 1, 2), oracle::random_channel(r, 1, 3));
    const Channel cd = sign_double(composed);
    EXPECT_EQ(cd.degree(), 2 * composed.degree());
    EXPECT_TRUE(has_zero_sum(cd));
    const Matrix a = oracle::random_matrix(r, 2);
    EXPECT_LT((cd.apply(a) - composed.apply(a)).norm(), 1e-12);
}

TEST(ControlledDepolarizer, BlockActionOnRandomInputs) {
    Rng r(3);
    const ControlledChannel cd = controlled_depolarizer(ControlPattern::matches({0}, {1}), 1, 2);
    EXPECT_EQ(cd.realized.degree(), 8u);
    EXPECT_TRUE(cd.realized.is_regular());
    const Matrix p = ketbra(1), q = ketbra(0);
    for (int i = 0; i < 20; ++i) {
        const Matrix a = oracle::random_matrix(r, 2);
        const Matrix s = oracle::random_matrix(r, 2);
        const Matrix expect =
            kron2(p * a * p, Matrix::Identity(2, 2) * s.trace() / 2.0) + kron2(q * a * q, s);
        EXPECT_LT((cd.realized.apply(kron2(a, s)) - expect).norm(), 1e-10);
    }
}

TEST(ControlledDepolarizer, Examples) {
    const ControlledChannel cd = controlled_depolarizer(ControlPattern::matches({0}, {1}), 1, 2);
    const Matrix zz = kron2(ketbra(0), ketbra(0));
    EXPECT_LT((cd.realized.apply(zz) - zz).norm(), 1e-15);
    EXPECT_LT(cd.realized.apply(kron2(ketbra(1), pauli(3))).norm(), 1e-15);
    EXPECT_THROW(controlled_depolarizer(ControlPattern::matches({1}, {1}), 1, 2), InvalidArgument);
}

TEST(ControlledExpander, CrossTermsWithoutZeroSumVanishAfterDoubling) {
    Rng r(4);
    // Control on qubit 0, two-qubit target register {1, 2}.
    const Channel f = oracle::random_channel(r, 2, 3);
    const ControlPattern pattern = ControlPattern::matches({0}, {1});
    const ControlledChannel raw = control_channel(pattern, {1, 2}, f, 3);
    const ControlledChannel fixed = control_channel(pattern, {1, 2}, sign_double(f), 3);
    EXPECT_GT(raw.zero_sum_residual(), 1e-3);
    EXPECT_LT(fixed.zero_sum_residual(), 1e-10);
    const Matrix p = ketbra(1), q = ketbra(0);
    const Matrix mean = f.mean_unitary();
    double max_cross = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Matrix a = oracle::random_matrix(r, 2);
        const Matrix b = oracle::random_matrix(r, 4);
        const Matrix fb = oracle::apply(oracle::layers_of(f), b);
        const Matrix block = kron2(p * a * p, fb) + kron2(q * a * q, b);
        const Matrix full = block + kron2(p * a * q, mean * b) + kron2(q * a * p, b * mean.adjoint());
        EXPECT_LT((raw.realized.apply(kron2(a, b)) - full).norm(), 1e-10);
        EXPECT_LT((fixed.realized.apply(kron2(a, b)) - block).norm(), 1e-10);
        max_cross = std::max(max_cross, (raw.realized.apply(kron2(a, b)) - block).norm());
    }
    EXPECT_GT(max_cross, 1e-3);
}

TEST(ControlledExpander, RotatedFrameProjector) {
    Rng r(5);
    const UnitaryMatrix v(haar_unitary(r, 4));
    const ControlPattern pattern = ControlPattern::matches({0}, {0}).conjugated_by(v);
    const Matrix proj = pattern.projector(2);
    const Matrix expect = v.matrix().adjoint() * kron2(ketbra(0), Matrix::Identity(2, 2)) * v.matrix();
    EXPECT_LT((proj - expect).norm(), 1e-12);
    EXPECT_LT((ControlPattern::not_all_zero({0, 1}).projector(2) -
               (Matrix::Identity(4, 4) - kron2(ketbra(0), ketbra(0))))
                  .norm(),
              1e-15);
}

TEST(Thresholds, Examples) {
    const Thresholds t = thresholds(0.99, 0.1 / 8, 0.1, 2);
    EXPECT_NEAR(t.beta, 1.2 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(t.beta, 0.84853, 1e-5);
    EXPECT_LT(t.beta, 0.85);
    EXPECT_NEAR(t.alpha, std::sqrt(1 - 1.6 * 0.0199), 1e-12);
    EXPECT_NEAR(t.alpha, 0.98395, 1e-5);
    EXPECT_GT(t.alpha, 0.98);
    const Thresholds lim = thresholds(1.0, 0.0, 0.0, 3);
    EXPECT_DOUBLE_EQ(lim.alpha, 1.0);
    EXPECT_NEAR(lim.beta, 1 / std::sqrt(2.0), 1e-15);
}

TEST(Thresholds, StrictRefusal) {
    EXPECT_THROW(thresholds(0.7, 0.3, 0.5, 1), InvalidArgument);
    EXPECT_NO_THROW(thresholds(0.7, 0.3, 0.5, 1, false));
    EXPECT_THROW(thresholds(1.5, 0.0, 0.0, 1), InvalidArgument);
}

TEST(BaseExpander, IdentityStageFails) {
    EXPECT_THROW(certify_power(Channel::identity(4), 0.1), Error);
}

TEST(BaseExpander, PowerBound) {
    Rng r(6);
    for (int i = 0; i < 5; ++i) {
        const Channel stage = oracle::random_channel(r, 2, 3);
        const BaseExpander b = certify_power(stage, 0.05);
        EXPECT_LE(b.certified_kappa, std::pow(b.stage_kappa, b.repetitions) + 1e-8);
        EXPECT_LE(b.certified_kappa, 0.05);
        EXPECT_GT(std::pow(b.stage_kappa, b.repetitions - 1), 0.05);
        std::uint64_t degree = 1;
        for (int k = 0; k < b.repetitions; ++k) {
            degree = degree > ~std::uint64_t{0} / 3 ? ~std::uint64_t{0} : degree * 3;
        }
        EXPECT_EQ(b.channel.degree(), degree);
    }
}

TEST(BaseExpander, FourQubitsSeedSevenCertified) {
    const BaseExpander &b = base4();
    EXPECT_LE(b.certified_kappa, 0.1);
    EXPECT_NEAR(oracle::kappa(b.channel), b.certified_kappa, 1e-8);
    EXPECT_EQ(b.channel.degree(), static_cast<std::uint64_t>(std::pow(4.0, b.repetitions)));
    const BaseExpander again = build_base_expander(4, 0.1, 4, 7);
    EXPECT_EQ(again.certified_kappa, b.certified_kappa);
}

TEST(Verifiers, AcceptanceProbabilities) {
    const RegisterLayout l(2, 2);
    const UnitaryMatrix yes = simulate_unitary(toy_yes_verifier(l));
    const UnitaryMatrix no = simulate_unitary(toy_no_verifier(l));
    Vector ones = Vector::Zero(4);
    ones(3) = 1.0;
    EXPECT_NEAR(acceptance_probability(yes, l, ones), 1.0, 1e-15);
    const auto [pmax_yes, arg] = max_acceptance(yes, l);
    EXPECT_NEAR(pmax_yes, 1.0, 1e-12);
    EXPECT_NEAR(std::abs(arg(3)), 1.0, 1e-12);
    EXPECT_NEAR(max_acceptance(no, l).first, 0.0, 1e-12);
    for (int k = 0; k < 3; ++k) {
        Vector w = Vector::Zero(4);
        w(k) = 1.0;
        EXPECT_NEAR(acceptance_probability(yes, l, w), 0.0, 1e-15);
    }
    // The best witness for the noisy YES verifier is a superposition that
    // pre-rotates the top qubit, so only the |11> acceptance is pinned.
    const UnitaryMatrix noisy_yes = simulate_unitary(noisy_yes_verifier(l, 0.01));
    EXPECT_NEAR(acceptance_probability(noisy_yes, l, ones), 0.99, 1e-12);
    EXPECT_GE(max_acceptance(noisy_yes, l).first, 0.99 - 1e-12);
    EXPECT_NEAR(max_acceptance(simulate_unitary(noisy_no_verifier(l, 0.01)), l).first, 0.01, 1e-12);
    EXPECT_THROW(toy_yes_verifier(RegisterLayout(2, 0)), InvalidArgument);
}

TEST(Verifiers, ToyYesMapsAcceptedWitnessToItself) {
    const UnitaryMatrix yes = simulate_unitary(toy_yes_verifier(RegisterLayout(2, 2)));
    Vector in = Vector::Zero(16);
    in(12) = 1.0;  // |11>|00>
    EXPECT_LT((yes.matrix() * in - in).norm(), 1e-15);
}

TEST(Reduction, DegreeUnitalityAndStrictChecks) {
    const RegisterLayout l(2, 2);
    const Reduction red = reduce(toy_no_verifier(l), 1.0, 0.0);
    EXPECT_EQ(red.channel.qubits(), 5);
    EXPECT_EQ(red.channel.degree(), 64 * red.base_degree);
    EXPECT_EQ(red.base_degree, 2 * base4().channel.degree());
    EXPECT_TRUE(red.channel.is_regular());
    EXPECT_LT((red.channel.apply(Matrix::Identity(32, 32)) - Matrix::Identity(32, 32)).norm(), 1e-10);
    EXPECT_THROW(reduce(toy_no_verifier(l), 0.95, 0.0), InvalidArgument);
    EXPECT_THROW(reduce(toy_no_verifier(l), 1.0, 0.02), InvalidArgument);
    EXPECT_THROW(reduce(toy_no_verifier(RegisterLayout(1, 2)), 1.0, 0.0), DimensionError);
}

TEST(Reduction, DoubleVerifierPinching) {
    Rng r(7);
    const RegisterLayout l(2, 2);
    GateCircuit v(4);
    v.add(multi_controlled(UnitaryMatrix(haar_unitary(r, 16)), {0, 1, 2, 3}, {}, {}));
    const Reduction red = reduce(v, 1.0, 0.0, false);
    const Channel fwfa = compose(red.witness_verifier.realized, red.ancilla_verifier.realized);
    const VerifierProjectors pr = verifier_projectors(simulate_unitary(v), l);
    const Matrix q = pr.q_w * pr.q_a;
    for (int i = 0; i < 10; ++i) {
        std::vector<Matrix> parts;
        Matrix input = Matrix::Zero(32, 32);
        for (int k = 0; k < 4; ++k) {
            parts.push_back(k == 0 ? oracle::random_traceless(r, 16) : oracle::random_matrix(r, 16));
            input += kron2(parts[k], pauli(k));
        }
        const Matrix a0 = parts[0];
        const Matrix ga = pr.p_a * a0 * pr.p_a + pr.q_a * a0 * pr.q_a;
        const Matrix c = pr.p_w * ga * pr.p_w + pr.q_w * ga * pr.q_w;
        Matrix expect = kron2(c, Matrix::Identity(2, 2));
        for (int k = 1; k < 4; ++k) {
            expect += kron2(q * parts[k] * q.adjoint(), pauli(k));
        }
        EXPECT_LT((fwfa.apply(input) - expect).norm(), 1e-10);
        EXPECT_LT(std::abs(c.trace() - a0.trace()), 1e-10);
        EXPECT_LE(oracle::frob(c), oracle::frob(a0) + 1e-10);
        EXPECT_LE(oracle::frob(a0), oracle::frob(input) / std::sqrt(2.0) + 1e-10);
    }
}

TEST(Reduction, NoCaseBound) {
    Rng r(8);
    const RegisterLayout l(2, 2);
    const Reduction red = reduce(toy_no_verifier(l), 1.0, 0.0);
    for (int i = 0; i < 200; ++i) {
        const Matrix a = oracle::random_traceless(r, 32);
        ASSERT_LE(oracle::frob(red.channel.apply(a)), red.thresholds.beta * oracle::frob(a));
    }
    const double kappa = spectral_gap(red.channel).kappa;
    EXPECT_LE(kappa, (1 + base4().certified_kappa) / std::sqrt(2.0) + 1e-8);
    EXPECT_LT(kappa, red.thresholds.beta);
}

TEST(Reduction, YesCaseFixedPointAndWitness) {
    const RegisterLayout l(2, 2);
    const Reduction red = reduce(toy_yes_verifier(l), 1.0, 0.0);
    Vector psi = Vector::Zero(4);
    psi(3) = 1.0;
    const Operator a = yes_witness(l, psi);
    const Matrix big_psi = a + Matrix::Identity(32, 32) / 32.0;
    EXPECT_LT((red.channel.apply(big_psi) - big_psi).norm(), 1e-12);
    EXPECT_NEAR((a.adjoint() * a).trace().real(), 0.96875, 1e-15);
    EXPECT_EQ(a.trace(), cdouble(0.0));
    EXPECT_GE(oracle::frob(red.channel.apply(a)), (1 - 1e-9) * oracle::frob(a));
    EXPECT_THROW(yes_witness(l, Vector::Ones(4)), InvalidArgument);
}

TEST(Reduction, NoisyYesNotAlphaContractive) {
    const RegisterLayout l(2, 2);
    const double eps = 0.005;
    const Reduction red = reduce(noisy_yes_verifier(l, eps), 1 - eps, eps);
    Vector psi = Vector::Zero(4);
    psi(3) = 1.0;
    const Operator a = yes_witness(l, psi);
    EXPECT_GT(oracle::frob(red.channel.apply(a)), red.thresholds.alpha * oracle::frob(a));
}

TEST(Reduction, NoisyNoContractive) {
    Rng r(9);
    const RegisterLayout l(2, 2);
    const double eps = 0.005;
    const Reduction red = reduce(noisy_no_verifier(l, eps), 1 - eps, eps);
    for (int i = 0; i < 50; ++i) {
        const Matrix a = oracle::random_traceless(r, 32);
        ASSERT_LE(oracle::frob(red.channel.apply(a)), red.thresholds.beta * oracle::frob(a));
    }
}
