#pragma once

// Arthur's verifier for the non-expander problem: check that the witness
// |psi_A> is orthogonal to |phi> (A traceless), then estimate
// <psi_A|W^dag W|psi_A> = ||Phi(A)||_F^2 from Hadamard tests on
// V_{d,e} = (U_d^dag (x) U_d^T)(U_e (x) conj(U_e)):
//   <psi|W^dag W|psi> = 1/D + (2/D^2) sum_{d<e} Re <psi|V_{d,e}|psi>.

#include "qexp/rng.hpp"
#include "qexp/spectral.hpp"

#include <cstdint>

namespace qexp {

// Shot count meaning "infinitely many": exact probabilities, no sampling.
inline constexpr std::uint64_t kExactShots = 0;

// Acceptance margin in standard errors below alpha^2.
inline constexpr double kMarginSigmas = 3.0;

struct HadamardTestSpec {
    std::size_t d;
    std::size_t e;
    UnitaryMatrix unitary;
};

HadamardTestSpec hadamard_test_spec(const KrausLayer &kraus, std::size_t d, std::size_t e);

// V_{d,e}|psi> without forming the N^2 x N^2 matrix: unvec, conjugate by
// U_d^dag U_e, vec.
Vector apply_v(const Matrix &u_d, const Matrix &u_e, const VectorizedState &psi);

// Pr(0) = (1 + Re<psi|V|psi>) / 2. Throws InvalidArgument unless |psi| = 1 within 1e-9.
double hadamard_test_probability(const UnitaryMatrix &v, const VectorizedState &psi);
double hadamard_test_probability(const Matrix &u_d, const Matrix &u_e, const VectorizedState &psi);

// Fraction of 0 outcomes over Bernoulli(Pr(0)) shots.
double sample_hadamard_test(const UnitaryMatrix &v, const VectorizedState &psi, std::uint64_t shots,
                            std::uint64_t seed);

struct ContractionEstimate {
    double value = 0.0;
    // Worst-case standard error: each pair's estimate of Re<V> has variance <= 1/shots.
    double standard_error = 0.0;
    std::uint64_t samples = 0;
};

// Requires a D-regular channel. shots_per_pair == kExactShots gives the exact value.
ContractionEstimate estimate_contraction(const Channel &channel, const VectorizedState &psi,
                                         std::uint64_t shots_per_pair, Rng rng);
double estimate_contraction_sq(const Channel &channel, const VectorizedState &psi, std::uint64_t shots_per_pair,
                               std::uint64_t seed);

inline constexpr double kOrthogonalityTol = 1e-9;

bool check_orthogonality(const VectorizedState &psi, double tol = kOrthogonalityTol);

struct OrthogonalityOutcome {
    bool passed = false;
    double reject_probability = 0.0;
    // Post-measurement state, projected onto the complement of |phi> and
    // renormalized. Equal to the input when the test rejects.
    VectorizedState state{Vector::Zero(1)};
};

// Projective measurement {|phi><phi|, I - |phi><phi|}; passes on the complement.
OrthogonalityOutcome sample_orthogonality(const VectorizedState &psi, Rng &rng);

struct VerifierOutcome {
    bool accepted = false;
    double estimated_contraction_sq = 0.0;
    bool orthogonality_passed = false;
    std::uint64_t samples_used = 0;
    double confidence = 1.0;
    double standard_error = 0.0;
    double threshold = 0.0;
};

// Accepts iff the orthogonality check passes and the estimate exceeds
// alpha^2 - 3 standard errors (alpha^2 itself in exact mode).
VerifierOutcome arthur_verify(const NonExpanderInstance &instance, const VectorizedState &psi,
                              std::uint64_t shots_per_pair, std::uint64_t seed);

// Honest Merlin: the top traceless singular vector of the channel.
VectorizedState merlin_witness(const Channel &channel);

// ceil(100 / (alpha^2 - beta^2)^2) shots per pair.
std::uint64_t recommended_shots(double alpha, double beta);

}  // namespace qexp
