#pragma once

#include "qexp/linalg.hpp"

#include <cstdint>

namespace qexp {

// Splittable counter-based generator.
//
// A stream is identified by a 64-bit key. The k-th draw of a stream is
// mix(key + k * golden_gamma), where mix is the SplitMix64 finalizer, so
// draws never depend on any state other than (key, k). split(tag) derives
// the key of an independent child stream as mix(key ^ mix(tag + gamma)).
// Every random choice in the library is made from a stream derived from one
// user-supplied 64-bit seed by a fixed sequence of splits.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : key_(mix(seed)) {}

    Rng split(std::uint64_t tag) const { return Rng(key_ ^ mix(tag + kGamma), Raw{}); }

    std::uint64_t next() { return mix(key_ + (++counter_) * kGamma); }
    std::uint64_t operator()() { return next(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Standard normal via Box-Muller (one draw per call, no cached pair).
    double normal();
    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    struct Raw {};
    Rng(std::uint64_t key, Raw) : key_(key) {}

    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Matrix of i.i.d. standard complex Gaussians (real and imaginary parts each N(0, 1/2)).
Matrix ginibre(Rng &rng, Eigen::Index rows, Eigen::Index cols);

// Haar-random unitary via QR of a Ginibre matrix with the R-diagonal phases removed.
Matrix haar_unitary(Rng &rng, Eigen::Index dim);

// Uniformly random unit vector.
Vector random_unit_vector(Rng &rng, Eigen::Index dim);

}  // namespace qexp
