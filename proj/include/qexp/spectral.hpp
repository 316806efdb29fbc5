#pragma once

// Contraction coefficient kappa of a unital channel on the traceless
// subspace, and the non-expander decision built on it.

#include "qexp/channel.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace qexp {

enum class GapMethod { dense, iterative };

std::string_view to_string(GapMethod method);

struct GapReport {
    double kappa = 0.0;
    double gap = 1.0;
    // Unit-norm traceless direction achieving kappa.
    VectorizedState witness{Vector::Zero(1)};
    GapMethod method = GapMethod::dense;
    int iterations = 0;
    // ||M v - kappa^2 v|| for M = Pi W^dag W Pi and the returned witness v.
    double residual = 0.0;
    bool converged = true;
};

// W = sum_d w_d U_d (x) conj(U_d), multiplied layer by layer.
// Throws CapExceeded if N^2 > cap.
Matrix build_w(const Channel &channel, std::size_t cap = kDefaultDenseCap);

// kappa = largest singular value of Pi W Pi, Pi = I - |phi><phi|.
GapReport spectral_gap_dense(const Channel &channel, std::size_t cap = kDefaultDenseCap);

struct IterativeOptions {
    double tol = 1e-12;
    int max_iter = 100000;
    std::uint64_t seed = 0;
    int restarts = 3;
    int min_iter = 10;
};

// Matrix-free restarted power iteration on Pi W^dag W Pi, using the channel
// and its adjoint. Never throws on non-convergence: check report.converged.
GapReport spectral_gap_iterative(const Channel &channel, const IterativeOptions &options);
GapReport spectral_gap_iterative(const Channel &channel, double tol, int max_iter, std::uint64_t seed);

// Dense when N^2 fits under the cap, iterative otherwise.
GapReport spectral_gap(const Channel &channel, std::size_t cap = kDefaultDenseCap);

class NonExpanderInstance {
public:
    // separation defaults to alpha - beta. Throws InvalidArgument unless
    // alpha > beta and alpha - beta >= separation > 0.
    NonExpanderInstance(Channel channel, double alpha, double beta, std::optional<double> separation = {});

    const Channel &channel() const { return channel_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double separation() const { return separation_; }

private:
    Channel channel_;
    double alpha_;
    double beta_;
    double separation_;
};

enum class Decision { yes, no, promise_violated };

std::string_view to_string(Decision decision);

// Tie tolerance used by classify().
inline constexpr double kDecisionTol = 1e-9;

// YES iff kappa > alpha + tol, NO iff kappa <= beta + tol, otherwise the
// promise is violated.
Decision classify(double kappa, double alpha, double beta, double tol = kDecisionTol);

Decision decide(const NonExpanderInstance &instance, std::size_t cap = kDefaultDenseCap);

}  // namespace qexp
