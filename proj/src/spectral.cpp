#include "qexp/spectral.hpp"

#include "qexp/errors.hpp"
#include "qexp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qexp {

std::string_view to_string(GapMethod method) {
    return method == GapMethod::dense ? "dense" : "iterative";
}

std::string_view to_string(Decision decision) {
    switch (decision) {
        case Decision::yes:
            return "YES";
        case Decision::no:
            return "NO";
        case Decision::promise_violated:
            return "PROMISE_VIOLATED";
    }
    return "?";
}

namespace {

void check_cap(const Channel &channel, std::size_t cap) {
    const auto rows = static_cast<std::size_t>(channel.dim()) * static_cast<std::size_t>(channel.dim());
    if (rows > cap) {
        throw CapExceeded("superoperator has " + std::to_string(rows) + " rows, over the dense cap " +
                          std::to_string(cap) + "; use the iterative method");
    }
}

// Removes the |phi> component, i.e. the trace part.
void project_traceless(Vector &v, Eigen::Index n) {
    cdouble tr = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        tr += v(i * n + i);
    }
    tr /= static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i * n + i) -= tr;
    }
}

// A fixed traceless unit direction, vec(|0><1|).
Vector fallback_direction(Eigen::Index n) {
    Vector v = Vector::Zero(n * n);
    v(n > 1 ? 1 : 0) = 1.0;
    return v;
}

}  // namespace

Matrix build_w(const Channel &channel, std::size_t cap) {
    check_cap(channel, cap);
    const auto n2 = channel.dim() * channel.dim();
    Matrix w = Matrix::Identity(n2, n2);
    for (const auto &layer : channel.layers()) {
        Matrix lw = Matrix::Zero(n2, n2);
        for (const auto &term : layer) {
            lw += term.weight * kron(term.unitary.matrix(), term.unitary.matrix().conjugate());
        }
        w = lw * w;
    }
    return w;
}

GapReport spectral_gap_dense(const Channel &channel, std::size_t cap) {
    const Matrix w = build_w(channel, cap);
    const auto n = channel.dim();
    const auto n2 = n * n;
    const Vector phi = VectorizedState::maximally_entangled(n).amplitudes();
    const Matrix proj = Matrix::Identity(n2, n2) - phi * phi.adjoint();
    const Matrix pwp = proj * w * proj;

    Eigen::BDCSVD<Matrix> svd(pwp, Eigen::ComputeThinV);
    GapReport report;
    report.method = GapMethod::dense;
    report.kappa = svd.singularValues()(0);
    report.gap = 1.0 - report.kappa;

    Vector v = svd.matrixV().col(0);
    project_traceless(v, n);
    if (v.norm() < 0.5) {
        // Only possible when kappa = 0, where every traceless direction attains it.
        v = fallback_direction(n);
    }
    v /= v.norm();
    report.witness = VectorizedState(v);
    const Vector mv = pwp.adjoint() * (pwp * v);
    report.residual = (mv - report.kappa * report.kappa * v).norm();
    report.iterations = 0;
    report.converged = true;
    return report;
}

GapReport spectral_gap_iterative(const Channel &channel, const IterativeOptions &options) {
    if (!(options.tol > 0.0)) {
        throw InvalidArgument("iterative tolerance must be positive");
    }
    const auto n = channel.dim();
    const Channel adjoint = adjoint_set(channel);
    const Rng root(options.seed);

    GapReport best;
    best.method = GapMethod::iterative;
    best.kappa = -1.0;
    int total_iterations = 0;
    bool all_converged = true;

    for (int restart = 0; restart < std::max(1, options.restarts); ++restart) {
        Rng rng = root.split(static_cast<std::uint64_t>(restart));
        Operator a = traceless_part(ginibre(rng, n, n));
        a /= a.norm();

        double lambda = 0.0;
        double previous = -1.0;
        bool converged = false;
        int iter = 0;
        Operator next;
        while (iter < options.max_iter) {
            ++iter;
            const Operator image = channel.apply(a);
            lambda = image.squaredNorm();
            next = traceless_part(adjoint.apply(image));
            const double change = std::abs(lambda - previous);
            if (iter >= options.min_iter &&
                (change <= options.tol * std::max(lambda, 0.0) || lambda <= 1e-24)) {
                converged = true;
                break;
            }
            previous = lambda;
            const double nn = next.norm();
            if (nn == 0.0) {
                // The map annihilates the current direction, so kappa restricted to it is 0.
                converged = true;
                break;
            }
            a = next / nn;
        }
        total_iterations += iter;
        all_converged = all_converged && converged;

        const double kappa = std::sqrt(std::max(lambda, 0.0));
        if (kappa > best.kappa) {
            best.kappa = kappa;
            Vector v = vec(a).amplitudes();
            best.witness = VectorizedState(v);
            // next = Pi Phi^dag Phi (a), the operator applied to the witness.
            best.residual = (next - lambda * a).norm();
        }
    }
    best.gap = 1.0 - best.kappa;
    best.iterations = total_iterations;
    best.converged = all_converged;
    return best;
}

GapReport spectral_gap_iterative(const Channel &channel, double tol, int max_iter, std::uint64_t seed) {
    IterativeOptions options;
    options.tol = tol;
    options.max_iter = max_iter;
    options.seed = seed;
    return spectral_gap_iterative(channel, options);
}

GapReport spectral_gap(const Channel &channel, std::size_t cap) {
    const auto rows = static_cast<std::size_t>(channel.dim()) * static_cast<std::size_t>(channel.dim());
    if (rows <= cap) {
        return spectral_gap_dense(channel, cap);
    }
    return spectral_gap_iterative(channel, IterativeOptions{});
}

NonExpanderInstance::NonExpanderInstance(Channel channel, double alpha, double beta, std::optional<double> separation)
    : channel_(std::move(channel)), alpha_(alpha), beta_(beta), separation_(separation.value_or(alpha - beta)) {
    if (!(alpha_ > beta_)) {
        throw InvalidArgument("instance requires alpha > beta");
    }
    if (!(separation_ > 0.0) || alpha_ - beta_ < separation_ - 1e-15) {
        throw InvalidArgument("instance requires alpha - beta >= separation > 0");
    }
}

Decision classify(double kappa, double alpha, double beta, double tol) {
    if (kappa > alpha + tol) {
        return Decision::yes;
    }
    if (kappa <= beta + tol) {
        return Decision::no;
    }
    return Decision::promise_violated;
}

Decision decide(const NonExpanderInstance &instance, std::size_t cap) {
    const GapReport report = spectral_gap(instance.channel(), cap);
    return classify(report.kappa, instance.alpha(), instance.beta());
}

}  // namespace qexp
