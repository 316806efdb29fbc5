#include "qexp/thermal.hpp"

#include "qexp/errors.hpp"
#include "qexp/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qexp {

bool is_adjoint_closed(const std::vector<UnitaryMatrix> &unitaries, double tol) {
    for (const auto &u : unitaries) {
        const Matrix ud = u.matrix().adjoint();
        bool found = false;
        for (const auto &v : unitaries) {
            const cdouble overlap = (v.matrix().adjoint() * ud).trace();
            if (std::abs(overlap) == 0.0) {
                continue;
            }
            const cdouble phase = overlap / std::abs(overlap);
            if ((ud - phase * v.matrix()).norm() <= tol) {
                found = true;
                break;
            }
        }
        if (!found) {
            return false;
        }
    }
    return true;
}

namespace {

Channel thermal_channel(const std::vector<UnitaryMatrix> &unitaries, double r0, double r1) {
    const double denom = (r0 + r1) * static_cast<double>(unitaries.size());
    KrausLayer layer;
    for (const auto &u : unitaries) {
        layer.push_back({r0 / denom, u});
    }
    for (const auto &u : unitaries) {
        layer.push_back({r1 / denom, u.adjoint()});
    }
    return Channel(std::move(layer));
}

}  // namespace

ThermalModel::ThermalModel(std::vector<UnitaryMatrix> unitaries, double r0, double r1)
    : unitaries_(std::move(unitaries)),
      r0_(r0),
      r1_(r1),
      channel_((unitaries_.empty() || !(r0 > 0.0) || !(r1 > 0.0))
                   ? throw InvalidArgument("thermal model needs unitaries and positive rates R0, R1")
                   : thermal_channel(unitaries_, r0, r1)),
      adjoint_closed_(is_adjoint_closed(unitaries_)) {}

double ThermalModel::rate() const {
    return (r0_ + r1_) * static_cast<double>(unitaries_.size());
}

Matrix ThermalModel::generator(std::size_t cap) const {
    const Matrix w = build_w(channel_, cap);
    return rate() * (w - Matrix::Identity(w.rows(), w.cols()));
}

Operator ThermalModel::apply_generator(const Operator &x) const {
    return rate() * (channel_.apply(x) - x);
}

namespace {

void check_density(const Operator &rho, Eigen::Index dim) {
    if (rho.rows() != dim || rho.cols() != dim) {
        throw DimensionError("initial state has the wrong dimension");
    }
    if (!is_hermitian(rho, 1e-9)) {
        throw InvalidArgument("initial state is not Hermitian");
    }
    if (std::abs(rho.trace() - cdouble(1.0)) > 1e-9) {
        throw InvalidArgument("initial state does not have unit trace");
    }
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) {
        throw InvalidArgument("initial state is not positive semidefinite");
    }
}

void check_times(const std::vector<double> &times) {
    double previous = 0.0;
    for (double t : times) {
        if (!(t >= previous) || !std::isfinite(t)) {
            throw InvalidArgument("times must be finite, nonnegative and nondecreasing");
        }
        previous = t;
    }
}

// exp(h L) x by a truncated Taylor series, with steps of at most 1/(2 rate).
Operator series_step(const ThermalModel &model, const Operator &x, double dt, double tol) {
    if (dt == 0.0) {
        return x;
    }
    const double max_step = 0.5 / model.rate();
    const int steps = std::max(1, static_cast<int>(std::ceil(dt / max_step)));
    const double h = dt / steps;
    Operator state = x;
    for (int s = 0; s < steps; ++s) {
        Operator term = state;
        Operator sum = state;
        for (int k = 1; k < 200; ++k) {
            term = (h / k) * model.apply_generator(term);
            sum += term;
            if (term.norm() <= tol * std::max(sum.norm(), std::numeric_limits<double>::min())) {
                break;
            }
        }
        state = std::move(sum);
    }
    return state;
}

}  // namespace

Trajectory evolve(const ThermalModel &model, const Operator &rho0, const std::vector<double> &times,
                  const EvolveOptions &options) {
    const auto n = model.dim();
    check_density(rho0, n);
    check_times(times);

    bool dense = options.method == EvolutionMethod::dense;
    if (options.method == EvolutionMethod::automatic) {
        dense = n <= options.dense_max_dim;
    }

    const Operator mixed = Operator::Identity(n, n) / static_cast<double>(n);
    Trajectory out;
    out.times = times;
    if (dense) {
        const Matrix gen = model.generator();
        const Vector v0 = vec(rho0).amplitudes();
        for (double t : times) {
            Operator rho = rho0;
            if (t > 0.0) {
                const Matrix propagator = (t * gen).exp();
                rho = VectorizedState(propagator * v0).to_operator();
            }
            out.residuals.push_back((rho - mixed).norm());
            out.states.push_back(std::move(rho));
        }
        return out;
    }

    Operator rho = rho0;
    double current = 0.0;
    for (double t : times) {
        rho = series_step(model, rho, t - current, options.series_tol);
        current = t;
        out.residuals.push_back((rho - mixed).norm());
        out.states.push_back(rho);
    }
    return out;
}

DecayReport decay_bound_check(const ThermalModel &model, const Operator &rho0, const std::vector<double> &times,
                              const EvolveOptions &options) {
    DecayReport report;
    report.kappa = spectral_gap(model.channel()).kappa;
    report.rate = model.rate();
    const Trajectory traj = evolve(model, rho0, times, options);
    const double initial = (rho0 - Operator::Identity(rho0.rows(), rho0.cols()) / static_cast<double>(rho0.rows())).norm();
    report.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double bound = std::exp(-times[k] * report.rate * (1.0 - report.kappa)) * initial;
        report.rows.push_back({times[k], traj.residuals[k], bound});
        report.worst_margin = std::min(report.worst_margin, bound + kDecayTol - traj.residuals[k]);
    }
    report.holds = report.worst_margin >= 0.0;
    return report;
}

}  // namespace qexp
