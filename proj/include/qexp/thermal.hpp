#pragma once

// Open-system relaxation under
//   d rho/dt = R0 sum_a (U_a rho U_a^dag - rho) + R1 sum_a (U_a^dag rho U_a - rho)
//            = (R0 + R1) D (Phi - id)(rho),
// with Phi(rho) = sum_a [R0 U_a rho U_a^dag + R1 U_a^dag rho U_a] / ((R0 + R1) D).
// The traceless part A(t) = rho(t) - I/N obeys
//   ||A(t)||_F <= exp(-t (R0 + R1) D (1 - kappa)) ||A(0)||_F.
//
// R0 and R1 stand for the bath quantities Q0 + Q0* and Q1 + Q1*; they are
// taken as inputs and never derived from bath correlation functions.

#include "qexp/channel.hpp"

#include <vector>

namespace qexp {

// True iff every U in the set has its adjoint in the set up to a global phase.
bool is_adjoint_closed(const std::vector<UnitaryMatrix> &unitaries, double tol = 1e-10);

class ThermalModel {
public:
    ThermalModel(std::vector<UnitaryMatrix> unitaries, double r0, double r1);

    const std::vector<UnitaryMatrix> &unitaries() const { return unitaries_; }
    double r0() const { return r0_; }
    double r1() const { return r1_; }
    std::size_t degree() const { return unitaries_.size(); }
    // (R0 + R1) D.
    double rate() const;
    const Channel &channel() const { return channel_; }
    bool adjoint_closed() const { return adjoint_closed_; }
    Eigen::Index dim() const { return channel_.dim(); }

    // Superoperator rate * (W - I) acting on row-major vec(rho).
    Matrix generator(std::size_t cap = kDefaultDenseCap) const;
    // rate * (Phi(X) - X).
    Operator apply_generator(const Operator &x) const;

private:
    std::vector<UnitaryMatrix> unitaries_;
    double r0_;
    double r1_;
    Channel channel_;
    bool adjoint_closed_;
};

enum class EvolutionMethod { automatic, dense, series };

struct EvolveOptions {
    EvolutionMethod method = EvolutionMethod::automatic;
    // automatic uses the dense exponential up to this Hilbert-space dimension.
    Eigen::Index dense_max_dim = 64;
    double series_tol = 1e-12;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Operator> states;
    // ||rho(t) - I/N||_F.
    std::vector<double> residuals;
};

// Throws InvalidArgument if rho0 is not a density matrix within 1e-9 or the
// times are negative or decreasing.
Trajectory evolve(const ThermalModel &model, const Operator &rho0, const std::vector<double> &times,
                  const EvolveOptions &options = {});

struct DecayRow {
    double t;
    double residual;
    double bound;
};

struct DecayReport {
    double kappa = 1.0;
    double rate = 0.0;
    std::vector<DecayRow> rows;
    // min over rows of (bound + 1e-8 - residual); negative means a violation.
    double worst_margin = 0.0;
    bool holds = true;
};

inline constexpr double kDecayTol = 1e-8;

DecayReport decay_bound_check(const ThermalModel &model, const Operator &rho0, const std::vector<double> &times,
                              const EvolveOptions &options = {});

}  // namespace qexp
