#include "qexp/channel.hpp"

#include "qexp/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qexp {

namespace {

constexpr double kWeightTol = 1e-12;

void check_layer(const KrausLayer &layer, Eigen::Index dim) {
    if (layer.empty()) {
        throw InvalidArgument("channel layer has no Kraus operators");
    }
    double total = 0.0;
    for (const auto &term : layer) {
        if (term.unitary.dim() != dim) {
            throw DimensionError("Kraus operators of mixed dimension " + std::to_string(term.unitary.dim()) +
                                 " and " + std::to_string(dim));
        }
        if (!(term.weight >= 0.0)) {
            throw InvalidArgument("Kraus weights must be nonnegative");
        }
        total += term.weight;
    }
    if (std::abs(total - 1.0) > kWeightTol) {
        throw InvalidArgument("Kraus weights sum to " + std::to_string(total) + ", expected 1");
    }
    Matrix image = Matrix::Zero(dim, dim);
    for (const auto &term : layer) {
        image.noalias() += term.weight * (term.unitary.matrix() * term.unitary.matrix().adjoint());
    }
    if ((image - Matrix::Identity(dim, dim)).norm() > kDefaultTol) {
        throw InvalidArgument("channel is not unital");
    }
}

Operator apply_layer(const KrausLayer &layer, const Operator &a) {
    Operator out = Operator::Zero(a.rows(), a.cols());
    Matrix tmp(a.rows(), a.cols());
    for (const auto &term : layer) {
        const Matrix &u = term.unitary.matrix();
        tmp.noalias() = u * a;
        out.noalias() += term.weight * (tmp * u.adjoint());
    }
    return out;
}

}  // namespace

Operator identity_operator(Eigen::Index dim) {
    return Operator::Identity(dim, dim);
}

bool is_hermitian(const Operator &a, double tol) {
    if (a.rows() != a.cols()) {
        return false;
    }
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Operator traceless_part(const Operator &a) {
    const auto n = a.rows();
    return a - (a.trace() / static_cast<double>(n)) * Operator::Identity(n, n);
}

// --- UnitaryMatrix -------------------------------------------------------

UnitaryMatrix::UnitaryMatrix(Matrix m, double tol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw DimensionError("unitary must be a nonempty square matrix");
    }
    const auto n = m_.rows();
    if (tol < 0.0) {
        tol = kDefaultTol * static_cast<double>(n);
    }
    const double err = (m_.adjoint() * m_ - Matrix::Identity(n, n)).norm();
    if (!(err <= tol)) {
        throw InvalidArgument("matrix is not unitary: ||U^dag U - I||_F = " + std::to_string(err));
    }
}

UnitaryMatrix UnitaryMatrix::identity(Eigen::Index dim) {
    return UnitaryMatrix(Matrix::Identity(dim, dim), Trusted{});
}

UnitaryMatrix UnitaryMatrix::adjoint() const {
    return UnitaryMatrix(m_.adjoint(), Trusted{});
}

UnitaryMatrix UnitaryMatrix::conjugate() const {
    return UnitaryMatrix(m_.conjugate(), Trusted{});
}

UnitaryMatrix UnitaryMatrix::operator*(const UnitaryMatrix &rhs) const {
    if (dim() != rhs.dim()) {
        throw DimensionError("unitary product dimension mismatch");
    }
    return UnitaryMatrix(m_ * rhs.m_, Trusted{});
}

UnitaryMatrix UnitaryMatrix::operator-() const {
    return UnitaryMatrix(-m_, Trusted{});
}

// --- VectorizedState -----------------------------------------------------

VectorizedState::VectorizedState(Vector amplitudes) : amps_(std::move(amplitudes)) {
    const auto len = amps_.size();
    auto side = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(len))));
    if (len == 0 || side * side != len) {
        throw ParseError("vectorized state length " + std::to_string(len) + " is not a nonzero perfect square");
    }
    dim_ = side;
}

VectorizedState VectorizedState::from_operator(const Operator &a) {
    if (a.rows() != a.cols()) {
        throw DimensionError("only square operators can be vectorized");
    }
    const auto n = a.rows();
    Vector v(n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            v(i * n + j) = a(i, j);
        }
    }
    return VectorizedState(std::move(v));
}

VectorizedState VectorizedState::maximally_entangled(Eigen::Index dim) {
    Vector v = Vector::Zero(dim * dim);
    const double s = 1.0 / std::sqrt(static_cast<double>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
        v(i * dim + i) = s;
    }
    return VectorizedState(std::move(v));
}

Operator VectorizedState::to_operator() const {
    Operator a(dim_, dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) {
        for (Eigen::Index j = 0; j < dim_; ++j) {
            a(i, j) = amps_(i * dim_ + j);
        }
    }
    return a;
}

VectorizedState VectorizedState::normalized() const {
    const double n = norm();
    if (n == 0.0) {
        throw InvalidArgument("cannot normalize the zero vector");
    }
    return VectorizedState(amps_ / n);
}

VectorizedState vec(const Operator &a) {
    return VectorizedState::from_operator(a);
}

Operator unvec(const VectorizedState &v) {
    return v.to_operator();
}

// --- Channel -------------------------------------------------------------

Channel::Channel(KrausLayer kraus) : Channel(std::vector<KrausLayer>{std::move(kraus)}) {}

Channel::Channel(std::vector<KrausLayer> layers) : layers_(std::move(layers)) {
    if (layers_.empty() || layers_.front().empty()) {
        throw InvalidArgument("channel needs at least one Kraus operator");
    }
    dim_ = layers_.front().front().unitary.dim();
    for (const auto &layer : layers_) {
        check_layer(layer, dim_);
    }
}

Channel Channel::uniform(const std::vector<UnitaryMatrix> &unitaries) {
    if (unitaries.empty()) {
        throw InvalidArgument("channel needs at least one Kraus operator");
    }
    const double w = 1.0 / static_cast<double>(unitaries.size());
    KrausLayer layer;
    layer.reserve(unitaries.size());
    for (const auto &u : unitaries) {
        layer.push_back({w, u});
    }
    return Channel(std::move(layer));
}

Channel Channel::identity(Eigen::Index dim) {
    return Channel(KrausLayer{{1.0, UnitaryMatrix::identity(dim)}});
}

Channel Channel::complete_depolarizer(int qubits) {
    if (qubits < 1) {
        throw InvalidArgument("depolarizer needs at least one qubit");
    }
    std::vector<UnitaryMatrix> paulis;
    for (int p = 0; p < 4; ++p) {
        paulis.emplace_back(pauli(p));
    }
    Channel out = Channel::uniform(paulis);
    for (int q = 1; q < qubits; ++q) {
        out = tensor(out, Channel::uniform(paulis));
    }
    return out;
}

int Channel::qubits() const {
    return log2_exact(static_cast<std::size_t>(dim_));
}

std::uint64_t Channel::degree() const {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t d = 1;
    for (const auto &layer : layers_) {
        const auto n = static_cast<std::uint64_t>(layer.size());
        if (d > kMax / n) {
            return kMax;
        }
        d *= n;
    }
    return d;
}

bool Channel::is_regular(double tol) const {
    for (const auto &layer : layers_) {
        const double expected = 1.0 / static_cast<double>(layer.size());
        for (const auto &term : layer) {
            if (std::abs(term.weight - expected) > tol) {
                return false;
            }
        }
    }
    return true;
}

KrausLayer Channel::kraus(std::uint64_t limit) const {
    if (degree() > limit) {
        throw CapExceeded("channel has " + std::to_string(degree()) + " Kraus operators, more than the limit " +
                          std::to_string(limit));
    }
    KrausLayer out = layers_.front();
    for (std::size_t l = 1; l < layers_.size(); ++l) {
        KrausLayer next;
        next.reserve(out.size() * layers_[l].size());
        for (const auto &prev : out) {
            for (const auto &term : layers_[l]) {
                next.push_back({prev.weight * term.weight, term.unitary * prev.unitary});
            }
        }
        out = std::move(next);
    }
    return out;
}

Operator Channel::apply(const Operator &a) const {
    if (a.rows() != dim_ || a.cols() != dim_) {
        throw DimensionError("operator of size " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " applied to a channel of dimension " + std::to_string(dim_));
    }
    Operator out = a;
    for (const auto &layer : layers_) {
        out = apply_layer(layer, out);
    }
    return out;
}

Matrix Channel::mean_unitary() const {
    Matrix total = Matrix::Identity(dim_, dim_);
    for (const auto &layer : layers_) {
        Matrix mean = Matrix::Zero(dim_, dim_);
        for (const auto &term : layer) {
            mean += term.weight * term.unitary.matrix();
        }
        total = mean * total;
    }
    return total;
}

Operator apply(const Channel &channel, const Operator &a) {
    return channel.apply(a);
}

Channel compose(const Channel &second, const Channel &first) {
    if (second.dim() != first.dim()) {
        throw DimensionError("cannot compose channels of dimension " + std::to_string(second.dim()) + " and " +
                             std::to_string(first.dim()));
    }
    std::vector<KrausLayer> layers = first.layers();
    layers.insert(layers.end(), second.layers().begin(), second.layers().end());
    return Channel(std::move(layers));
}

Channel power(const Channel &channel, int r) {
    if (r < 1) {
        throw InvalidArgument("channel power must be positive");
    }
    std::vector<KrausLayer> layers;
    for (int k = 0; k < r; ++k) {
        layers.insert(layers.end(), channel.layers().begin(), channel.layers().end());
    }
    return Channel(std::move(layers));
}

Channel tensor(const Channel &a, const Channel &b) {
    const Matrix ia = Matrix::Identity(a.dim(), a.dim());
    const Matrix ib = Matrix::Identity(b.dim(), b.dim());
    std::vector<KrausLayer> layers;
    for (const auto &layer : a.layers()) {
        KrausLayer lifted;
        for (const auto &term : layer) {
            lifted.push_back({term.weight, UnitaryMatrix(kron(term.unitary.matrix(), ib))});
        }
        layers.push_back(std::move(lifted));
    }
    for (const auto &layer : b.layers()) {
        KrausLayer lifted;
        for (const auto &term : layer) {
            lifted.push_back({term.weight, UnitaryMatrix(kron(ia, term.unitary.matrix()))});
        }
        layers.push_back(std::move(lifted));
    }
    return Channel(std::move(layers));
}

Channel adjoint_set(const Channel &channel) {
    std::vector<KrausLayer> layers;
    for (auto it = channel.layers().rbegin(); it != channel.layers().rend(); ++it) {
        KrausLayer adj;
        for (const auto &term : *it) {
            adj.push_back({term.weight, term.unitary.adjoint()});
        }
        layers.push_back(std::move(adj));
    }
    return Channel(std::move(layers));
}

KrausLayer normalize_weights(KrausLayer layer) {
    double total = 0.0;
    for (const auto &term : layer) {
        total += term.weight;
    }
    if (!(total > 0.0)) {
        throw InvalidArgument("Kraus weights must have a positive sum");
    }
    for (auto &term : layer) {
        term.weight /= total;
    }
    return layer;
}

}  // namespace qexp
