#pragma once

// Dense operators, unitaries and unital mixed-unitary channels.
//
// Vectorization is row-major: amplitude (i * N + j) of vec(A) is a_ij, i.e.
// |i> (x) |j> <-> a_ij. With this convention vec(U A V) = (U (x) V^T) vec(A),
// so a channel with Kraus terms {w_d, U_d} acts on vectors as
// W = sum_d w_d U_d (x) conj(U_d).

#include "qexp/linalg.hpp"

#include <cstdint>
#include <vector>

namespace qexp {

using Operator = Matrix;

Operator identity_operator(Eigen::Index dim);

bool is_hermitian(const Operator &a, double tol = 1e-12);

// Traceless part A - tr(A) I / N.
Operator traceless_part(const Operator &a);

class UnitaryMatrix {
public:
    // Throws InvalidArgument when ||U^dag U - I||_F > tol (default 1e-10 * N).
    explicit UnitaryMatrix(Matrix m, double tol = -1.0);

    static UnitaryMatrix identity(Eigen::Index dim);

    const Matrix &matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

    UnitaryMatrix adjoint() const;
    UnitaryMatrix conjugate() const;
    UnitaryMatrix operator*(const UnitaryMatrix &rhs) const;
    UnitaryMatrix operator-() const;

private:
    struct Trusted {};
    UnitaryMatrix(Matrix m, Trusted) : m_(std::move(m)) {}

    Matrix m_;
};

class VectorizedState {
public:
    // Throws ParseError if the length is not a perfect square.
    explicit VectorizedState(Vector amplitudes);

    static VectorizedState from_operator(const Operator &a);
    // |phi> = (1/sqrt N) sum_i |i>|i>.
    static VectorizedState maximally_entangled(Eigen::Index dim);

    Operator to_operator() const;

    // Side length N of the encoded N x N matrix.
    Eigen::Index dim() const { return dim_; }
    const Vector &amplitudes() const { return amps_; }
    double norm() const { return amps_.norm(); }
    VectorizedState normalized() const;

private:
    Vector amps_;
    Eigen::Index dim_;
};

VectorizedState vec(const Operator &a);
Operator unvec(const VectorizedState &v);

struct KrausTerm {
    double weight;
    UnitaryMatrix unitary;
};

using KrausLayer = std::vector<KrausTerm>;

// A unital channel given as a composition of weighted unitary mixtures.
//
// Each layer is a mixture rho -> sum_d w_d U_d rho U_d^dag with weights
// summing to one; layers are applied in order. The effective Kraus set is
// the set of ordered products over layers with product weights, so a
// single-layer channel is the plain weighted Kraus form and composition
// never multiplies out exponentially many products. kraus() materializes
// the products on demand.
class Channel {
public:
    explicit Channel(KrausLayer kraus);
    explicit Channel(std::vector<KrausLayer> layers);

    static Channel uniform(const std::vector<UnitaryMatrix> &unitaries);
    static Channel identity(Eigen::Index dim);
    // {I, X, Y, Z} with weight 1/4 each, tensored over every qubit.
    static Channel complete_depolarizer(int qubits);

    Eigen::Index dim() const { return dim_; }
    int qubits() const;
    const std::vector<KrausLayer> &layers() const { return layers_; }

    // Number of effective Kraus operators, saturating at UINT64_MAX.
    std::uint64_t degree() const;
    // True iff every effective weight equals 1 / degree().
    bool is_regular(double tol = 1e-12) const;

    // Flattened Kraus set. Throws CapExceeded if degree() > limit.
    KrausLayer kraus(std::uint64_t limit = std::uint64_t{1} << 16) const;

    Operator apply(const Operator &a) const;

    // sum_d w_d U_d over the effective Kraus set.
    Matrix mean_unitary() const;

private:
    Eigen::Index dim_ = 0;
    std::vector<KrausLayer> layers_;
};

Operator apply(const Channel &channel, const Operator &a);

// compose(second, first)(A) = second(first(A)).
Channel compose(const Channel &second, const Channel &first);
Channel power(const Channel &channel, int r);
Channel tensor(const Channel &a, const Channel &b);
// Channel with every Kraus element replaced by its adjoint; layers reversed
// so that this is the Hilbert-Schmidt adjoint map.
Channel adjoint_set(const Channel &channel);

// Scales the weights of each layer to sum to one. Useful for file input.
KrausLayer normalize_weights(KrausLayer layer);

}  // namespace qexp
