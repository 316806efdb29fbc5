#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace qexp {

using cdouble = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Default absolute tolerance on Frobenius norms.
inline constexpr double kDefaultTol = 1e-10;

// Dense paths refuse superoperators with more than this many rows (N^2).
inline constexpr std::size_t kDefaultDenseCap = std::size_t{1} << 14;

Matrix kron(const Matrix &a, const Matrix &b);

// Single-qubit Paulis: index 0..3 -> I, X, Y, Z.
Matrix pauli(int index);

Matrix hadamard();

double frobenius(const Matrix &a);

bool is_power_of_two(std::size_t n);

// log2 of a power of two.
int log2_exact(std::size_t n);

}  // namespace qexp
