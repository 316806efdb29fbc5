#include "qexp/linalg.hpp"

#include "qexp/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <bit>
#include <cmath>

namespace qexp {

Matrix kron(const Matrix &a, const Matrix &b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

Matrix pauli(int index) {
    Matrix m = Matrix::Zero(2, 2);
    const cdouble i{0.0, 1.0};
    switch (index) {
        case 0:
            m(0, 0) = 1.0;
            m(1, 1) = 1.0;
            break;
        case 1:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case 2:
            m(0, 1) = -i;
            m(1, 0) = i;
            break;
        case 3:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
        default:
            throw InvalidArgument("pauli index must be in 0..3");
    }
    return m;
}

Matrix hadamard() {
    Matrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return h;
}

double frobenius(const Matrix &a) {
    return a.norm();
}

bool is_power_of_two(std::size_t n) {
    return std::has_single_bit(n);
}

int log2_exact(std::size_t n) {
    if (!is_power_of_two(n)) {
        throw DimensionError("dimension " + std::to_string(n) + " is not a power of two");
    }
    return std::countr_zero(n);
}

}  // namespace qexp
