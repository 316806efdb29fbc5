#include "qexp/rng.hpp"

#include <cmath>
#include <numbers>

namespace qexp {

double Rng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix ginibre(Rng &rng, Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    const double s = std::sqrt(0.5);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            m(i, j) = cdouble(s * re, s * im);
        }
    }
    return m;
}

Matrix haar_unitary(Rng &rng, Eigen::Index dim) {
    const Matrix z = ginibre(rng, dim, dim);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double mag = std::abs(r(k, k));
        if (mag > 0.0) {
            q.col(k) *= r(k, k) / mag;
        }
    }
    return q;
}

Vector random_unit_vector(Rng &rng, Eigen::Index dim) {
    Vector v = ginibre(rng, dim, 1).col(0);
    return v / v.norm();
}

}  // namespace qexp
