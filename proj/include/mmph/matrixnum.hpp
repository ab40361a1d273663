#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "mmph/errors.hpp"

namespace mmph {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Matrix exponential e^m (scaling-and-squaring with Pade approximation).
Matrix mat_exp(const Matrix& m);

// Inverse of a numerically nonsingular matrix.
// Throws SingularMatrixError when the reciprocal condition estimate is <= 1e-14.
Matrix mat_inv(const Matrix& m);

// m^k by binary exponentiation; m^0 = I.
Matrix mat_pow(const Matrix& m, std::uint64_t k);

// Returns (e^{Ty}, J(y)) with J(y) = \int_0^y e^{T(y-u)} exit init' e^{Tu} du,
// read off the top blocks of the exponential of [[T, exit init'], [0, T]] y.
std::pair<Matrix, Matrix> van_loan_integral(const Matrix& t_mat,
                                            const Vector& exit,
                                            const Vector& init, double y);

namespace detail {
void require_square(const Matrix& m, const char* who);
void require_finite(const Matrix& m, const char* who);
double rcond_estimate(const Matrix& m, const Eigen::PartialPivLU<Matrix>& lu);
}  // namespace detail

}  // namespace mmph
