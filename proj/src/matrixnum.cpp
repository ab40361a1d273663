#include "mmph/matrixnum.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace mmph {

namespace detail {

void require_square(const Matrix& m, const char* who) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ValidationError(std::string(who) + ": expected a nonempty square matrix, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_finite(const Matrix& m, const char* who) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(who) + ": matrix has non-finite entries");
  }
}

// 1-norm reciprocal condition estimate from an LU factorization via the
// classical Hager/Higham power iteration on inv(m)' and inv(m).
double rcond_estimate(const Matrix& m, const Eigen::PartialPivLU<Matrix>& lu) {
  const auto n = m.rows();
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return 0.0;
  Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
  double inv_norm = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    Vector y = lu.solve(x);
    inv_norm = y.lpNorm<1>();
    Vector xi = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
    Vector z = lu.transpose().solve(xi);
    Eigen::Index j;
    z.cwiseAbs().maxCoeff(&j);
    if (z.lpNorm<Eigen::Infinity>() <= z.dot(x)) break;
    x.setZero();
    x(j) = 1.0;
  }
  if (!std::isfinite(inv_norm) || inv_norm == 0.0) return 0.0;
  return 1.0 / (norm1 * inv_norm);
}

}  // namespace detail

Matrix mat_exp(const Matrix& m) {
  detail::require_square(m, "mat_exp");
  detail::require_finite(m, "mat_exp");
  return m.exp();
}

Matrix mat_inv(const Matrix& m) {
  detail::require_square(m, "mat_inv");
  detail::require_finite(m, "mat_inv");
  Eigen::PartialPivLU<Matrix> lu(m);
  const double rcond = detail::rcond_estimate(m, lu);
  if (!(rcond > 1e-14)) {
    throw SingularMatrixError("mat_inv: matrix is singular or ill-conditioned", rcond);
  }
  return lu.solve(Matrix::Identity(m.rows(), m.cols()));
}

Matrix mat_pow(const Matrix& m, std::uint64_t k) {
  detail::require_square(m, "mat_pow");
  detail::require_finite(m, "mat_pow");
  Matrix result = Matrix::Identity(m.rows(), m.cols());
  Matrix base = m;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

std::pair<Matrix, Matrix> van_loan_integral(const Matrix& t_mat, const Vector& exit,
                                            const Vector& init, double y) {
  detail::require_square(t_mat, "van_loan_integral");
  detail::require_finite(t_mat, "van_loan_integral");
  const auto d = t_mat.rows();
  if (exit.size() != d || init.size() != d) {
    throw ValidationError("van_loan_integral: vector lengths must match the matrix dimension");
  }
  if (!(y >= 0.0)) {
    throw ValidationError("van_loan_integral: y must be nonnegative");
  }
  Matrix block = Matrix::Zero(2 * d, 2 * d);
  block.topLeftCorner(d, d) = t_mat;
  block.bottomRightCorner(d, d) = t_mat;
  block.topRightCorner(d, d) = exit * init.transpose();
  const Matrix e = (block * y).exp();
  return {e.topLeftCorner(d, d), e.topRightCorner(d, d)};
}

}  // namespace mmph
