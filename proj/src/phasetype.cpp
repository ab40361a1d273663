#include "mmph/phasetype.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace mmph {

namespace {

constexpr double kDriftTol = 1e-12;

void require_nonnegative_time(double y, const char* who) {
  if (!(y >= 0.0)) {
    throw ValidationError(std::string(who) + ": time argument must be nonnegative");
  }
}

}  // namespace

PhRep::PhRep(Vector alpha, Matrix t_mat) : alpha_(std::move(alpha)), t_(std::move(t_mat)) {
  detail::require_square(t_, "PhRep");
  detail::require_finite(t_, "PhRep");
  const auto p = t_.rows();
  if (alpha_.size() != p) {
    throw ValidationError("PhRep: initial vector length does not match the matrix dimension");
  }
  if (!alpha_.allFinite() || alpha_.minCoeff() < 0.0) {
    throw ValidationError("PhRep: initial probabilities must be finite and nonnegative");
  }
  const double mass = alpha_.sum();
  if (mass <= 0.0 || mass > 1.0 + kDriftTol) {
    throw ValidationError("PhRep: initial probabilities must sum to one, got " +
                          std::to_string(mass));
  }
  alpha_ /= mass;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!(t_(i, i) < 0.0)) {
      throw ValidationError("PhRep: diagonal of the sub-intensity matrix must be negative");
    }
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i != j && t_(i, j) < 0.0) {
        throw ValidationError("PhRep: off-diagonal rates must be nonnegative");
      }
    }
  }
  exit_ = -t_ * Vector::Ones(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (exit_(i) < -kDriftTol) {
      throw ValidationError("PhRep: row " + std::to_string(i) +
                            " of the sub-intensity matrix has positive sum");
    }
    if (exit_(i) < 0.0) exit_(i) = 0.0;  // round-off drift from EM iterates
  }
  // all states transient <=> -T nonsingular
  Eigen::PartialPivLU<Matrix> lu(-t_);
  const double rcond = detail::rcond_estimate(-t_, lu);
  if (!(rcond > 1e-14)) {
    throw SingularMatrixError("PhRep: sub-intensity matrix has non-transient states", rcond);
  }
}

double PhRep::density(double y) const {
  require_nonnegative_time(y, "PhRep::density");
  const double v = alpha_.transpose() * mat_exp(t_ * y) * exit_;
  return v < 0.0 ? 0.0 : v;
}

double PhRep::cdf(double y) const {
  require_nonnegative_time(y, "PhRep::cdf");
  const double survival = alpha_.transpose() * mat_exp(t_ * y) * Vector::Ones(dim());
  return std::min(1.0, std::max(0.0, 1.0 - survival));
}

double PhRep::mean() const { return sojourn_vector().sum(); }

Vector PhRep::sojourn_vector() const {
  const Matrix green = mat_inv(-t_);
  return green.transpose() * alpha_;
}

EmbeddedChain PhRep::embedded_chain() const {
  const auto p = dim();
  EmbeddedChain chain{Matrix::Zero(p, p), Vector(p)};
  for (int i = 0; i < p; ++i) {
    const double rate = -t_(i, i);
    if (rate == 0.0) {
      throw ValidationError("embedded_chain: zero diagonal entry in row " + std::to_string(i));
    }
    for (int j = 0; j < p; ++j) {
      if (i != j) chain.probs(i, j) = t_(i, j) / rate;
    }
    chain.exit_probs(i) = exit_(i) / rate;
  }
  return chain;
}

DphRep::DphRep(Vector alpha, Matrix q_mat) : alpha_(std::move(alpha)), q_(std::move(q_mat)) {
  detail::require_square(q_, "DphRep");
  detail::require_finite(q_, "DphRep");
  const auto p = q_.rows();
  if (alpha_.size() != p) {
    throw ValidationError("DphRep: initial vector length does not match the matrix dimension");
  }
  if (!alpha_.allFinite() || alpha_.minCoeff() < 0.0) {
    throw ValidationError("DphRep: initial probabilities must be finite and nonnegative");
  }
  const double mass = alpha_.sum();
  if (mass <= 0.0 || mass > 1.0 + kDriftTol) {
    throw ValidationError("DphRep: initial probabilities must sum to one");
  }
  alpha_ /= mass;
  for (Eigen::Index i = 0; i < p; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (q_(i, j) < 0.0) {
        if (q_(i, j) < -kDriftTol) {
          throw ValidationError("DphRep: transition probabilities must be nonnegative");
        }
        q_(i, j) = 0.0;
      }
      if (q_(i, j) > 1.0 + kDriftTol) {
        throw ValidationError("DphRep: transition probabilities must not exceed one");
      }
      row += q_(i, j);
    }
    if (row > 1.0 + kDriftTol) {
      throw ValidationError("DphRep: row " + std::to_string(i) + " sums past one");
    }
  }
  exit_ = (Matrix::Identity(p, p) - q_) * Vector::Ones(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (exit_(i) < 0.0) exit_(i) = 0.0;
  }
  Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(p, p) - q_);
  const double rcond = detail::rcond_estimate(Matrix::Identity(p, p) - q_, lu);
  if (!(rcond > 1e-14)) {
    throw SingularMatrixError("DphRep: I - Q is singular", rcond);
  }
}

double DphRep::pmf(int n) const {
  if (n < 1) {
    throw ValidationError("DphRep::pmf: support starts at n = 1");
  }
  const double v =
      alpha_.transpose() * mat_pow(q_, static_cast<std::uint64_t>(n - 1)) * exit_;
  return v < 0.0 ? 0.0 : v;
}

double DphRep::cdf(int n) const {
  if (n < 0) {
    throw ValidationError("DphRep::cdf: count must be nonnegative");
  }
  const double survival =
      alpha_.transpose() * mat_pow(q_, static_cast<std::uint64_t>(n)) * Vector::Ones(dim());
  return std::min(1.0, std::max(0.0, 1.0 - survival));
}

double DphRep::mean() const { return visits_vector().sum(); }

Vector DphRep::visits_vector() const {
  const Matrix green = mat_inv(Matrix::Identity(dim(), dim()) - q_);
  return green.transpose() * alpha_;
}

}  // namespace mmph
