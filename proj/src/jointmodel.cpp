#include "mmph/jointmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace mmph {

namespace {

constexpr double kDriftTol = 1e-12;

// Row vector through an inverse: returns x with x M = row, i.e. x = row M^{-1}.
Vector row_solve(const Eigen::PartialPivLU<Matrix>& lu_transposed, const Vector& row) {
  return lu_transposed.solve(row);
}

}  // namespace

JointModel::JointModel(PhRep ph, int eplus_size) : ph_(std::move(ph)), eplus_(eplus_size) {
  const int p = ph_.dim();
  if (eplus_ < 1 || eplus_ > p) {
    throw ValidationError("JointModel: counted-state block size must be in [1, dim]");
  }
  Vector alpha = ph_.initial();
  double stray = 0.0;
  for (int i = eplus_; i < p; ++i) stray += alpha(i);
  if (stray > kDriftTol) {
    throw ValidationError(
        "JointModel: initial mass on non-counted states must be zero, found " +
        std::to_string(stray));
  }
  if (stray != 0.0) {
    for (int i = eplus_; i < p; ++i) alpha(i) = 0.0;
    ph_ = PhRep(alpha, ph_.sub_intensity());
  }
}

JointModel JointModel::from_unordered(const Vector& alpha, const Matrix& t_mat,
                                      const std::vector<bool>& counted) {
  const auto p = alpha.size();
  if (static_cast<Eigen::Index>(counted.size()) != p) {
    throw ValidationError("JointModel: counted-state mask length mismatch");
  }
  std::vector<int> order;
  order.reserve(p);
  for (int i = 0; i < p; ++i)
    if (counted[i]) order.push_back(i);
  const int k = static_cast<int>(order.size());
  for (int i = 0; i < p; ++i)
    if (!counted[i]) order.push_back(i);
  Vector a(p);
  Matrix t(p, p);
  for (int i = 0; i < p; ++i) {
    a(i) = alpha(order[i]);
    for (int j = 0; j < p; ++j) t(i, j) = t_mat(order[i], order[j]);
  }
  return JointModel(PhRep(std::move(a), std::move(t)), k);
}

DphRep JointModel::marginal_n() const {
  const int p = dim();
  const int k = eplus_;
  const EmbeddedChain chain = ph_.embedded_chain();
  const Matrix& q = chain.probs;
  const Vector& alpha = ph_.initial();
  if (k == p) {
    return DphRep(alpha, q);
  }
  const Matrix q00 = q.bottomRightCorner(p - k, p - k);
  Matrix through;  // (I - Q00)^{-1} Q0+, paths running inside the uncounted block
  try {
    through = mat_inv(Matrix::Identity(p - k, p - k) - q00) * q.bottomLeftCorner(p - k, k);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("marginal_n: the uncounted block traps the chain", 0.0);
  }
  Vector a_count = alpha.head(k) + through.transpose() * alpha.tail(p - k);
  Matrix q_count = q.topLeftCorner(k, k) + q.topRightCorner(k, p - k) * through;
  return DphRep(std::move(a_count), std::move(q_count));
}

AugmentedRep JointModel::augment(int n_max) const { return AugmentedRep(*this, n_max); }

std::shared_ptr<const AugmentedRep> JointModel::cached_augmentation(int n_max_needed) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (!cache_->rep || cache_->rep->n_max() < n_max_needed) {
    const int have = cache_->rep ? cache_->rep->n_max() : 0;
    cache_->rep = std::make_shared<const AugmentedRep>(*this, std::max(n_max_needed, 2 * have));
  }
  return cache_->rep;
}

double JointModel::joint_density(double y, int n) const {
  if (n < 1) throw ValidationError("joint_density: count must be at least one");
  return cached_augmentation(n)->density(y, n);
}

double JointModel::joint_cdf(double y, int n) const {
  if (n < 1) throw ValidationError("joint_cdf: count must be at least one");
  if (!(y >= 0.0)) throw ValidationError("joint_cdf: time must be nonnegative");
  if (n == 1) return 0.0;
  return cached_augmentation(n - 1)->cdf(y, n);
}

ConditionalRep JointModel::conditional(int n) const {
  if (n < 1) throw ValidationError("conditional: count must be at least one");
  const auto aug = cached_augmentation(n);
  const Vector& u = aug->green_row();  // alpha (-T)^{-1}
  const double mass = aug->count_pmf(n);
  if (!(mass > 1e-300)) {
    throw NumericalError("conditional: count " + std::to_string(n) + " has no mass");
  }
  const Vector exit_n = aug->exit_vector(n);
  const int d = aug->dim();
  std::vector<int> keep;
  keep.reserve(d);
  for (int i = 0; i < d; ++i)
    if (u(i) > 0.0) keep.push_back(i);
  if (keep.empty()) {
    throw NumericalError("conditional: no reachable states");
  }
  const int r = static_cast<int>(keep.size());
  Vector gamma(r);
  Matrix reversed(r, r);
  const Matrix& taug = aug->sub_intensity();
  for (int a = 0; a < r; ++a) {
    const int i = keep[a];
    gamma(a) = u(i) * exit_n(i) / mass;
    for (int b = 0; b < r; ++b) {
      const int j = keep[b];
      reversed(a, b) = taug(j, i) * u(j) / u(i);
    }
  }
  return ConditionalRep(std::move(gamma), std::move(reversed), d - r);
}

double JointModel::conditional_mean(int n) const { return conditional(n).mean(); }

double JointModel::mgf(double theta1, double theta2) const {
  const int p = dim();
  const int k = eplus_;
  const Matrix& t = ph_.sub_intensity();
  Vector scale(p);
  for (int i = 0; i < p; ++i) scale(i) = std::exp(-theta2 * (i < k ? 1.0 : 0.0));
  // m = -Delta(c) - S_theta2 with S_theta2 = T + Delta(b),
  // b_i = t_ii (scale_i - 1), c_i = theta1 scale_i
  Matrix m = -t;
  for (int i = 0; i < p; ++i) {
    m(i, i) -= t(i, i) * (scale(i) - 1.0);
    m(i, i) -= theta1 * scale(i);
  }
  // spectrum in the right half-plane <=> theta1 below the convergence abscissa
  Eigen::EigenSolver<Matrix> eig(m);
  for (int i = 0; i < p; ++i) {
    if (!(eig.eigenvalues()(i).real() > 0.0)) {
      throw NumericalError("mgf: arguments outside the convergence domain");
    }
  }
  const Vector h = mat_inv(m) * ph_.exit_rates();
  return ph_.initial().dot(h);
}

int count_truncation_point(const DphRep& marginal, double tail_tol) {
  if (!(tail_tol > 0.0) || tail_tol > 1e-3) {
    throw ValidationError("count truncation tolerance must lie in (0, 1e-3]");
  }
  constexpr int kMax = 1000000;
  Vector v = marginal.initial();
  for (int n = 1; n <= kMax; ++n) {
    v = marginal.sub_transition().transpose() * v;
    if (v.sum() < tail_tol) return n;
  }
  throw NumericalError("count marginal tail does not clear the tolerance within 1e6 terms");
}

MixedMomentResult JointModel::mixed_moment(double tail_tol) const {
  const DphRep marg = marginal_n();
  const int n_star = count_truncation_point(marg, tail_tol);

  // Forward substitution through the block-triangular augmented system: per
  // level, g = alpha (-T~)^{-1} and h = g (-T~)^{-1} restricted to that level.
  const int p = dim();
  const int k = eplus_;
  const Matrix& t = ph_.sub_intensity();
  Matrix w_split = t;                                  // in-level part of split levels
  w_split.bottomLeftCorner(p - k, k).setZero();        // counted entries move a level up
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j) w_split(i, j) = 0.0;
  Matrix up = Matrix::Zero(p, p);                      // level j -> level j+1
  up.topLeftCorner(k, k) = t.topLeftCorner(k, k);
  for (int i = 0; i < k; ++i) up(i, i) = 0.0;
  up.bottomLeftCorner(p - k, k) = t.bottomLeftCorner(p - k, k);

  const Eigen::PartialPivLU<Matrix> lu_split((-w_split).transpose().eval());
  const Eigen::PartialPivLU<Matrix> lu_full((-t).transpose().eval());
  const Vector& exit = ph_.exit_rates();

  Vector g = row_solve(lu_split, ph_.initial());
  Vector h = row_solve(lu_split, g);
  double value = 0.0;
  double n_partial = 0.0;
  for (int n = 1; n <= n_star; ++n) {
    value += n * h.dot(exit);
    n_partial += n * g.dot(exit);
    const Vector g_in = up.transpose() * g;
    const Vector h_in = up.transpose() * h;
    if (n < n_star) {
      g = row_solve(lu_split, g_in);
      h = row_solve(lu_split, Vector(g + h_in));
    } else {
      g = row_solve(lu_full, g_in);
      h = row_solve(lu_full, Vector(g + h_in));
    }
  }
  MixedMomentResult res;
  res.value = value;
  res.truncation_n = n_star;
  res.tail_probability = g.dot(exit);
  res.tail_y_moment = h.dot(exit);
  res.tail_n_moment = marg.mean() - n_partial;
  if (!std::isfinite(res.value)) {
    throw NumericalError("mixed_moment: truncated sum did not stay finite");
  }
  return res;
}

// ---------------------------------------------------------------------------
// AugmentedRep

AugmentedRep::AugmentedRep(const JointModel& model, int n_max)
    : p_(model.dim()), eplus_(model.eplus_size()), n_max_(n_max) {
  if (n_max_ < 1) throw ValidationError("augment: n_max must be at least one");
  const int p = p_;
  const int k = eplus_;
  const int levels = n_max_ + 1;
  const int d = p * levels;
  const Matrix& t = model.ph().sub_intensity();
  const Matrix tpp_a = [&] {
    Matrix a = t.topLeftCorner(k, k);
    a.diagonal().setZero();
    return a;
  }();

  t_aug_ = Matrix::Zero(d, d);
  for (int lev = 0; lev < levels; ++lev) {
    const int base = lev * p;
    if (lev < levels - 1) {
      t_aug_.block(base, base, k, k) = t.topLeftCorner(k, k).diagonal().asDiagonal();
      t_aug_.block(base, base + k, k, p - k) = t.topRightCorner(k, p - k);
      t_aug_.block(base, base + p, k, k) = tpp_a;
      t_aug_.block(base + k, base + k, p - k, p - k) = t.bottomRightCorner(p - k, p - k);
      t_aug_.block(base + k, base + p, p - k, k) = t.bottomLeftCorner(p - k, k);
    } else {
      t_aug_.block(base, base, p, p) = t;
    }
  }
  alpha_aug_ = Vector::Zero(d);
  alpha_aug_.head(p) = model.ph().initial();
  exit_base_ = model.ph().exit_rates();

  const Eigen::PartialPivLU<Matrix> lu((-t_aug_).transpose().eval());
  green_row_ = lu.solve(alpha_aug_);
  green2_row_ = lu.solve(green_row_);
  if (!green_row_.allFinite() || !green2_row_.allFinite()) {
    throw SingularMatrixError("augment: block system is numerically singular", 0.0);
  }
}

Vector AugmentedRep::exit_vector(int n) const {
  if (n < 1 || n > n_max_) {
    throw ValidationError("exit_vector: count must lie in [1, n_max]");
  }
  Vector v = Vector::Zero(dim());
  v.segment((n - 1) * p_, p_) = exit_base_;
  return v;
}

Vector AugmentedRep::overflow_exit() const {
  Vector v = Vector::Zero(dim());
  v.segment(n_max_ * p_, p_) = exit_base_;
  return v;
}

double AugmentedRep::exit_dot(const Vector& row, int level) const {
  return row.segment(level * p_, p_).dot(exit_base_);
}

double AugmentedRep::density(double y, int n) const {
  if (n < 1 || n > n_max_) {
    throw ValidationError("density: count must lie in [1, n_max]");
  }
  if (!(y >= 0.0)) throw ValidationError("density: time must be nonnegative");
  // levels above n cannot reach the level-n exit, so the leading corner of the
  // block-triangular system carries the whole value
  const int q = n * p_;
  const Vector row =
      mat_exp(t_aug_.topLeftCorner(q, q) * y).transpose() * alpha_aug_.head(q);
  const double v = row.segment((n - 1) * p_, p_).dot(exit_base_);
  return v < 0.0 ? 0.0 : v;
}

double AugmentedRep::overflow_density(double y) const {
  if (!(y >= 0.0)) throw ValidationError("overflow_density: time must be nonnegative");
  const Vector row = mat_exp(t_aug_ * y).transpose() * alpha_aug_;
  const double v = exit_dot(row, n_max_);
  return v < 0.0 ? 0.0 : v;
}

double AugmentedRep::cdf(double y, int n) const {
  if (n < 2) return 0.0;
  if (n - 1 > n_max_) {
    throw ValidationError("cdf: count exceeds the augmentation size");
  }
  if (!(y >= 0.0)) throw ValidationError("cdf: time must be nonnegative");
  const int q = (n - 1) * p_;
  const Matrix corner = t_aug_.topLeftCorner(q, q);
  const Vector row = mat_exp(corner * y).transpose() * alpha_aug_.head(q);
  const Eigen::PartialPivLU<Matrix> lu(-corner);
  double total = 0.0;
  for (int i = 1; i <= n - 1; ++i) {
    Vector ti = Vector::Zero(q);
    ti.segment((i - 1) * p_, p_) = exit_base_;
    const Vector gi = lu.solve(ti);  // (-T~)^{-1} t^(i)
    total += green_row_.head(q).dot(ti) - row.dot(gi);
  }
  return std::min(1.0, std::max(0.0, total));
}

double AugmentedRep::count_pmf(int n) const {
  if (n < 1 || n > n_max_) {
    throw ValidationError("count_pmf: count must lie in [1, n_max]");
  }
  const double v = exit_dot(green_row_, n - 1);
  return v < 0.0 ? 0.0 : v;
}

double AugmentedRep::count_overflow_mass() const {
  const double v = exit_dot(green_row_, n_max_);
  return v < 0.0 ? 0.0 : v;
}

// ---------------------------------------------------------------------------
// ConditionalRep

ConditionalRep::ConditionalRep(Vector gamma, Matrix a_mat, int dropped_states)
    : ph_(std::move(gamma), std::move(a_mat)), dropped_(dropped_states) {}

// ---------------------------------------------------------------------------
// Erlang-block approximation

JointModel erlang_approximation(const ErlangApproxTarget& target) {
  if (!(target.rate > 0.0)) throw ValidationError("erlang_approximation: rate must be positive");
  if (target.truncation < 1) {
    throw ValidationError("erlang_approximation: truncation must be at least one");
  }
  if (target.blocks < 1) throw ValidationError("erlang_approximation: need at least one block");
  if (!target.conditional_cdf) {
    throw ValidationError("erlang_approximation: conditional cdf is required");
  }
  if (static_cast<int>(target.count_probabilities.size()) < target.blocks) {
    throw ValidationError("erlang_approximation: count probabilities must cover every block");
  }
  const double l = target.rate;
  const int m = target.truncation;
  const int b = target.blocks;
  double count_total = 0.0;
  for (int i = 0; i < b; ++i) {
    if (target.count_probabilities[i] < 0.0) {
      throw ValidationError("erlang_approximation: count probabilities must be nonnegative");
    }
    count_total += target.count_probabilities[i];
  }
  if (!(count_total > 0.0)) {
    throw ValidationError("erlang_approximation: count probabilities sum to zero");
  }

  struct Chain {
    int stages;
    int counted;
    double weight;
  };
  std::vector<Chain> chains;
  for (int i = 1; i <= b; ++i) {
    const double full = target.conditional_cdf(i, static_cast<double>(m) / l);
    if (!(full > 0.0)) {
      throw ValidationError("erlang_approximation: conditional for count " + std::to_string(i) +
                            " has no mass below the truncation point");
    }
    const double block_prob = target.count_probabilities[i - 1] / count_total;
    double prev = 0.0;
    for (int cell = 1; cell <= m; ++cell) {
      const double cur = target.conditional_cdf(i, static_cast<double>(cell) / l);
      const double d = cur - prev;
      prev = cur;
      if (d < -kDriftTol) {
        throw ValidationError("erlang_approximation: conditional cdf is not nondecreasing");
      }
      if (d > 0.0) {
        chains.push_back({std::max(cell, i), i, block_prob * d / full});
      }
    }
  }

  int dim = 0;
  for (const Chain& c : chains) dim += c.stages;
  Vector alpha = Vector::Zero(dim);
  Matrix t = Matrix::Zero(dim, dim);
  std::vector<bool> counted(dim, false);
  int pos = 0;
  for (const Chain& c : chains) {
    alpha(pos) = c.weight;
    for (int s = 0; s < c.stages; ++s) {
      t(pos + s, pos + s) = -l;
      if (s + 1 < c.stages) t(pos + s, pos + s + 1) = l;
      if (s < c.counted) counted[pos + s] = true;
    }
    pos += c.stages;
  }
  return JointModel::from_unordered(alpha, t, counted);
}

}  // namespace mmph
