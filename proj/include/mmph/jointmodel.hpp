#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "mmph/phasetype.hpp"

namespace mmph {

class JointModel;

// Blown-up representation of the underlying jump process in which the current
// block (level) tracks how many counted states have been entered so far.
// Levels 1..n_max identify the count exactly; the final level collects
// overflow (count > n_max). Dimension is base_dim * (n_max + 1).
class AugmentedRep {
 public:
  AugmentedRep(const JointModel& model, int n_max);

  int n_max() const { return n_max_; }
  int base_dim() const { return p_; }
  int dim() const { return static_cast<int>(t_aug_.rows()); }
  const Vector& initial() const { return alpha_aug_; }
  const Matrix& sub_intensity() const { return t_aug_; }

  // Exit-rate vector attributing absorption to count n (1 <= n <= n_max).
  Vector exit_vector(int n) const;
  // Exit rates of the overflow level (absorption with count > n_max).
  Vector overflow_exit() const;

  double density(double y, int n) const;
  double overflow_density(double y) const;
  double cdf(double y, int n) const;       // P(Y < y, N < n), needs n-1 <= n_max
  double count_pmf(int n) const;           // analytic integral of density(., n)
  double count_overflow_mass() const;      // P(N > n_max)

  // alpha (-T)^{-1} and alpha (-T)^{-2} rows, used for conditioning and moments.
  const Vector& green_row() const { return green_row_; }
  const Vector& green2_row() const { return green2_row_; }

 private:
  int p_;
  int eplus_;
  int n_max_;
  Vector alpha_aug_;
  Matrix t_aug_;
  Vector exit_base_;     // exit rates of the base process
  Vector green_row_;
  Vector green2_row_;

  double exit_dot(const Vector& row, int level) const;
};

// Conditional law of the absorption time given the count, represented as a
// phase-type distribution obtained by time reversal of the augmented chain
// restricted to the states it actually occupies.
class ConditionalRep {
 public:
  ConditionalRep(Vector gamma, Matrix a_mat, int dropped_states);

  const Vector& gamma() const { return ph_.initial(); }
  const Matrix& a_mat() const { return ph_.sub_intensity(); }
  const Vector& a_exit() const { return ph_.exit_rates(); }
  int dropped_states() const { return dropped_; }

  double density(double y) const { return ph_.density(y); }
  double cdf(double y) const { return ph_.cdf(y); }
  double mean() const { return ph_.mean(); }
  const PhRep& as_ph() const { return ph_; }

 private:
  PhRep ph_;
  int dropped_;
};

struct MixedMomentResult {
  double value;             // truncated sum for E[Y N]
  int truncation_n;         // last count included
  double tail_probability;  // P(N > truncation_n)
  double tail_y_moment;     // E[Y; N > truncation_n], exact
  double tail_n_moment;     // E[N; N > truncation_n], exact
};

// Target description for the Erlang-block approximation: a joint law given by
// count probabilities P(N=i) for i = 1..blocks and conditional distribution
// functions of the continuous part given each count.
struct ErlangApproxTarget {
  double rate = 1.0;    // Erlang stage rate, also the 1/rate discretization grid
  int truncation = 1;   // number of grid cells kept per conditional
  int blocks = 1;       // number of count blocks
  std::function<double(int n, double y)> conditional_cdf;
  std::vector<double> count_probabilities;  // P(N = i), i = 1..blocks
};

// Joint law of (absorption time Y, counted-state visits N) of one absorbing
// Markov jump process. States 1..eplus_size are the counted ones and carry
// all the initial mass, so N >= 1.
class JointModel {
 public:
  JointModel(PhRep ph, int eplus_size);

  // Builds a model from an arbitrary labeling, permuting counted states first.
  static JointModel from_unordered(const Vector& alpha, const Matrix& t_mat,
                                   const std::vector<bool>& counted);

  int dim() const { return ph_.dim(); }
  int eplus_size() const { return eplus_; }
  const PhRep& ph() const { return ph_; }

  PhRep marginal_y() const { return ph_; }
  DphRep marginal_n() const;
  AugmentedRep augment(int n_max) const;

  double joint_density(double y, int n) const;
  double joint_cdf(double y, int n) const;  // P(Y < y, N < n)
  ConditionalRep conditional(int n) const;
  double conditional_mean(int n) const;
  double mgf(double theta1, double theta2) const;
  MixedMomentResult mixed_moment(double tail_tol = 1e-12) const;

 private:
  PhRep ph_;
  int eplus_;

  struct AugCache {
    std::mutex mutex;
    std::shared_ptr<const AugmentedRep> rep;
  };
  std::shared_ptr<AugCache> cache_ = std::make_shared<AugCache>();

  std::shared_ptr<const AugmentedRep> cached_augmentation(int n_max_needed) const;
};

// Smallest n with P(N > n) < tail_tol for the given count marginal.
// Throws NumericalError past one million terms.
int count_truncation_point(const DphRep& marginal, double tail_tol);

// Block-diagonal model whose count marginal matches the target block
// probabilities exactly and whose conditional laws are truncated Erlang
// mixtures on the 1/rate grid.
JointModel erlang_approximation(const ErlangApproxTarget& target);

}  // namespace mmph
