#pragma once

#include "mmph/matrixnum.hpp"

namespace mmph {

// Transition data of the jump chain embedded in a Markov jump process:
// probs(i,j) = rate(i->j)/total rate out of i, exit_probs(i) the probability
// that the next jump from i is the absorbing one. Each row of (probs|exit)
// sums to one.
struct EmbeddedChain {
  Matrix probs;
  Vector exit_probs;
};

// Continuous phase-type law: absorption time of a Markov jump process with
// initial row vector alpha over p transient states and sub-intensity matrix T.
// Construction normalizes alpha to sum exactly one and clamps exit rates in
// [-1e-12, 0) to zero; anything further off is rejected.
class PhRep {
 public:
  PhRep(Vector alpha, Matrix t_mat);

  int dim() const { return static_cast<int>(alpha_.size()); }
  const Vector& initial() const { return alpha_; }
  const Matrix& sub_intensity() const { return t_; }
  const Vector& exit_rates() const { return exit_; }

  double density(double y) const;   // alpha e^{Ty} t
  double cdf(double y) const;       // 1 - alpha e^{Ty} e
  double mean() const;              // alpha (-T)^{-1} e
  Vector sojourn_vector() const;    // alpha (-T)^{-1}
  EmbeddedChain embedded_chain() const;

 private:
  Vector alpha_;
  Matrix t_;
  Vector exit_;
};

// Discrete phase-type law: absorption step count (support {1, 2, ...}) of a
// Markov chain with sub-transition matrix Q.
class DphRep {
 public:
  DphRep(Vector alpha, Matrix q_mat);

  int dim() const { return static_cast<int>(alpha_.size()); }
  const Vector& initial() const { return alpha_; }
  const Matrix& sub_transition() const { return q_; }
  const Vector& exit_probs() const { return exit_; }

  double pmf(int n) const;          // alpha Q^{n-1} q, n >= 1
  double cdf(int n) const;          // 1 - alpha Q^n e, n >= 0
  double mean() const;              // alpha (I-Q)^{-1} e
  Vector visits_vector() const;     // alpha (I-Q)^{-1}

 private:
  Vector alpha_;
  Matrix q_;
  Vector exit_;
};

}  // namespace mmph
