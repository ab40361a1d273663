#pragma once

#include "mmph/matrixnum.hpp"

namespace mmph {

// Complete-data summary of a set of sample paths: starts, total sojourn time,
// jump counts and absorption counts per state.
struct SufficientStats {
  Vector b;        // processes starting in each state
  Vector z;        // total time spent in each state
  Matrix n_trans;  // jumps between transient states, zero diagonal
  Vector n_exit;   // jumps to the absorbing state

  static SufficientStats zero(int p) {
    return {Vector::Zero(p), Vector::Zero(p), Matrix::Zero(p, p), Vector::Zero(p)};
  }

  void merge(const SufficientStats& other) {
    b += other.b;
    z += other.z;
    n_trans += other.n_trans;
    n_exit += other.n_exit;
  }
};

}  // namespace mmph
