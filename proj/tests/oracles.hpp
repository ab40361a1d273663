#pragma once

// Test-only reference implementations, deliberately independent of the
// library's production paths.

#include <cmath>
#include <cstdint>
#include <vector>

#include "mmph/jointmodel.hpp"
#include "mmph/simulate.hpp"

namespace oracles {

using mmph::Matrix;
using mmph::Vector;

// Truncated power series; adequate for ||m||_1 <= 10.
inline Matrix taylor_expm(const Matrix& m, int terms = 60) {
  Matrix sum = Matrix::Identity(m.rows(), m.cols());
  Matrix term = sum;
  for (int k = 1; k <= terms; ++k) {
    term = (term * m) / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

inline Matrix van_loan_integrand(const Matrix& t, const Vector& exit, const Vector& init,
                                 double y, double u) {
  return taylor_expm(t * (y - u)) * exit * init.transpose() * taylor_expm(t * u);
}

namespace detail {

inline Matrix simpson(const Matrix& t, const Vector& exit, const Vector& init, double y,
                      double a, double b, const Matrix& fa, const Matrix& fm,
                      const Matrix& fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const Matrix fl = van_loan_integrand(t, exit, init, y, 0.5 * (a + m));
  const Matrix fr = van_loan_integrand(t, exit, init, y, 0.5 * (m + b));
  const Matrix whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const Matrix left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
  const Matrix right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
  const double err = (left + right - whole).cwiseAbs().maxCoeff();
  if (depth <= 0 || err < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(t, exit, init, y, a, m, fa, fl, fm, tol / 2.0, depth - 1) +
         simpson(t, exit, init, y, m, b, fm, fr, fb, tol / 2.0, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature of the Van Loan integrand.
inline Matrix quadrature_van_loan(const Matrix& t, const Vector& exit, const Vector& init,
                                  double y, double tol = 1e-11) {
  if (y == 0.0) return Matrix::Zero(t.rows(), t.cols());
  const Matrix fa = van_loan_integrand(t, exit, init, y, 0.0);
  const Matrix fm = van_loan_integrand(t, exit, init, y, 0.5 * y);
  const Matrix fb = van_loan_integrand(t, exit, init, y, y);
  return detail::simpson(t, exit, init, y, 0.0, y, fa, fm, fb, tol, 24);
}

// Trapezoid quadrature of a scalar function on [0, hi].
template <typename F>
double integrate(const F& f, double hi, int points = 20001) {
  const double h = hi / (points - 1);
  double acc = 0.5 * (f(0.0) + f(hi));
  for (int i = 1; i + 1 < points; ++i) acc += f(i * h);
  return acc * h;
}

// Random subgenerator with off-diagonal rates ~ U(0,1) and exit ~ U(0.1,1).
inline Matrix random_subgenerator(int p, mmph::RngStream& rng, double scale = 1.0) {
  Matrix t(p, p);
  for (int i = 0; i < p; ++i) {
    double out = 0.0;
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      t(i, j) = rng.uniform() * scale;
      out += t(i, j);
    }
    t(i, i) = -(out + (0.1 + 0.9 * rng.uniform()) * scale);
  }
  return t;
}

inline mmph::PhRep random_ph(int p, mmph::RngStream& rng) {
  Vector alpha(p);
  for (int i = 0; i < p; ++i) alpha(i) = 0.2 + rng.uniform();
  alpha /= alpha.sum();
  return mmph::PhRep(alpha, random_subgenerator(p, rng));
}

inline mmph::JointModel random_joint_model(int p, int eplus, mmph::RngStream& rng) {
  Vector alpha = Vector::Zero(p);
  for (int i = 0; i < eplus; ++i) alpha(i) = 0.2 + rng.uniform();
  alpha /= alpha.sum();
  return mmph::JointModel(mmph::PhRep(alpha, random_subgenerator(p, rng)), eplus);
}

// Exhaustive path probabilities of a discrete absorbing chain up to a depth.
inline double dph_pmf_by_enumeration(const Vector& alpha, const Matrix& q, int n) {
  const int p = static_cast<int>(alpha.size());
  const Vector exit = (Matrix::Identity(p, p) - q) * Vector::Ones(p);
  std::vector<double> mass(alpha.data(), alpha.data() + p);
  for (int step = 1; step < n; ++step) {
    std::vector<double> next(p, 0.0);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) next[j] += mass[i] * q(i, j);
    mass = next;
  }
  double total = 0.0;
  for (int i = 0; i < p; ++i) total += mass[i] * exit(i);
  return total;
}

}  // namespace oracles
