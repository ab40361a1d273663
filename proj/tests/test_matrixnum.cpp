#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mmph/matrixnum.hpp"
#include "mmph/simulate.hpp"
#include "oracles.hpp"

using mmph::Matrix;
using mmph::Vector;

TEST_CASE("mat_exp basics") {
  CHECK((mmph::mat_exp(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);

  Matrix one(1, 1);
  one << -1.0;
  CHECK(mmph::mat_exp(one)(0, 0) == doctest::Approx(0.36787944117144233).epsilon(1e-12));

  Matrix m(2, 2);
  m << -2.0, 1.0, 0.0, -3.0;
  const Matrix expected = oracles::taylor_expm(m);
  CHECK((mmph::mat_exp(m) - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("mat_exp agrees with a truncated series on random subgenerators") {
  mmph::RngStream rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 2 + static_cast<int>(rng.next_u64() % 5);
    mmph::RngStream sub = rng.substream(trial);
    const Matrix t = oracles::random_subgenerator(p, sub);
    CHECK((t.cwiseAbs().colwise().sum().maxCoeff()) <= 10.0);
    const Matrix got = mmph::mat_exp(t);
    const Matrix want = oracles::taylor_expm(t);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("mat_exp subgenerator structure: nonnegative entries, substochastic rows") {
  mmph::RngStream rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    mmph::RngStream sub = rng.substream(trial);
    const Matrix t = oracles::random_subgenerator(3, sub);
    for (double y : {0.1, 1.0, 4.0}) {
      const Matrix e = mmph::mat_exp(t * y);
      CHECK(e.minCoeff() >= -1e-12);
      const Vector rows = e * Vector::Ones(3);
      CHECK(rows.maxCoeff() <= 1.0 + 1e-12);
      CHECK(rows.minCoeff() >= -1e-12);
    }
    // inverse relation
    const Matrix prod = mmph::mat_exp(t) * mmph::mat_exp(Matrix(-t));
    CHECK((prod - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("mat_exp rejects bad input") {
  CHECK_THROWS_AS(mmph::mat_exp(Matrix::Zero(2, 3)), mmph::ValidationError);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(mmph::mat_exp(bad), mmph::ValidationError);
}

TEST_CASE("mat_inv") {
  CHECK((mmph::mat_inv(Matrix::Identity(4, 4)) - Matrix::Identity(4, 4)).norm() == 0.0);

  Matrix two(1, 1);
  two << 2.0;
  CHECK(mmph::mat_inv(two)(0, 0) == doctest::Approx(0.5));

  mmph::RngStream rng(3);
  Matrix m(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) m(i, j) = rng.uniform();
    m(i, i) += 5.0;  // diagonally dominant
  }
  const Matrix residual = m * mmph::mat_inv(m) - Matrix::Identity(5, 5);
  CHECK(residual.cwiseAbs().maxCoeff() < 1e-9);

  CHECK_THROWS_AS(mmph::mat_inv(Matrix::Zero(3, 3)), mmph::SingularMatrixError);
  Matrix nearly = Matrix::Identity(2, 2);
  nearly(1, 1) = 1e-18;
  CHECK_THROWS_AS(mmph::mat_inv(nearly), mmph::SingularMatrixError);
}

TEST_CASE("mat_pow") {
  mmph::RngStream rng(11);
  Matrix any(3, 3);
  for (int i = 0; i < 9; ++i) any(i / 3, i % 3) = rng.uniform();
  CHECK((mmph::mat_pow(any, 0) - Matrix::Identity(3, 3)).norm() == 0.0);

  Matrix half(1, 1);
  half << 0.5;
  CHECK(mmph::mat_pow(half, 3)(0, 0) == doctest::Approx(0.125));

  Matrix q(2, 2);
  q << 0.3, 0.4, 0.2, 0.5;
  Matrix naive = Matrix::Identity(2, 2);
  for (int i = 0; i < 7; ++i) naive = naive * q;
  CHECK((mmph::mat_pow(q, 7) - naive).cwiseAbs().maxCoeff() < 1e-12);

  // one-step recurrence
  for (std::uint64_t k : {1ULL, 4ULL, 9ULL}) {
    const Matrix lhs = mmph::mat_pow(q, k + 1);
    const Matrix rhs = q * mmph::mat_pow(q, k);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-15);
  }

  CHECK_THROWS_AS(mmph::mat_pow(Matrix::Zero(2, 3), 2), mmph::ValidationError);
}

TEST_CASE("van_loan_integral closed forms") {
  Matrix t(1, 1);
  t << -0.8;
  Vector exit(1), init(1);
  exit << 0.5;
  init << 1.0;

  auto [e0, j0] = mmph::van_loan_integral(t, exit, init, 0.0);
  CHECK(e0(0, 0) == doctest::Approx(1.0));
  CHECK(j0(0, 0) == doctest::Approx(0.0));

  const double y = 2.3;
  auto [e, j] = mmph::van_loan_integral(t, exit, init, y);
  CHECK(e(0, 0) == doctest::Approx(std::exp(-0.8 * y)).epsilon(1e-12));
  CHECK(j(0, 0) == doctest::Approx(0.5 * y * std::exp(-0.8 * y)).epsilon(1e-12));
}

TEST_CASE("van_loan_integral agrees with adaptive quadrature") {
  mmph::RngStream rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    mmph::RngStream sub = rng.substream(trial);
    const int p = 2 + static_cast<int>(sub.next_u64() % 3);
    const Matrix t = oracles::random_subgenerator(p, sub);
    const Vector exit = -t * Vector::Ones(p);
    Vector init(p);
    for (int i = 0; i < p; ++i) init(i) = sub.uniform();
    init /= init.sum();
    const double y = trial == 0 ? 1.5 : 0.2 + 3.0 * sub.uniform();
    auto [e, j] = mmph::van_loan_integral(t, exit, init, y);
    CHECK((e - mmph::mat_exp(t * y)).cwiseAbs().maxCoeff() < 1e-10);
    const Matrix want = oracles::quadrature_van_loan(t, exit, init, y);
    CHECK((j - want).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("van_loan_integral argument checks") {
  Matrix t(2, 2);
  t << -1.0, 0.5, 0.0, -2.0;
  Vector good(2);
  good << 1.0, 1.0;
  Vector bad(3);
  bad << 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(mmph::van_loan_integral(t, bad, good, 1.0), mmph::ValidationError);
  CHECK_THROWS_AS(mmph::van_loan_integral(t, good, good, -0.1), mmph::ValidationError);
}
