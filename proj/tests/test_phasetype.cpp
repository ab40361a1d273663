#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mmph/phasetype.hpp"
#include "mmph/simulate.hpp"
#include "oracles.hpp"

using mmph::DphRep;
using mmph::Matrix;
using mmph::PhRep;
using mmph::Vector;

namespace {

PhRep exponential_rep(double rate) {
  Vector a(1);
  a << 1.0;
  Matrix t(1, 1);
  t << -rate;
  return PhRep(a, t);
}

PhRep erlang_rep(int stages, double rate) {
  Vector a = Vector::Zero(stages);
  a(0) = 1.0;
  Matrix t = Matrix::Zero(stages, stages);
  for (int i = 0; i < stages; ++i) {
    t(i, i) = -rate;
    if (i + 1 < stages) t(i, i + 1) = rate;
  }
  return PhRep(a, t);
}

}  // namespace

TEST_CASE("construction validates and normalizes") {
  Vector a(2);
  a << 0.7, 0.3 - 5e-13;  // round-off drift gets renormalized
  Matrix t(2, 2);
  t << -2.0, 1.0, 0.0, -3.0;
  const PhRep rep(a, t);
  CHECK(rep.initial().sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rep.exit_rates()(0) == doctest::Approx(1.0));
  CHECK(rep.exit_rates()(1) == doctest::Approx(3.0));

  Vector bad_alpha(2);
  bad_alpha << 0.7, 0.4;
  CHECK_THROWS_AS(PhRep(bad_alpha, t), mmph::ValidationError);

  Matrix bad_diag = t;
  bad_diag(0, 0) = 0.0;
  CHECK_THROWS_AS(PhRep(a, bad_diag), mmph::ValidationError);

  Matrix pos_row = t;
  pos_row(0, 1) = 3.0;  // row sum above zero
  CHECK_THROWS_AS(PhRep(a, pos_row), mmph::ValidationError);
}

TEST_CASE("ph density closed forms") {
  const PhRep expo = exponential_rep(1.0);
  CHECK(expo.density(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  const PhRep erlang2 = erlang_rep(2, 1.0);
  CHECK(erlang2.density(2.0) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(expo.density(-0.5), mmph::ValidationError);
}

TEST_CASE("ph density integrates to one") {
  mmph::RngStream rng(100);
  const PhRep rep = oracles::random_ph(4, rng);
  const double ymax = 40.0 * rep.mean();
  const double body = oracles::integrate([&](double y) { return rep.density(y); }, ymax);
  const double tail =
      rep.initial().transpose() * mmph::mat_exp(rep.sub_intensity() * ymax) *
      Vector::Ones(4);
  CHECK(body + tail == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("ph cdf") {
  const PhRep expo = exponential_rep(1.0);
  CHECK(expo.cdf(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(expo.cdf(0.0) == doctest::Approx(0.0));

  mmph::RngStream rng(101);
  const PhRep rep = oracles::random_ph(3, rng);
  CHECK(rep.cdf(0.0) == doctest::Approx(0.0));

  // Monte Carlo cdf oracle at y = 5
  const mmph::JointModel model(rep, 3);
  const int m = 1000000;
  auto data = mmph::generate_dataset(model, m, 555);
  int below = 0;
  for (const auto& s : data) below += s.y < 5.0 ? 1 : 0;
  const double emp = static_cast<double>(below) / m;
  const double f = rep.cdf(5.0);
  const double se = std::sqrt(f * (1.0 - f) / m);
  CHECK(std::abs(emp - f) < 3.0 * se + 1e-9);

  // nondecreasing, tends to one
  double prev = 0.0;
  for (double y = 0.0; y <= 8.0; y += 0.25) {
    const double cur = rep.cdf(y);
    CHECK(cur >= prev - 1e-12);
    prev = cur;
  }
  CHECK(1.0 - rep.cdf(50.0 * rep.mean()) < 1e-8);
}

TEST_CASE("ph mean and sojourn vector") {
  CHECK(exponential_rep(2.0).mean() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(erlang_rep(3, 1.0).mean() == doctest::Approx(3.0).epsilon(1e-12));
  const PhRep expo = exponential_rep(3.0);
  CHECK(expo.mean() == doctest::Approx(-1.0 / expo.sub_intensity()(0, 0)));
}

TEST_CASE("dph pmf and cdf") {
  Vector a(1);
  a << 1.0;
  Matrix q(1, 1);
  q << 0.5;
  const DphRep geo(a, q);
  CHECK(geo.pmf(1) == doctest::Approx(0.5));
  CHECK(geo.pmf(3) == doctest::Approx(0.125));
  CHECK_THROWS_AS(geo.pmf(0), mmph::ValidationError);

  mmph::RngStream rng(102);
  Vector a2(2);
  a2 << 0.6, 0.4;
  Matrix q2(2, 2);
  q2 << 0.3, 0.25, 0.1, 0.5;
  const DphRep rep(a2, q2);

  // total probability
  double total = 0.0;
  for (int n = 1; n <= 200; ++n) total += rep.pmf(n);
  const double tail = 1.0 - rep.cdf(200);
  CHECK(total + tail == doctest::Approx(1.0).epsilon(1e-12));

  // exhaustive path enumeration to depth 12
  for (int n = 1; n <= 12; ++n) {
    CHECK(rep.pmf(n) ==
          doctest::Approx(oracles::dph_pmf_by_enumeration(a2, q2, n)).epsilon(1e-12));
  }

  // pmf = cdf difference
  for (int n = 1; n <= 12; ++n) {
    CHECK(rep.pmf(n) == doctest::Approx(rep.cdf(n) - rep.cdf(n - 1)).epsilon(1e-12));
  }
}

TEST_CASE("dph mean and visits") {
  Vector a(1);
  a << 1.0;
  Matrix q(1, 1);
  q << 0.5;
  CHECK(DphRep(a, q).mean() == doctest::Approx(2.0));
  q << 0.0;
  CHECK(DphRep(a, q).mean() == doctest::Approx(1.0));
}

TEST_CASE("embedded chain") {
  const PhRep expo = exponential_rep(1.3);
  const auto chain1 = expo.embedded_chain();
  CHECK(chain1.probs(0, 0) == 0.0);
  CHECK(chain1.exit_probs(0) == doctest::Approx(1.0));

  Vector a(2);
  a << 1.0, 0.0;
  Matrix t(2, 2);
  t << -2.0, 1.0, 0.0, -3.0;
  const auto chain = PhRep(a, t).embedded_chain();
  CHECK(chain.probs(0, 1) == doctest::Approx(0.5));
  CHECK(chain.probs(1, 0) == doctest::Approx(0.0));
  CHECK(chain.exit_probs(0) == doctest::Approx(0.5));
  CHECK(chain.exit_probs(1) == doctest::Approx(1.0));

  mmph::RngStream rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    mmph::RngStream sub = rng.substream(trial);
    const PhRep rep = oracles::random_ph(4, sub);
    const auto c = rep.embedded_chain();
    const Vector rows = c.probs * Vector::Ones(4) + c.exit_probs;
    for (int i = 0; i < 4; ++i) CHECK(rows(i) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("reference fitted model reproduces its published summaries") {
  Vector alpha(4);
  alpha << 0.94, 0.06, 0.0, 0.0;
  Matrix t(4, 4);
  t << -1.21e-4, 1.66e-6, 0.0, 3.63e-5,
       0.0, -5.50e-4, 0.0, 0.0,
       8.50e-7, 4.03e-7, -3.53e-5, 0.0,
       0.0, 2.21e-6, 3.31e-5, -3.56e-5;
  const PhRep rep(alpha, t);

  const Vector sojourn = rep.sojourn_vector();
  const double expected_sojourn[] = {7817.415, 172.4597, 7633.909, 8143.15};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(sojourn(i) - expected_sojourn[i]) / expected_sojourn[i] < 0.05);
  }

  const auto chain = rep.embedded_chain();
  const DphRep jumps(rep.initial(), chain.probs);
  const Vector visits = jumps.visits_vector();
  const double expected_visits[] = {0.95, 0.10, 0.27, 0.29};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(visits(i) - expected_visits[i]) < 0.02);
  }
}
