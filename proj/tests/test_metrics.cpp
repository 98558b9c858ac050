#include "epfw/metrics.hpp"

#include <doctest.h>

#include <cmath>

#include "epfw/errors.hpp"
#include "epfw/rng.hpp"
#include "helpers.hpp"

using namespace epfw;

namespace {

// Plain-loop restatement of the relative-MAE formula, kept deliberately
// independent of the production expression code.
double rmae_oracle(const Vector& p, const Vector& phat, int m) {
  const Index n = p.size();
  double num = 0.0;
  for (Index k = 0; k < n; ++k) {
    num += std::abs(p[k] - phat[k]);
  }
  num /= static_cast<double>(n);
  double den = 0.0;
  for (Index i = m; i < n; ++i) {
    den += std::abs(p[i] - p[i - m]);
  }
  den /= static_cast<double>(n - m);
  return num / den;
}

Vector in_window_persistence(const Vector& p, int m) {
  Vector phat = p;
  for (Index k = m; k < p.size(); ++k) {
    phat[k] = p[k - m];
  }
  return phat;
}

}  // namespace

TEST_CASE("mae hand values") {
  Vector y(2);
  y << 1, 2;
  Vector yhat(2);
  yhat << 2, 4;
  CHECK(mae(y, yhat) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(mae(y, y) == 0.0);
}

TEST_CASE("rmse hand values") {
  Vector y(2);
  y << 0, 0;
  Vector yhat(2);
  yhat << 3, 4;
  CHECK(rmse(y, yhat) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
  CHECK(rmse(y, y) == 0.0);
}

TEST_CASE("metric input validation") {
  Vector a(2);
  a << 1, 2;
  Vector b(3);
  b << 1, 2, 3;
  CHECK_THROWS_AS(mae(a, b), DataError);
  CHECK_THROWS_AS(rmse(Vector(), Vector()), DataError);
  Vector bad(2);
  bad << 1, std::nan("");
  CHECK_THROWS_AS(mae(a, bad), DataError);
  Vector inf(2);
  inf << 1, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(rmse(inf, a), DataError);
}

TEST_CASE("naive forecast shifts by the seasonal length") {
  SUBCASE("constant series predicts itself") {
    const Vector c = Vector::Constant(72, 41.5);
    const Vector pred = naive_forecast(c, 24);
    CHECK(pred.size() == 48);
    CHECK((pred.array() == 41.5).all());
  }
  SUBCASE("24-periodic series gives zero error") {
    Vector s(96);
    for (Index i = 0; i < s.size(); ++i) {
      s[i] = std::sin(2.0 * M_PI * static_cast<double>(i % 24) / 24.0);
    }
    const Vector pred = naive_forecast(s, 24);
    CHECK(mae(s.tail(72), pred) == 0.0);
  }
  SUBCASE("one-day window returns the pre-context verbatim") {
    Rng rng(7);
    const Vector ctx = test::random_vector(rng, 24, 10.0, 90.0);
    Vector with_context(48);
    with_context << ctx, test::random_vector(rng, 24, 10.0, 90.0);
    const Vector pred = naive_forecast(with_context, 24);
    CHECK(pred.size() == 24);
    CHECK((pred - ctx).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("insufficient context is an error") {
    CHECK_THROWS_AS(naive_forecast(Vector::Zero(24), 24), DataError);
    CHECK_THROWS_AS(naive_forecast(Vector::Zero(10), 0), DataError);
  }
}

TEST_CASE("rmae matches the loop oracle on random windows") {
  Rng rng(123);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector p = test::random_vector(rng, 400, 5.0, 120.0);
    const Vector phat = test::random_vector(rng, 400, 5.0, 120.0);
    CHECK(rmae(p, phat, 24) ==
          doctest::Approx(rmae_oracle(p, phat, 24)).epsilon(1e-13));
    CHECK(rmae(p, phat, 168) ==
          doctest::Approx(rmae_oracle(p, phat, 168)).epsilon(1e-13));
  }
}

TEST_CASE("rmae of in-window persistence is (N-m)/N") {
  Rng rng(5150);
  for (int rep = 0; rep < 5; ++rep) {
    const Index n = 2184;
    const int m = 24;
    const Vector p = test::random_vector(rng, n, 20.0, 200.0);
    const double expected =
        static_cast<double>(n - m) / static_cast<double>(n);
    const double got = rmae(p, in_window_persistence(p, m), m);
    CHECK(std::abs(got - expected) < 1e-10);
  }
}

TEST_CASE("rmae degenerate and undersized windows") {
  Vector periodic(72);
  for (Index i = 0; i < periodic.size(); ++i) {
    periodic[i] = static_cast<double>(i % 24);
  }
  CHECK_THROWS_WITH_AS(rmae(periodic, periodic, 24),
                       doctest::Contains("naive baseline degenerate"),
                       DataError);
  const Vector p = Vector::LinSpaced(24, 0.0, 23.0);
  CHECK_THROWS_AS(rmae(p, p, 24), DataError);
  Rng rng(9);
  const Vector q = test::random_vector(rng, 100, 0.0, 1.0);
  CHECK(rmae(q, q, 24) == 0.0);
}

TEST_CASE("metric invariances") {
  Rng rng(77);
  for (int rep = 0; rep < 50; ++rep) {
    const Index n = 30 + static_cast<Index>(rng.uniform_int(0, 200));
    const Vector p = test::random_vector(rng, n, -50.0, 150.0);
    const Vector phat = test::random_vector(rng, n, -50.0, 150.0);
    const double c = rng.uniform(-100.0, 100.0);
    const double a = rng.uniform(0.1, 10.0);

    CHECK(rmse(p, phat) >= mae(p, phat));
    CHECK(std::abs(mae(p, phat) -
                   mae((p.array() + c).matrix(), (phat.array() + c).matrix())) <
          1e-12 * (1.0 + mae(p, phat)));
    CHECK(std::abs(rmse(p, phat) - rmse((p.array() + c).matrix(),
                                        (phat.array() + c).matrix())) <
          1e-12 * (1.0 + rmse(p, phat)));
    CHECK(mae(a * p, a * phat) ==
          doctest::Approx(a * mae(p, phat)).epsilon(1e-12));
    CHECK(rmse(a * p, a * phat) ==
          doctest::Approx(a * rmse(p, phat)).epsilon(1e-12));
    if (n > 24) {
      CHECK(std::abs(rmae(a * p, a * phat, 24) - rmae(p, phat, 24)) < 1e-12);
    }
  }
}

TEST_CASE("forecast pair wrappers") {
  Rng rng(31);
  ForecastPair pair;
  pair.actual = test::random_vector(rng, 48, 10.0, 80.0);
  pair.predicted = test::random_vector(rng, 48, 10.0, 80.0);
  CHECK(mae(pair) == mae(pair.actual, pair.predicted));
  CHECK(rmse(pair) == rmse(pair.actual, pair.predicted));
  CHECK(rmae(pair, 24) == rmae(pair.actual, pair.predicted, 24));
}
