#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "picode/combinatorics.hpp"

using namespace pic::comb;

TEST_CASE("composition enumeration order and counts") {
  CompositionSet s22(2, 2);
  REQUIRE(s22.size() == 3);
  CHECK(s22.at(0).parts() == std::vector<int>{2, 0});
  CHECK(s22.at(1).parts() == std::vector<int>{1, 1});
  CHECK(s22.at(2).parts() == std::vector<int>{0, 2});
  // For q = 2 the canonical index equals the second entry.
  for (std::size_t k = 0; k < s22.size(); ++k)
    CHECK(s22.at(k)[1] == static_cast<int>(k));

  CompositionSet s03(0, 3);
  REQUIRE(s03.size() == 1);
  CHECK(s03.at(0).parts() == std::vector<int>{0, 0, 0});

  CompositionSet s69(6, 9);
  CHECK(s69.size() == 3003);
  CHECK(composition_count(6, 9) == 3003);
}

TEST_CASE("index round trip") {
  for (int n = 0; n <= 12; ++n) {
    for (int q = 1; q <= 5; ++q) {
      CompositionSet set(n, q);
      for (std::size_t k = 0; k < set.size(); ++k)
        CHECK(set.index_of(set.at(k)) == static_cast<int>(k));
    }
  }
}

TEST_CASE("multinomial values") {
  CHECK(multinomial(5, Composition({5, 0, 0})) == 1);
  CHECK(multinomial(7, Composition({3, 4})) == 35);
  CHECK(multinomial(4, Composition({2, 1, 1})) == 12);
  CHECK_THROWS_AS(multinomial(5, Composition({3, 4})), std::invalid_argument);
}

TEST_CASE("multinomials sum to q^n") {
  for (int n = 0; n <= 10; ++n) {
    for (int q = 1; q <= 4; ++q) {
      CompositionSet set(n, q);
      BigInt total = 0;
      for (const auto& lambda : set.all()) total += multinomial(n, lambda);
      BigInt expect = 1;
      for (int k = 0; k < n; ++k) expect *= q;
      CHECK(total == expect);
    }
  }
}

TEST_CASE("transition coefficient examples") {
  // t = 0: the ratio collapses to binom(n,lambda)/binom(n,lambda) = 1.
  CHECK(transition_coeff(5, 0, Composition({3, 2}), Composition({0, 0}),
                         Composition({0, 0})) == doctest::Approx(1.0));

  double v = transition_coeff(7, 1, Composition({4, 3}), Composition({0, 2}),
                              Composition({2, 0}));
  CHECK(v == doctest::Approx(std::sqrt(5.0) / 7.0).epsilon(1e-12));

  // lambda - mu has a negative entry.
  CHECK(transition_coeff(7, 1, Composition({7, 0}), Composition({0, 2}),
                         Composition({2, 0})) == 0.0);
  CHECK_THROWS_AS(
      transition_coeff(7, 1, Composition({4, 3}), Composition({0, 1, 1}),
                       Composition({2, 0})),
      std::invalid_argument);
}

TEST_CASE("transition coefficient symmetry under (mu,nu) swap") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    int q = 2 + static_cast<int>(rng() % 2);
    int t = 1 + static_cast<int>(rng() % 2);
    int n = 4 * t + 1 + static_cast<int>(rng() % 6);
    CompositionSet lambdas(n, q), errors(2 * t, q);
    const auto& lambda = lambdas.at(rng() % lambdas.size());
    const auto& mu = errors.at(rng() % errors.size());
    const auto& nu = errors.at(rng() % errors.size());

    std::vector<int> shifted(lambda.parts());
    bool ok = true;
    for (int k = 0; k < q; ++k) {
      shifted[k] += nu[k] - mu[k];
      if (shifted[k] < 0) ok = false;
    }
    if (!ok) continue;
    double a = transition_coeff(n, t, lambda, mu, nu);
    double b = transition_coeff(n, t, Composition(shifted), nu, mu);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("log-space and exact-rational binomial ratios agree") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int q = 2 + static_cast<int>(rng() % 3);
    int t = 1 + static_cast<int>(rng() % 3);
    int n = 4 * t + 1 + static_cast<int>(rng() % (60 - 4 * t));
    CompositionSet lambdas(n, q), errors(2 * t, q);
    const auto& lambda = lambdas.at(rng() % lambdas.size());
    const auto& mu = errors.at(rng() % errors.size());

    Rational exact = transition_ratio_exact(n, t, lambda, mu);
    std::vector<int> diff(lambda.parts());
    bool neg = false;
    for (int k = 0; k < q; ++k) {
      diff[k] -= mu[k];
      if (diff[k] < 0) neg = true;
    }
    if (neg) {
      CHECK(exact == 0);
      continue;
    }
    double log_ratio = log_multinomial(n - 2 * t, Composition(diff)) -
                       log_multinomial(n, lambda);
    CHECK(std::exp(log_ratio) ==
          doctest::Approx(static_cast<double>(exact)).epsilon(1e-12));
  }
}

TEST_CASE("transition tensor matches scalar evaluation") {
  TransitionTensor tensor(7, 2, 1);
  const auto& lambdas = tensor.lambdas();
  const auto& errors = tensor.errors();
  CHECK(errors.size() == 3);
  for (std::size_t mi = 0; mi < errors.size(); ++mi) {
    for (std::size_t ni = 0; ni < errors.size(); ++ni) {
      for (const auto& entry : tensor.pair(static_cast<int>(mi),
                                           static_cast<int>(ni))) {
        double direct = transition_coeff(7, 1, lambdas.at(entry.lambda_idx),
                                         errors.at(mi), errors.at(ni));
        CHECK(entry.coeff == doctest::Approx(direct).epsilon(1e-13));
        CHECK(entry.coeff >= 0.0);
        CHECK(entry.coeff <= 1.0);
      }
    }
  }
}
