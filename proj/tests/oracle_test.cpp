#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "picode/families.hpp"
#include "picode/oracle.hpp"
#include "test_util.hpp"

using namespace pic;
using comb::Composition;

TEST_CASE("dicke vectors") {
  oracle::DenseState d = oracle::dicke_vector(2, 2, Composition({1, 1}));
  REQUIRE(d.amplitudes.size() == 4);
  CHECK(std::abs(d.amplitudes[1] - Complex(1 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(d.amplitudes[2] - Complex(1 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(d.amplitudes[0]) == 0.0);
  CHECK(std::abs(d.amplitudes[3]) == 0.0);

  for (int n = 1; n <= 8; ++n) {
    for (int q = 2; q <= 3; ++q) {
      comb::CompositionSet set(n, q);
      for (const auto& lambda : set.all()) {
        oracle::DenseState state = oracle::dicke_vector(n, q, lambda);
        CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("dicke states of different weight are orthogonal") {
  comb::CompositionSet set(5, 3);
  std::vector<oracle::DenseState> states;
  for (const auto& lambda : set.all())
    states.push_back(oracle::dicke_vector(5, 3, lambda));
  for (std::size_t a = 0; a < states.size(); ++a)
    for (std::size_t b = a + 1; b < states.size(); ++b)
      CHECK(std::abs(oracle::inner(states[a], states[b])) < 1e-14);
}

TEST_CASE("single deletion matches the closed-form Dicke action") {
  // <k| at any site sends |D_lambda^n> to
  // sqrt(binom(n-1, lambda - e_k)/binom(n, lambda)) |D_{lambda-e_k}^{n-1}>.
  for (int n = 2; n <= 7; ++n) {
    for (int q = 2; q <= 3; ++q) {
      comb::CompositionSet set(n, q);
      for (const auto& lambda : set.all()) {
        oracle::DenseState state = oracle::dicke_vector(n, q, lambda);
        for (int k = 0; k < q; ++k) {
          std::vector<int> reduced(lambda.parts());
          reduced[k] -= 1;
          bool valid = reduced[k] >= 0;
          for (int site = 1; site <= n; ++site) {
            oracle::DenseState out =
                oracle::apply_single_deletion(state, site, k);
            if (!valid) {
              CHECK(out.norm() < 1e-14);
              continue;
            }
            Composition target(reduced);
            double coeff = std::sqrt(
                static_cast<double>(comb::Rational(
                    comb::multinomial(n - 1, target),
                    comb::multinomial(n, lambda))));
            oracle::DenseState expect = oracle::dicke_vector(n - 1, q, target);
            double worst = 0;
            for (std::size_t a = 0; a < out.amplitudes.size(); ++a)
              worst = std::max(worst, std::abs(out.amplitudes[a] -
                                               coeff * expect.amplitudes[a]));
            CHECK(worst < 1e-13);
          }
        }
      }
    }
  }
}

TEST_CASE("deletions commute on Dicke inputs") {
  oracle::DenseState state = oracle::dicke_vector(5, 3, Composition({2, 2, 1}));
  oracle::DenseState ab = oracle::apply_single_deletion(
      oracle::apply_single_deletion(state, 2, 1), 3, 0);
  // Deleting site 4 first, then site 2, targets the same physical sites.
  oracle::DenseState ba = oracle::apply_single_deletion(
      oracle::apply_single_deletion(state, 4, 0), 2, 1);
  REQUIRE(ab.amplitudes.size() == ba.amplitudes.size());
  for (std::size_t a = 0; a < ab.amplitudes.size(); ++a)
    CHECK(std::abs(ab.amplitudes[a] - ba.amplitudes[a]) < 1e-14);
}

TEST_CASE("deletion channel is trace preserving") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 5; ++trial) {
    int n = 4, q = 3;
    oracle::DenseState state;
    state.q = q;
    state.n = n;
    state.amplitudes.resize(81);
    double norm_sq = 0;
    for (auto& amp : state.amplitudes) {
      amp = {gauss(rng), gauss(rng)};
      norm_sq += std::norm(amp);
    }
    for (auto& amp : state.amplitudes) amp /= std::sqrt(norm_sq);

    // sum_x |A_{I,x} psi|^2 = 1 for I = {1, 2}.
    double total = 0;
    for (int x0 = 0; x0 < q; ++x0) {
      for (int x1 = 0; x1 < q; ++x1) {
        oracle::DeletionSpec spec{{1, 2}, {x0, x1}};
        oracle::DenseState out = oracle::apply_kraus(state, spec);
        total += out.norm() * out.norm();
      }
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("kl residuals match the brute-force Kraus computation") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    int q_p = 2 + static_cast<int>(rng() % 2);
    int q_l = 2 + static_cast<int>(rng() % 2);
    if (q_l > q_p) q_l = q_p;
    int t = 1 + static_cast<int>(rng() % 2);
    int n = std::min(6, 2 * t + 1 + static_cast<int>(rng() % 4));
    if (n < 2 * t) continue;
    CodewordTable table = testutil::random_table({n, q_p, q_l, t}, rng);

    kl::KLReport fast = kl::qudit_residuals(table);
    kl::KLReport brute = oracle::brute_kl_residuals(table);
    REQUIRE(fast.c2.size() == brute.c2.size());
    REQUIRE(fast.c3.size() == brute.c3.size());
    for (std::size_t k = 0; k < fast.c2.size(); ++k)
      CHECK(std::abs(fast.c2[k].value - brute.c2[k].value) < 1e-12);
    for (std::size_t k = 0; k < fast.c3.size(); ++k)
      CHECK(std::abs(fast.c3[k].value - brute.c3[k].value) < 1e-12);
    for (int i = 0; i < q_l; ++i)
      for (int j = 0; j < q_l; ++j)
        CHECK(std::abs(fast.c1[i][j] - brute.c1[i][j]) < 1e-12);
  }
}

TEST_CASE("oracle on the analytic code and t = 0") {
  CodewordTable code = fam::analytic_7qubit();
  kl::KLReport report = oracle::brute_kl_residuals(code);
  CHECK(report.max_abs < 1e-12);

  // t = 0: only the Gram matrix remains.
  std::mt19937_64 rng(41);
  CodewordTable table = testutil::random_table({4, 2, 2, 0}, rng);
  kl::KLReport brute = oracle::brute_kl_residuals(table);
  kl::KLReport fast = kl::qudit_residuals(table);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(std::abs(brute.c1[i][j] - fast.c1[i][j]) < 1e-13);
}

TEST_CASE("residuals are independent of the deletion index set") {
  std::mt19937_64 rng(43);
  CodewordTable table = testutil::random_table({5, 2, 2, 1}, rng);
  kl::KLReport a = oracle::brute_kl_residuals(table, {1, 2});
  kl::KLReport b = oracle::brute_kl_residuals(table, {2, 4});
  kl::KLReport c = oracle::brute_kl_residuals(table, {3, 5});
  for (std::size_t k = 0; k < a.c2.size(); ++k) {
    CHECK(std::abs(a.c2[k].value - b.c2[k].value) < 1e-12);
    CHECK(std::abs(a.c2[k].value - c.c2[k].value) < 1e-12);
  }
  for (std::size_t k = 0; k < a.c3.size(); ++k) {
    CHECK(std::abs(a.c3[k].value - b.c3[k].value) < 1e-12);
    CHECK(std::abs(a.c3[k].value - c.c3[k].value) < 1e-12);
  }
}

TEST_CASE("dense-state cap is enforced") {
  CHECK_THROWS(oracle::dicke_vector(30, 3, Composition({10, 10, 10})));
}
