#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "picode/families.hpp"
#include "picode/kl.hpp"
#include "test_util.hpp"

using namespace pic;

TEST_CASE("analytic 7-qubit code satisfies the KL conditions") {
  CodewordTable code = fam::analytic_7qubit();
  kl::KLReport report = kl::qudit_residuals(code);
  CHECK(report.cost < 1e-24);
  CHECK(report.max_abs < 1e-12);

  auto dist = kl::verify_distance(code, 1e-10);
  CHECK(dist.t == 1);
  CHECK(dist.d == 3);
}

TEST_CASE("identity count") {
  CHECK(kl::identity_count({7, 2, 2, 1}) == 21);  // 2(2t+1)^2 + 3
  CHECK(kl::identity_count({11, 2, 2, 2}) == 53);
  CodewordTable code = fam::analytic_7qubit();
  CHECK(kl::qudit_residuals(code).identity_count == 21);
}

TEST_CASE("degenerate tables") {
  // Two identical unit rows: off-diagonal Gram residual of modulus 1.
  std::mt19937_64 rng(3);
  CodewordTable table = testutil::random_table({7, 2, 2, 1}, rng);
  table.row(1) = table.row(0);
  kl::KLReport report = kl::qudit_residuals(table);
  CHECK(std::abs(report.c1[0][1]) == doctest::Approx(1.0).epsilon(1e-12));

  // All-zero table: Gram residual is -I, so the C1 upper triangle
  // contributes 1 + 1 + 0 = 2 and nothing else is nonzero.
  CodewordTable zero({7, 2, 2, 1});
  CHECK(kl::cost(zero) == doctest::Approx(2.0));
}

TEST_CASE("cost matches the report and reacts to perturbations") {
  CodewordTable code = fam::analytic_7qubit();
  CHECK(kl::cost(code) == kl::qudit_residuals(code).cost);

  code.row(0)[1] += 1e-3;
  CHECK(kl::cost(code) > 1e-8);
}

TEST_CASE("qubit specialization agrees with the qudit evaluation") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    int t = 1 + static_cast<int>(rng() % 2);
    int n = 4 * t + 1 + static_cast<int>(rng() % 4);
    CodewordTable table = testutil::random_table({n, 2, 2, t}, rng);
    kl::KLReport a = kl::qubit_residuals(table);
    kl::KLReport b = kl::qudit_residuals(table);
    REQUIRE(a.c2.size() == b.c2.size());
    REQUIRE(a.c3.size() == b.c3.size());
    for (std::size_t k = 0; k < a.c2.size(); ++k)
      CHECK(std::abs(a.c2[k].value - b.c2[k].value) < 1e-14);
    for (std::size_t k = 0; k < a.c3.size(); ++k)
      CHECK(std::abs(a.c3[k].value - b.c3[k].value) < 1e-14);
    CHECK(a.cost == doctest::Approx(b.cost).epsilon(1e-13));
  }
  CodewordTable qutrit = testutil::random_table({5, 3, 2, 1}, rng);
  CHECK_THROWS_AS(kl::qubit_residuals(qutrit), std::invalid_argument);
}

TEST_CASE("t = 0 reduces to orthonormality") {
  std::mt19937_64 rng(9);
  CodewordTable table = testutil::random_table({7, 2, 2, 0}, rng);
  testutil::orthonormalize_rows(table);
  CHECK(kl::qudit_residuals(table).max_abs < 1e-12);
}

TEST_CASE("row permutation leaves the cost invariant") {
  std::mt19937_64 rng(13);
  CodewordTable table = testutil::random_table({6, 2, 2, 1}, rng);
  CodewordTable swapped = table;
  std::swap(swapped.row(0), swapped.row(1));
  CHECK(kl::cost(table) == doctest::Approx(kl::cost(swapped)).epsilon(1e-13));
}

TEST_CASE("global phase and sign invariance") {
  std::mt19937_64 rng(17);
  CodewordTable table = testutil::random_table({6, 2, 2, 1}, rng);
  double base = kl::cost(table);

  CodewordTable phased = table;
  Complex phase = std::polar(1.0, 0.7321);
  for (auto& entry : phased.row(1)) entry *= phase;
  CHECK(kl::cost(phased) == doctest::Approx(base).epsilon(1e-13));

  CodewordTable flipped = fam::analytic_7qubit();
  for (auto& entry : flipped.row(0)) entry = -entry;
  CHECK(kl::cost(flipped) < 1e-24);
}

TEST_CASE("verify_distance on families and random rows") {
  auto aab2 = fam::aab_code(fam::default_aab_params(2));
  auto dist = kl::verify_distance(aab2, 1e-10);
  CHECK(dist.t == 2);
  CHECK(dist.d == 5);

  // An orthonormalized random pair is generically only a t = 0 code.
  std::mt19937_64 rng(21);
  CodewordTable table = testutil::random_table({7, 2, 2, 1}, rng);
  testutil::orthonormalize_rows(table);
  CHECK(kl::verify_distance(table, 1e-10).t == 0);
}
