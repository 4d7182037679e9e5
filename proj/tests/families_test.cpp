#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "picode/families.hpp"
#include "picode/kl.hpp"
#include "picode/optimizer.hpp"

using namespace pic;
using comb::Rational;

TEST_CASE("generalized binomial via falling factorials") {
  CHECK(fam::generalized_binomial(Rational(5), 2) == Rational(10));
  CHECK(fam::generalized_binomial(Rational(7, 2), 0) == Rational(1));
  // (7/2 choose 2) = (7/2)(5/2)/2 = 35/8.
  CHECK(fam::generalized_binomial(Rational(7, 2), 2) == Rational(35, 8));
  // Upper argument smaller than k in the integer case.
  CHECK(fam::generalized_binomial(Rational(1), 3) == Rational(0));
}

TEST_CASE("AAB coefficients at t = 1") {
  fam::AABParams p = fam::default_aab_params(1);
  CHECK(p.n() == 7);
  auto f_sq = fam::aab_f_squared(p);
  REQUIRE(f_sq.size() == 2);
  CHECK(f_sq[0] == Rational(3, 10));
  CHECK(f_sq[1] == Rational(7, 10));
}

TEST_CASE("AAB coefficients normalize exactly") {
  for (int t = 1; t <= 5; ++t) {
    auto f_sq = fam::aab_f_squared(fam::default_aab_params(t));
    Rational total = 0;
    for (const auto& v : f_sq) {
      CHECK(v >= 0);
      total += v;
    }
    CHECK(total == 1);
  }
}

TEST_CASE("AAB t = 1 support and distance") {
  CodewordTable code = fam::aab_code(fam::default_aab_params(1));
  // |c0> on weights 0 and 5, |c1> on weights 2 and 7 (g = 2, delta = 2).
  for (int j = 0; j <= 7; ++j) {
    bool row0 = std::abs(code.row(0)[j]) > 1e-14;
    bool row1 = std::abs(code.row(1)[j]) > 1e-14;
    CHECK(row0 == (j == 0 || j == 5));
    CHECK(row1 == (j == 2 || j == 7));
  }
  CHECK(code.is_normalized());
  CHECK(kl::qubit_residuals(code).max_abs < 1e-12);
  CHECK(kl::verify_distance(code, 1e-10).t == 1);
}

TEST_CASE("AAB block lengths and symmetries") {
  CHECK(fam::default_aab_params(2).n() == 21);
  for (int t = 1; t <= 3; ++t) {
    CodewordTable code = fam::aab_code(fam::default_aab_params(t));
    CHECK(kl::verify_distance(code, 1e-10).t == t);
    auto sym = opt::symmetry_check(code, 1e-10);
    CHECK(sym.mirror);
    CHECK(sym.phase_flip);
  }
  fam::AABParams bad = fam::default_aab_params(1);
  bad.delta = 0;  // violates delta >= 2t
  CHECK_THROWS_AS(fam::aab_code(bad), std::invalid_argument);
}

TEST_CASE("padding preserves the code") {
  CodewordTable code = fam::analytic_7qubit();
  CodewordTable padded = fam::pad(code, 3);
  CHECK(kl::qudit_residuals(padded).max_abs < 1e-12);
  CHECK(kl::verify_distance(padded, 1e-10).t == 1);

  // Identity padding.
  CodewordTable same = fam::pad(code, 2);
  for (int i = 0; i < 2; ++i)
    for (int c = 0; c < code.dim(); ++c)
      CHECK(same.row(i)[c] == code.row(i)[c]);

  CodewordTable aab4 = fam::pad(fam::aab_code(fam::default_aab_params(1)), 4);
  CHECK(kl::verify_distance(aab4, 1e-10).t == 1);

  CHECK_THROWS_AS(fam::pad(padded, 2), std::invalid_argument);
}

TEST_CASE("padded cost equals the qubit cost") {
  CodewordTable code = fam::aab_code(fam::default_aab_params(1));
  // Perturb so the cost is nonzero and the comparison is informative.
  code.row(0)[1] += 5e-2;
  double qubit_cost = kl::cost(code);
  double padded_cost = kl::cost(fam::pad(code, 3));
  CHECK(qubit_cost == doctest::Approx(padded_cost).epsilon(1e-12));
}

TEST_CASE("analytic 7-qubit values") {
  CodewordTable code = fam::analytic_7qubit();
  double s15 = std::sqrt(15.0) / 10.0, s35 = std::sqrt(35.0) / 10.0;
  CHECK(std::abs(code.row(0)[0] - Complex(s15)) < 1e-15);
  CHECK(std::abs(code.row(0)[7] - Complex(s15)) < 1e-15);
  CHECK(std::abs(code.row(0)[2] - Complex(s35)) < 1e-15);
  CHECK(std::abs(code.row(0)[5] - Complex(-s35)) < 1e-15);
  // Row norms are 1 exactly: (15 + 35 + 35 + 15)/100.
  CHECK(code.row_norm(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(code.row_norm(1) == doctest::Approx(1.0).epsilon(1e-15));
  auto sym = opt::symmetry_check(code, 1e-12);
  CHECK(sym.mirror);
  CHECK(sym.phase_flip);
}

TEST_CASE("reference block lengths") {
  auto r1 = fam::reference_block_lengths(1, 2);
  CHECK(r1.singleton == 5);
  CHECK(r1.ouyang == 9);
  CHECK(r1.aab == 7);
  CHECK(r1.conjectured_min == 7);
  CHECK(fam::reference_block_lengths(5, 2).conjectured_min == 91);
  CHECK(fam::reference_block_lengths(0, 2).singleton == 1);
}
