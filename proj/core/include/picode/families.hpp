#pragma once

#include "picode/code_table.hpp"

namespace pic::fam {

/// Parameters of the analytic two-codeword family supported on weights g*l
/// and n - g*l, with n = 2*g*m + delta + 1.
struct AABParams {
  int t;
  int m;
  int g;
  int delta;
  int eps;  // +1 or -1

  int n() const { return 2 * g * m + delta + 1; }
  void validate() const;
};

/// Minimal member for a given t: (m, g, delta, eps) = (t, 2t, 2t, -1),
/// giving n = 4t^2 + 2t + 1.
AABParams default_aab_params(int t);

/// Generalized binomial binom(x, k) for rational upper argument, as the
/// falling factorial x(x-1)...(x-k+1) / k!.
comb::Rational generalized_binomial(const comb::Rational& x, int k);

/// Squared codeword coefficients f(l)^2, l = 0..m, as exact rationals.
/// They sum to 1.
std::vector<comb::Rational> aab_f_squared(const AABParams& p);

CodewordTable aab_code(const AABParams& p);

/// Zero-extends every composition of the table to new_q_p parts.
CodewordTable pad(const CodewordTable& table, int new_q_p);

/// The exact (n, t) = (7, 1) code: alpha_0 = alpha_7 = sqrt(15)/10,
/// alpha_2 = -alpha_5 = sqrt(35)/10, beta_i = (-1)^i alpha_{7-i}.
CodewordTable analytic_7qubit();

struct BlockLengths {
  int singleton;        // 4t + 1
  int ouyang;           // (2t+1)^2 (q_l - 1)
  int aab;              // 4t^2 + 2t + 1
  int conjectured_min;  // 3t^2 + 3t + 1
};

BlockLengths reference_block_lengths(int t, int q_l);

}  // namespace pic::fam
