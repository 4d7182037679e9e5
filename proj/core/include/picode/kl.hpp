#pragma once

#include <optional>

#include "picode/code_table.hpp"

namespace pic::kl {

/// One C2 or C3 residual, labeled by the codeword pair and the ordered
/// deletion pair (mu, nu) given as indices into the error composition set.
struct PairResidual {
  int i, j;
  int mu_idx, nu_idx;
  Complex value;
};

struct KLReport {
  std::vector<std::vector<Complex>> c1;  // Gram residual <c_i|c_j> - delta_ij
  std::vector<PairResidual> c2;          // one per unordered {i,j}, i<j
  std::vector<PairResidual> c3;          // one per pair i>j
  double max_abs = 0;
  double cost = 0;
  int identity_count = 0;

  const Complex* find_c2(int i, int j, int mu_idx, int nu_idx) const;
  const Complex* find_c3(int i, int j, int mu_idx, int nu_idx) const;
};

/// Number of summed identities; for q_p = q_l = 2 this is 2(2t+1)^2 + 3.
int identity_count(const CodeParams& p);

/// Knill-Laflamme residuals for a qudit PI code, evaluated against a
/// precomputed TransitionTensor (which must match n, q_p, t).
KLReport qudit_residuals(const CodewordTable& table,
                         const comb::TransitionTensor& tensor);
KLReport qudit_residuals(const CodewordTable& table);

/// Qubit specialization using the b_{a,b,j} coefficients directly;
/// requires q_p = 2.
KLReport qubit_residuals(const CodewordTable& table);

/// Sum of squared residual moduli over all identities.
double cost(const CodewordTable& table);

struct DistanceReport {
  int t;  // largest weight passing, -1 when even t = 0 fails
  int d;  // 2t + 1
  double max_abs_at_t;
};

/// Evaluates residuals for t' = 0, 1, ... while n >= 2t' and returns the
/// largest t' with max_abs <= tol.
DistanceReport verify_distance(const CodewordTable& table, double tol);

}  // namespace pic::kl
