#pragma once

#include <complex>
#include <vector>

#include "picode/combinatorics.hpp"

namespace pic {

using Complex = std::complex<double>;

struct CodeParams {
  int n;    // block length
  int q_p;  // physical local dimension
  int q_l;  // logical local dimension
  int t;    // correctable error weight, d = 2t + 1

  void validate() const;
  /// Symmetric-subspace dimension C(n + q_p - 1, q_p - 1).
  int dim() const;
};

/// Coefficient matrix alpha_{i,lambda} of a PI code, rows in canonical
/// (suffix-lex) composition order.
class CodewordTable {
 public:
  CodewordTable(CodeParams params, std::vector<std::vector<Complex>> rows);

  /// Zero-initialized table.
  explicit CodewordTable(CodeParams params);

  const CodeParams& params() const { return params_; }
  int dim() const { return static_cast<int>(rows_[0].size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<Complex>& row(int i) const { return rows_[i]; }
  std::vector<Complex>& row(int i) { return rows_[i]; }

  double row_norm(int i) const;
  /// True when every row has unit 2-norm within tol.
  bool is_normalized(double tol = 1e-12) const;
  /// Largest |imag| over all entries.
  double max_imag() const;

  /// Same coefficients reinterpreted at a different error weight t.
  CodewordTable with_t(int t) const;

 private:
  CodeParams params_;
  std::vector<std::vector<Complex>> rows_;
};

}  // namespace pic
