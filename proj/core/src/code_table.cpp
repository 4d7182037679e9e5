#include "picode/code_table.hpp"

#include <cmath>

namespace pic {

void CodeParams::validate() const {
  if (n < 2 * t || t < 0) throw std::invalid_argument("need n >= 2t >= 0");
  if (q_p < 2 || q_l < 2) throw std::invalid_argument("need q_p, q_l >= 2");
}

int CodeParams::dim() const {
  return static_cast<int>(comb::composition_count(n, q_p));
}

CodewordTable::CodewordTable(CodeParams params,
                             std::vector<std::vector<Complex>> rows)
    : params_(params), rows_(std::move(rows)) {
  params_.validate();
  if (static_cast<int>(rows_.size()) != params_.q_l)
    throw std::invalid_argument("row count must equal q_l");
  const auto d = static_cast<std::size_t>(params_.dim());
  for (const auto& r : rows_)
    if (r.size() != d)
      throw std::invalid_argument(
          "row length must equal the symmetric-subspace dimension");
}

CodewordTable::CodewordTable(CodeParams params)
    : CodewordTable(params,
                    std::vector<std::vector<Complex>>(
                        params.q_l, std::vector<Complex>(params.dim()))) {}

double CodewordTable::row_norm(int i) const {
  double s = 0;
  for (const auto& z : rows_[i]) s += std::norm(z);
  return std::sqrt(s);
}

bool CodewordTable::is_normalized(double tol) const {
  for (int i = 0; i < num_rows(); ++i)
    if (std::abs(row_norm(i) - 1.0) > tol) return false;
  return true;
}

double CodewordTable::max_imag() const {
  double m = 0;
  for (const auto& r : rows_)
    for (const auto& z : r) m = std::max(m, std::abs(z.imag()));
  return m;
}

CodewordTable CodewordTable::with_t(int t) const {
  CodeParams p = params_;
  p.t = t;
  return CodewordTable(p, rows_);
}

}  // namespace pic
