#include "picode/families.hpp"

#include <cmath>

namespace pic::fam {

void AABParams::validate() const {
  if (eps != 1 && eps != -1) throw std::invalid_argument("eps must be +-1");
  if (t < 0 || m < t) throw std::invalid_argument("need 0 <= 2t <= 2m");
  if (g < 1) throw std::invalid_argument("need g >= 1");
  if (2 * m * g >= n()) throw std::invalid_argument("need 2m < n/g");
  if (delta < 2 * t) throw std::invalid_argument("need delta >= 2t");
  if (!((g >= 2 * t && eps == -1) || (g >= 2 * t + 1 && eps == 1)))
    throw std::invalid_argument("need g >= 2t with eps=-1 or g >= 2t+1 with eps=+1");
}

AABParams default_aab_params(int t) {
  if (t < 1) throw std::invalid_argument("need t >= 1");
  return AABParams{t, t, 2 * t, 2 * t, -1};
}

comb::Rational generalized_binomial(const comb::Rational& x, int k) {
  if (k < 0) return 0;
  comb::Rational r = 1;
  for (int i = 0; i < k; ++i) {
    r *= x - i;
    r /= i + 1;
  }
  return r;
}

std::vector<comb::Rational> aab_f_squared(const AABParams& p) {
  p.validate();
  const int n = p.n();
  const comb::Rational n_over_g(n, p.g);
  const comb::Rational prefactor =
      generalized_binomial(comb::Rational(n, 2 * p.g), p.m) *
      comb::Rational(n - 2 * p.g * p.m, p.g * (p.m + 1));
  std::vector<comb::Rational> f2;
  for (int l = 0; l <= p.m; ++l) {
    f2.push_back(prefactor * comb::binomial(p.m, l) /
                 generalized_binomial(n_over_g - l, p.m + 1));
  }
  return f2;
}

CodewordTable aab_code(const AABParams& p) {
  const int n = p.n();
  CodewordTable table(CodeParams{n, 2, 2, p.t});
  const auto f2 = aab_f_squared(p);
  for (int l = 0; l <= p.m; ++l) {
    const double f = std::sqrt(static_cast<double>(f2[static_cast<std::size_t>(l)]));
    if (l % 2 == 0) {
      table.row(0)[p.g * l] += f;
      table.row(1)[n - p.g * l] += p.eps * f;
    } else {
      table.row(0)[n - p.g * l] += f;
      table.row(1)[p.g * l] += f;
    }
  }
  return table;
}

CodewordTable pad(const CodewordTable& table, int new_q_p) {
  const CodeParams& p = table.params();
  if (new_q_p < p.q_p)
    throw std::invalid_argument("pad: new_q_p must be >= q_p");
  if (new_q_p == p.q_p) return table;
  CodeParams np = p;
  np.q_p = new_q_p;
  CodewordTable out(np);
  comb::CompositionSet old_set(p.n, p.q_p);
  comb::CompositionSet new_set(p.n, new_q_p);
  for (std::size_t k = 0; k < old_set.size(); ++k) {
    std::vector<int> parts = old_set.at(k).parts();
    parts.resize(static_cast<std::size_t>(new_q_p), 0);
    const int tgt = new_set.index_of(comb::Composition(parts));
    for (int i = 0; i < p.q_l; ++i) out.row(i)[tgt] = table.row(i)[k];
  }
  return out;
}

CodewordTable analytic_7qubit() {
  const int n = 7;
  CodewordTable table(CodeParams{n, 2, 2, 1});
  const double a0 = std::sqrt(15.0) / 10.0;
  const double a2 = std::sqrt(35.0) / 10.0;
  std::vector<double> alpha(static_cast<std::size_t>(n) + 1, 0.0);
  alpha[0] = a0;
  alpha[7] = a0;
  alpha[2] = a2;
  alpha[5] = -a2;
  for (int j = 0; j <= n; ++j) {
    table.row(0)[j] = alpha[static_cast<std::size_t>(j)];
    table.row(1)[j] =
        ((j % 2 == 0) ? 1.0 : -1.0) * alpha[static_cast<std::size_t>(n - j)];
  }
  return table;
}

BlockLengths reference_block_lengths(int t, int q_l) {
  if (t < 0 || q_l < 2) throw std::invalid_argument("need t >= 0, q_l >= 2");
  return BlockLengths{4 * t + 1, (2 * t + 1) * (2 * t + 1) * (q_l - 1),
                      4 * t * t + 2 * t + 1, 3 * t * t + 3 * t + 1};
}

}  // namespace pic::fam
