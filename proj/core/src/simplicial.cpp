#include "picode/simplicial.hpp"

#include <cmath>

namespace pic::simp {

void RegionSpec::validate() const {
  if (q < 3) throw std::invalid_argument("need q >= 3");
  if (b < 1 || l_max < 0) throw std::invalid_argument("need b >= 1, l_max >= 0");
  if (q * l_max < b || 2 * l_max > b)
    throw std::invalid_argument("need b/q <= l_max <= b/2");
}

int LVector::sum() const {
  int s = 0;
  for (int e : entries) s += e;
  return s;
}

std::vector<LVector> Region::flattened() const {
  std::vector<LVector> out;
  for (const auto& g : by_residue) out.insert(out.end(), g.begin(), g.end());
  return out;
}

std::size_t Region::size() const {
  std::size_t s = 0;
  for (const auto& g : by_residue) s += g.size();
  return s;
}

namespace {

void enumerate_residue(const RegionSpec& spec, int residue, int pos,
                       std::vector<int>* cur, int sum,
                       std::vector<LVector>* out) {
  const int len = spec.q - 1;
  if (pos == len) {
    out->push_back(LVector{*cur, residue});
    return;
  }
  for (int v = residue; v <= spec.l_max && sum + v + spec.l_max <= spec.b;
       v += spec.q) {
    cur->push_back(v);
    enumerate_residue(spec, residue, pos + 1, cur, sum + v, out);
    cur->pop_back();
  }
}

}  // namespace

Region enumerate_region(const RegionSpec& spec) {
  spec.validate();
  Region region{spec, std::vector<std::vector<LVector>>(
                          static_cast<std::size_t>(spec.q))};
  for (int r = 0; r < spec.q; ++r) {
    std::vector<int> cur;
    enumerate_residue(spec, r, 0, &cur, 0,
                      &region.by_residue[static_cast<std::size_t>(r)]);
  }
  // Re-check the pairwise constraint on the emitted set.
  const auto all = region.flattened();
  for (const auto& l : all) {
    const int s = l.sum();
    for (const auto& lp : all)
      for (int e : lp.entries)
        if (s + e > spec.b)
          throw std::logic_error("region violates the pairwise constraint");
  }
  return region;
}

comb::Composition composition_of(const LVector& l, int j, int g, int n) {
  const int q = static_cast<int>(l.entries.size()) + 1;
  if (j < 0 || j >= q) throw std::invalid_argument("vertex index out of range");
  const int bulk = n - g * l.sum();
  if (bulk < 0) throw std::invalid_argument("negative bulk entry");
  std::vector<int> parts;
  parts.reserve(static_cast<std::size_t>(q));
  for (int k = 0; k < j; ++k) parts.push_back(g * l.entries[static_cast<std::size_t>(k)]);
  parts.push_back(bulk);
  for (int k = j; k < q - 1; ++k) parts.push_back(g * l.entries[static_cast<std::size_t>(k)]);
  return comb::Composition(parts);
}

namespace {

// Multinomial of (n; parts - mu), zero when any entry goes negative.
comb::BigInt shifted_multinomial(int n, const comb::Composition& c,
                                 const comb::Composition& mu) {
  std::vector<int> parts(c.parts());
  for (std::size_t k = 0; k < parts.size(); ++k) {
    parts[k] -= mu[k];
    if (parts[k] < 0) return 0;
  }
  return comb::multinomial(n, comb::Composition(parts));
}

}  // namespace

LinearProgram assemble_lp(int t, int q_l, const Region& region, int g,
                          int delta) {
  const RegionSpec& spec = region.spec;
  const int q = spec.q;
  if (q_l > q) throw std::invalid_argument("need q_l <= q");
  const int n = g * spec.b + delta + 1;
  const auto vars = region.flattened();

  LinearProgram lp;
  lp.num_vars = static_cast<int>(vars.size());

  comb::CompositionSet mus(2 * t, q);
  for (std::size_t mi = 0; mi < mus.size(); ++mi) {
    const comb::Composition& mu = mus.at(mi);
    for (int i = 1; i < q_l; ++i) {
      for (int j = 0; j < i; ++j) {
        std::vector<Rational> row;
        row.reserve(vars.size());
        bool nonzero = false;
        for (const auto& l : vars) {
          const int r = l.residue;
          const auto lam_r = composition_of(l, r, g, n);
          const auto lam_i = composition_of(l, ((r - i) % q + q) % q, g, n);
          const auto lam_j = composition_of(l, ((r - j) % q + q) % q, g, n);
          const comb::BigInt num = shifted_multinomial(n - 2 * t, lam_i, mu) -
                                   shifted_multinomial(n - 2 * t, lam_j, mu);
          Rational c(num, comb::multinomial(n, lam_r));
          if (c != 0) nonzero = true;
          row.push_back(std::move(c));
        }
        if (nonzero) {
          lp.rows.push_back(std::move(row));
          lp.rhs.push_back(0);
        }
      }
    }
  }
  // Normalization.
  lp.rows.emplace_back(vars.size(), Rational(1));
  lp.rhs.push_back(1);
  return lp;
}

std::optional<std::vector<Rational>> solve_feasibility(const LinearProgram& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  // Phase-1 tableau with one artificial per row; Bland's rule throughout.
  std::vector<std::vector<Rational>> T(static_cast<std::size_t>(m));
  std::vector<Rational> b(lp.rhs);
  for (int i = 0; i < m; ++i) {
    T[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(n + m), 0);
    for (int j = 0; j < n; ++j)
      T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          lp.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (b[static_cast<std::size_t>(i)] < 0) {
      for (auto& v : T[static_cast<std::size_t>(i)]) v = -v;
      b[static_cast<std::size_t>(i)] = -b[static_cast<std::size_t>(i)];
    }
    T[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = 1;
  }
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  // Reduced costs for min sum(artificials); c_B = 1 for every artificial,
  // so d_j = c_j - sum_i T[i][j].
  std::vector<Rational> d(static_cast<std::size_t>(n + m), 0);
  for (int j = 0; j < n + m; ++j) {
    Rational s = (j >= n) ? Rational(1) : Rational(0);
    for (int i = 0; i < m; ++i)
      s -= T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    d[static_cast<std::size_t>(j)] = s;
  }
  Rational obj = 0;
  for (int i = 0; i < m; ++i) obj -= b[static_cast<std::size_t>(i)];

  while (true) {
    int pivot_col = -1;
    for (int j = 0; j < n + m; ++j)
      if (d[static_cast<std::size_t>(j)] < 0) {
        pivot_col = j;
        break;
      }
    if (pivot_col < 0) break;
    int pivot_row = -1;
    Rational best_ratio = 0;
    for (int i = 0; i < m; ++i) {
      const Rational& a = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(pivot_col)];
      if (a <= 0) continue;
      Rational ratio = b[static_cast<std::size_t>(i)] / a;
      if (pivot_row < 0 || ratio < best_ratio ||
          (ratio == best_ratio &&
           basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(pivot_row)])) {
        pivot_row = i;
        best_ratio = ratio;
      }
    }
    if (pivot_row < 0)
      throw std::logic_error("phase-1 simplex unbounded");
    // Pivot.
    auto& prow = T[static_cast<std::size_t>(pivot_row)];
    const Rational piv = prow[static_cast<std::size_t>(pivot_col)];
    for (auto& v : prow) v /= piv;
    b[static_cast<std::size_t>(pivot_row)] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == pivot_row) continue;
      const Rational f = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(pivot_col)];
      if (f == 0) continue;
      for (int j = 0; j < n + m; ++j)
        T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
            f * prow[static_cast<std::size_t>(j)];
      b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(pivot_row)];
    }
    const Rational fd = d[static_cast<std::size_t>(pivot_col)];
    for (int j = 0; j < n + m; ++j)
      d[static_cast<std::size_t>(j)] -= fd * prow[static_cast<std::size_t>(j)];
    obj -= fd * b[static_cast<std::size_t>(pivot_row)];
    basis[static_cast<std::size_t>(pivot_row)] = pivot_col;
  }

  if (obj != 0) return std::nullopt;  // artificials cannot all reach zero
  std::vector<Rational> x(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] < n)
      x[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] =
          b[static_cast<std::size_t>(i)];
  return x;
}

namespace {

int rounded_lmax(const Rational& ratio, int b) {
  // round half up
  Rational v = ratio * b + Rational(1, 2);
  comb::BigInt fl = boost::multiprecision::numerator(v) /
                    boost::multiprecision::denominator(v);
  return static_cast<int>(fl);
}

}  // namespace

std::optional<SimplicialSolution> solve_at_b(int t, int q, int q_l, int b,
                                             const Rational& ratio) {
  if (ratio < Rational(1, q) || ratio > Rational(1, 2))
    throw std::invalid_argument("ratio must lie in [1/q, 1/2]");
  const int l_max = rounded_lmax(ratio, b);
  if (q * l_max < b || 2 * l_max > b) return std::nullopt;
  RegionSpec spec{q, b, l_max};
  Region region = enumerate_region(spec);
  if (region.size() == 0) return std::nullopt;
  const int g = 2 * t, delta = 2 * t;
  LinearProgram lp = assemble_lp(t, q_l, region, g, delta);
  auto x = solve_feasibility(lp);
  if (!x) return std::nullopt;
  SimplicialSolution sol;
  sol.spec = spec;
  sol.t = t;
  sol.g = g;
  sol.delta = delta;
  sol.n = g * b + delta + 1;
  sol.support = region.flattened();
  sol.f_sq = std::move(*x);
  return sol;
}

std::optional<SimplicialSolution> min_b_search(int t, int q, int q_l,
                                               const Rational& ratio,
                                               int b_limit) {
  for (int b = 1; b <= b_limit; ++b) {
    auto sol = solve_at_b(t, q, q_l, b, ratio);
    if (sol) return sol;
  }
  return std::nullopt;
}

CodewordTable emit_codewords(const SimplicialSolution& sol, int q_l) {
  const int q = sol.spec.q;
  if (q_l > q) throw std::invalid_argument("need q_l <= q");
  CodewordTable table(CodeParams{sol.n, q, q_l, sol.t});
  comb::CompositionSet lambdas(sol.n, q);
  const double two_pi = 2.0 * M_PI;
  for (int i = 0; i < q_l; ++i) {
    for (int j = 0; j < q; ++j) {
      const Complex omega =
          std::polar(1.0, two_pi * i * j / static_cast<double>(q));
      for (std::size_t v = 0; v < sol.support.size(); ++v) {
        const LVector& l = sol.support[v];
        if (((i + j) % q) != l.residue) continue;
        const double f = std::sqrt(static_cast<double>(sol.f_sq[v]));
        if (f == 0.0) continue;
        const int idx = lambdas.index_of(composition_of(l, j, sol.g, sol.n));
        table.row(i)[idx] += omega * f;
      }
    }
  }
  return table;
}

double volume(int D, double b, double l_max) {
  if (D < 1 || l_max <= 0 || l_max > b)
    throw std::invalid_argument("need D >= 1, 0 < l_max <= b");
  double dfact = 1;
  for (int i = 2; i <= D; ++i) dfact *= i;
  double v = 0;
  for (int w = 0; w <= D; ++w) {
    const double h = b - (1 + w) * l_max;
    if (h <= 0) break;
    v += ((w % 2 == 0) ? 1.0 : -1.0) *
         static_cast<double>(comb::binomial(D, w)) * std::pow(h, D) / dfact;
  }
  return v;
}

namespace {

// d/dl of the clipped-hypercube volume at b = 1.
double volume_slope(int D, double l) {
  double dfact = 1;
  for (int i = 2; i < D; ++i) dfact *= i;
  double s = 0;
  for (int w = 0; w <= D; ++w) {
    const double h = 1.0 - (1 + w) * l;
    if (h <= 0) break;
    s -= ((w % 2 == 0) ? 1.0 : -1.0) *
         static_cast<double>(comb::binomial(D, w)) * (1 + w) *
         std::pow(h, D - 1) / dfact;
  }
  return s;
}

}  // namespace

double optimal_lmax(int D) {
  if (D < 2) throw std::invalid_argument("need D >= 2");
  const int q = D + 1;
  auto V = [&](double r) { return volume(D, 1.0, r); };

  // Breakpoints of the piecewise polynomial are at ratios 1/k; within each
  // piece the unique stationary point (if any) is found by bisecting on the
  // derivative sign.
  std::vector<double> knots;
  for (int k = q; k >= 2; --k) knots.push_back(1.0 / k);

  double best_r = knots.front();
  double best_v = V(best_r);
  auto consider = [&](double r) {
    const double v = V(r);
    if (v > best_v) {
      best_v = v;
      best_r = r;
    }
  };
  for (double r : knots) consider(r);

  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double eps = 1e-13;
    double lo = knots[k] + eps, hi = knots[k + 1] - eps;
    double slo = volume_slope(D, lo), shi = volume_slope(D, hi);
    if (slo == 0) consider(lo);
    if (shi == 0) consider(hi);
    if (slo * shi >= 0) continue;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double sm = volume_slope(D, mid);
      if (sm == 0) {
        lo = hi = mid;
        break;
      }
      if (sm * slo > 0) {
        lo = mid;
        slo = sm;
      } else {
        hi = mid;
      }
    }
    consider(0.5 * (lo + hi));
  }
  return best_r;
}

}  // namespace pic::simp
