#pragma once

#include <optional>

#include "picode/code_table.hpp"

namespace pic::simp {

using comb::Rational;

/// Discrete region parameters; requires b/q <= l_max <= b/2.
struct RegionSpec {
  int q;      // physical local dimension, >= 3
  int b;      // scale
  int l_max;  // shape

  void validate() const;
};

/// A point of the region: q-1 nonnegative entries, all <= l_max, with
/// sum + l_max <= b, entrywise congruent to `residue` mod q.
struct LVector {
  std::vector<int> entries;
  int residue;

  int sum() const;
  bool operator==(const LVector& o) const { return entries == o.entries; }
};

struct Region {
  RegionSpec spec;
  /// Vectors grouped by residue class r = 0..q-1.
  std::vector<std::vector<LVector>> by_residue;

  std::vector<LVector> flattened() const;
  std::size_t size() const;
};

/// Enumerates the region and re-checks the original pairwise constraint,
/// throwing std::logic_error if it ever fails.
Region enumerate_region(const RegionSpec& spec);

/// Composition with bulk entry n - g*sum(l) inserted at vertex position j
/// among the scaled entries (g l_0, ..., g l_{q-2}).
comb::Composition composition_of(const LVector& l, int j, int g, int n);

/// Linear program over x_l = |f(l)|^2 >= 0: one equality per
/// (mu of 2t, i > j in [q_l]) plus normalization sum x = 1.
struct LinearProgram {
  int num_vars = 0;
  // rows: coefficients (num_vars) and right-hand side.
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
};

struct SimplicialSolution {
  RegionSpec spec;
  int t, g, delta, n;
  std::vector<LVector> support;   // region vectors, in enumeration order
  std::vector<Rational> f_sq;     // matching |f(l)|^2, summing to 1
};

LinearProgram assemble_lp(int t, int q_l, const Region& region, int g,
                          int delta);

/// Phase-1 simplex in exact rational arithmetic (Bland's rule).
/// Returns a feasible point (x >= 0 satisfying all rows exactly) or nullopt.
std::optional<std::vector<Rational>> solve_feasibility(const LinearProgram& lp);

/// Scans b upward with l_max = round(ratio*b) (half-up), g = delta = 2t,
/// n = 2bt + 2t + 1; returns the first feasible solution.
std::optional<SimplicialSolution> min_b_search(int t, int q, int q_l,
                                               const Rational& ratio,
                                               int b_limit = 200);

/// Solves at one fixed b; nullopt when infeasible.
std::optional<SimplicialSolution> solve_at_b(int t, int q, int q_l, int b,
                                             const Rational& ratio);

CodewordTable emit_codewords(const SimplicialSolution& sol, int q_l);

/// Volume of the D-cube of edge l_max cut by sum(l) <= b - l_max.
double volume(int D, double b, double l_max);

/// The ratio l_max/b in [1/q, 1/2] (q = D+1) maximizing the volume.
double optimal_lmax(int D);

}  // namespace pic::simp
