#pragma once

#include <cstdint>
#include <map>

#include "picode/kl.hpp"

namespace pic::opt {

enum class ParamKind {
  kComplexFree,
  kRealFree,
  kPRRestricted,      // q_p=q_l=2, odd n; free alpha_j (j even), beta_j = alpha_{n-j}
  kSymmetryEnforced,  // q_p=q_l=2; free real alpha, beta_i = (-1)^i alpha_{n-i}
  kCoefficientFixed,  // row-0 entries pinned, real-free elsewhere
};

ParamKind parse_param_kind(const std::string& name);
std::string param_kind_name(ParamKind kind);

/// A real-linear chart p -> table: entry = base + sum_k p_k * weight.
class Parametrization {
 public:
  struct Target {
    int row, col;
    Complex weight;
  };

  static Parametrization make(ParamKind kind, CodeParams params,
                              std::map<int, Complex> fixed = {});

  ParamKind kind() const { return kind_; }
  const CodeParams& params() const { return params_; }
  int num_params() const { return static_cast<int>(targets_.size()); }
  const std::vector<Target>& targets(int k) const { return targets_[k]; }
  const CodewordTable& base() const { return base_; }

  CodewordTable assemble(const std::vector<double>& p) const;

 private:
  Parametrization(ParamKind kind, CodeParams params, CodewordTable base)
      : kind_(kind), params_(params), base_(std::move(base)) {}

  ParamKind kind_;
  CodeParams params_;
  CodewordTable base_;
  std::vector<std::vector<Target>> targets_;  // one list per parameter
};

struct SearchConfig {
  int restarts = 1000;
  long max_iters = 1200000;
  double grad_tol = 1e-20;
  double cost_tol = 1e-18;
  std::uint64_t rng_seed = 0;
  bool stop_on_success = true;
  bool keep_tables = false;  // collect every converged table
  int threads = 0;  // 0: PICODE_THREADS env or hardware concurrency
};

struct SolveResult {
  CodewordTable table;
  double cost = 0;
  long iters = 0;
  bool converged = false;
  std::uint64_t seed = 0;  // the per-restart sub-seed
};

struct RestartSummary {
  int restart;
  std::uint64_t seed;
  double cost;
  long iters;
  bool converged;
};

struct MinimizeOutcome {
  SolveResult best;
  std::vector<RestartSummary> restarts;
  std::vector<CodewordTable> converged_tables;  // only with keep_tables
  int num_converged = 0;
};

/// KL residuals of an assembled table as a function of the chart parameters,
/// with analytic gradient and Jacobian.  Residual ordering: C1 upper triangle,
/// then C2 (mu, nu, i<j), then C3 (mu, nu, i>j); each complex residual
/// contributes a (real, imag) pair.
class ResidualSystem {
 public:
  explicit ResidualSystem(Parametrization chart);

  const Parametrization& chart() const { return chart_; }
  int num_params() const { return chart_.num_params(); }
  int num_residuals() const { return 2 * num_complex_; }

  void residuals(const std::vector<double>& p, std::vector<double>* r) const;
  double cost(const std::vector<double>& p) const;
  double cost_and_grad(const std::vector<double>& p,
                       std::vector<double>* grad) const;
  /// Dense Jacobian, row-major, num_residuals x num_params; also fills r.
  void jacobian(const std::vector<double>& p, std::vector<double>* r,
                std::vector<double>* jac) const;

 private:
  Parametrization chart_;
  comb::TransitionTensor tensor_;
  int num_complex_;
  // per-entry inverse of the chart: (param index, weight) pairs at (row, col)
  std::vector<std::vector<std::vector<std::pair<int, Complex>>>> entry_params_;
};

std::uint64_t per_restart_seed_mix(std::uint64_t seed, int restart);

/// One local minimization from the given start point.
SolveResult solve_from(const ResidualSystem& system, std::vector<double> p0,
                       const SearchConfig& config, std::uint64_t sub_seed);

/// Multi-restart minimization; deterministic for fixed config.
MinimizeOutcome minimize(const ResidualSystem& system,
                         const SearchConfig& config);
MinimizeOutcome minimize(const Parametrization& chart,
                         const SearchConfig& config);

std::vector<double> analytic_gradient(const ResidualSystem& system,
                                      const std::vector<double>& point);

struct MinNEntry {
  int n;
  bool found;
  double best_cost;
};

/// Runs minimize for each n in [n_lo, n_hi]; stops at the first success
/// unless full_range is set.  Block lengths incompatible with the chart
/// (even n for pr-restricted) or below the Singleton bound are skipped.
std::vector<MinNEntry> find_min_n(CodeParams templ, ParamKind kind,
                                  const SearchConfig& config, int n_lo,
                                  int n_hi, bool full_range = false);

struct GridPoint {
  double a, b;
  double cost;
  bool feasible;
};

/// Scans 0 <= a, b with a^2 + b^2 <= 1 in the given step, pinning row-0
/// entries (i, j) = (a, b), real-free elsewhere.
std::vector<GridPoint> grid_scan(int n, int t, int i, int j, double step,
                                 const SearchConfig& config);

struct SymmetryReport {
  bool mirror;
  bool phase_flip;
  double mirror_dev;
  double phase_dev;
};

/// Mirror (|beta_i| = |alpha_{n-i}|) and phase-flip
/// (beta_i = +-(-1)^i alpha_{n-i}) tests on a real two-row qubit table,
/// after canonicalizing the two global row signs.
SymmetryReport symmetry_check(const CodewordTable& table, double tol);

struct Clusters {
  int count = 0;
  std::vector<int> representatives;  // index into the input list
  std::vector<int> assignment;
};

/// Agglomerates tables equal within tol (Euclidean over all entries).
/// By default sign variants count as distinct solutions; with
/// quotient_row_signs each row's sign is first fixed so its first
/// significant entry has positive real part, merging sign-related tables.
Clusters cluster_solutions(const std::vector<CodewordTable>& tables,
                           double tol = 1e-6, bool quotient_row_signs = false);

}  // namespace pic::opt
