#include "picode/optimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

namespace pic::opt {

ParamKind parse_param_kind(const std::string& name) {
  if (name == "complex-free" || name == "complex") return ParamKind::kComplexFree;
  if (name == "real-free" || name == "real") return ParamKind::kRealFree;
  if (name == "pr-restricted" || name == "pr") return ParamKind::kPRRestricted;
  if (name == "symmetry-enforced" || name == "symmetry")
    return ParamKind::kSymmetryEnforced;
  if (name == "coefficient-fixed" || name == "fixed")
    return ParamKind::kCoefficientFixed;
  throw std::invalid_argument("unknown parametrization: " + name);
}

std::string param_kind_name(ParamKind kind) {
  switch (kind) {
    case ParamKind::kComplexFree: return "complex-free";
    case ParamKind::kRealFree: return "real-free";
    case ParamKind::kPRRestricted: return "pr-restricted";
    case ParamKind::kSymmetryEnforced: return "symmetry-enforced";
    case ParamKind::kCoefficientFixed: return "coefficient-fixed";
  }
  return "?";
}

Parametrization Parametrization::make(ParamKind kind, CodeParams params,
                                      std::map<int, Complex> fixed) {
  params.validate();
  const int dim = params.dim();
  CodewordTable base(params);
  Parametrization chart(kind, params, base);

  auto add_param = [&](std::vector<Target> targets) {
    chart.targets_.push_back(std::move(targets));
  };

  switch (kind) {
    case ParamKind::kComplexFree:
      for (int i = 0; i < params.q_l; ++i)
        for (int c = 0; c < dim; ++c) {
          add_param({{i, c, Complex(1, 0)}});
          add_param({{i, c, Complex(0, 1)}});
        }
      break;
    case ParamKind::kRealFree:
      for (int i = 0; i < params.q_l; ++i)
        for (int c = 0; c < dim; ++c) add_param({{i, c, Complex(1, 0)}});
      break;
    case ParamKind::kPRRestricted: {
      if (params.q_p != 2 || params.q_l != 2 || params.n % 2 == 0)
        throw std::invalid_argument(
            "pr-restricted needs q_p = q_l = 2 and odd n");
      for (int j = 0; j <= params.n; j += 2)
        add_param({{0, j, Complex(1, 0)}, {1, params.n - j, Complex(1, 0)}});
      break;
    }
    case ParamKind::kSymmetryEnforced: {
      if (params.q_p != 2 || params.q_l != 2)
        throw std::invalid_argument("symmetry-enforced needs q_p = q_l = 2");
      for (int j = 0; j <= params.n; ++j) {
        const int i = params.n - j;  // beta_i = (-1)^i alpha_{n-i}
        const double s = (i % 2 == 0) ? 1.0 : -1.0;
        add_param({{0, j, Complex(1, 0)}, {1, i, Complex(s, 0)}});
      }
      break;
    }
    case ParamKind::kCoefficientFixed: {
      for (const auto& [idx, val] : fixed) {
        if (idx < 0 || idx >= dim)
          throw std::invalid_argument("fixed index out of range");
        chart.base_.row(0)[idx] = val;
      }
      for (int i = 0; i < params.q_l; ++i)
        for (int c = 0; c < dim; ++c) {
          if (i == 0 && fixed.count(c)) continue;
          add_param({{i, c, Complex(1, 0)}});
        }
      break;
    }
  }
  return chart;
}

CodewordTable Parametrization::assemble(const std::vector<double>& p) const {
  if (static_cast<int>(p.size()) != num_params())
    throw std::invalid_argument("parameter count mismatch");
  CodewordTable table = base_;
  for (std::size_t k = 0; k < targets_.size(); ++k)
    for (const Target& tg : targets_[k])
      table.row(tg.row)[static_cast<std::size_t>(tg.col)] += p[k] * tg.weight;
  return table;
}

ResidualSystem::ResidualSystem(Parametrization chart)
    : chart_(std::move(chart)),
      tensor_(chart_.params().n, chart_.params().q_p, chart_.params().t),
      num_complex_(0) {
  const CodeParams& cp = chart_.params();
  const int K = static_cast<int>(tensor_.errors().size());
  const int npair = cp.q_l * (cp.q_l - 1) / 2;
  num_complex_ = cp.q_l * (cp.q_l + 1) / 2 + 2 * K * K * npair;

  entry_params_.assign(
      static_cast<std::size_t>(cp.q_l),
      std::vector<std::vector<std::pair<int, Complex>>>(
          static_cast<std::size_t>(cp.dim())));
  for (int k = 0; k < chart_.num_params(); ++k)
    for (const auto& tg : chart_.targets(k))
      entry_params_[static_cast<std::size_t>(tg.row)]
                   [static_cast<std::size_t>(tg.col)]
                       .emplace_back(k, tg.weight);
}

namespace {

inline int upper_index(int i, int j, int q) {
  // index of (i, j), i <= j, in row-major upper-triangle order
  return i * q - i * (i - 1) / 2 + (j - i);
}

inline int strict_pair_index(int i, int j, int q) {
  // index of (i, j), i < j, among strict pairs
  return i * q - i * (i + 1) / 2 + (j - i - 1);
}

}  // namespace

void ResidualSystem::residuals(const std::vector<double>& p,
                               std::vector<double>* r) const {
  const CodeParams& cp = chart_.params();
  const int ql = cp.q_l;
  const int K = static_cast<int>(tensor_.errors().size());
  const int npair = ql * (ql - 1) / 2;
  const int nc1 = ql * (ql + 1) / 2;
  CodewordTable table = chart_.assemble(p);
  r->assign(static_cast<std::size_t>(num_residuals()), 0.0);

  auto put = [&](int cidx, Complex v) {
    (*r)[static_cast<std::size_t>(2 * cidx)] = v.real();
    (*r)[static_cast<std::size_t>(2 * cidx) + 1] = v.imag();
  };

  for (int i = 0; i < ql; ++i)
    for (int j = i; j < ql; ++j) {
      Complex g = 0;
      for (int c = 0; c < table.dim(); ++c)
        g += std::conj(table.row(i)[static_cast<std::size_t>(c)]) *
             table.row(j)[static_cast<std::size_t>(c)];
      put(upper_index(i, j, ql), g - (i == j ? 1.0 : 0.0));
    }

  std::vector<Complex> M(static_cast<std::size_t>(ql * ql));
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b) {
      std::fill(M.begin(), M.end(), Complex(0));
      for (const auto& e : tensor_.pair(a, b))
        for (int i = 0; i < ql; ++i) {
          const Complex lhs =
              e.coeff * std::conj(table.row(i)[static_cast<std::size_t>(
                            e.lambda_idx)]);
          for (int j = 0; j < ql; ++j)
            M[static_cast<std::size_t>(i * ql + j)] +=
                lhs * table.row(j)[static_cast<std::size_t>(e.target_idx)];
        }
      const int ab = a * K + b;
      for (int i = 0; i < ql; ++i)
        for (int j = i + 1; j < ql; ++j)
          put(nc1 + ab * npair + strict_pair_index(i, j, ql),
              M[static_cast<std::size_t>(i * ql + j)]);
      for (int i = 0; i < ql; ++i)
        for (int j = 0; j < i; ++j)
          put(nc1 + K * K * npair + ab * npair + strict_pair_index(j, i, ql),
              M[static_cast<std::size_t>(i * ql + i)] -
                  M[static_cast<std::size_t>(j * ql + j)]);
    }
}

double ResidualSystem::cost(const std::vector<double>& p) const {
  std::vector<double> r;
  residuals(p, &r);
  double s = 0;
  for (double v : r) s += v * v;
  return s;
}

double ResidualSystem::cost_and_grad(const std::vector<double>& p,
                                     std::vector<double>* grad) const {
  const CodeParams& cp = chart_.params();
  const int ql = cp.q_l;
  const int dim = chart_.params().dim();
  const int K = static_cast<int>(tensor_.errors().size());
  CodewordTable table = chart_.assemble(p);

  double cost = 0;
  // Wirtinger derivative dF/d(alpha) accumulated per entry.
  std::vector<std::vector<Complex>> ga(
      static_cast<std::size_t>(ql),
      std::vector<Complex>(static_cast<std::size_t>(dim)));

  for (int i = 0; i < ql; ++i)
    for (int j = i; j < ql; ++j) {
      Complex g = 0;
      for (int c = 0; c < dim; ++c)
        g += std::conj(table.row(i)[static_cast<std::size_t>(c)]) *
             table.row(j)[static_cast<std::size_t>(c)];
      const Complex R = g - (i == j ? 1.0 : 0.0);
      cost += std::norm(R);
      const Complex Rc = std::conj(R);
      for (int c = 0; c < dim; ++c) {
        ga[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)] +=
            Rc * std::conj(table.row(i)[static_cast<std::size_t>(c)]);
        ga[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] +=
            R * std::conj(table.row(j)[static_cast<std::size_t>(c)]);
      }
    }

  std::vector<Complex> M(static_cast<std::size_t>(ql * ql));
  std::vector<Complex> W(static_cast<std::size_t>(ql * ql));
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b) {
      std::fill(M.begin(), M.end(), Complex(0));
      for (const auto& e : tensor_.pair(a, b))
        for (int i = 0; i < ql; ++i) {
          const Complex lhs =
              e.coeff * std::conj(table.row(i)[static_cast<std::size_t>(
                            e.lambda_idx)]);
          for (int j = 0; j < ql; ++j)
            M[static_cast<std::size_t>(i * ql + j)] +=
                lhs * table.row(j)[static_cast<std::size_t>(e.target_idx)];
        }
      std::fill(W.begin(), W.end(), Complex(0));
      for (int i = 0; i < ql; ++i)
        for (int j = i + 1; j < ql; ++j) {
          const Complex R = M[static_cast<std::size_t>(i * ql + j)];
          cost += std::norm(R);
          W[static_cast<std::size_t>(i * ql + j)] += std::conj(R);
        }
      for (int i = 0; i < ql; ++i)
        for (int j = 0; j < i; ++j) {
          const Complex R = M[static_cast<std::size_t>(i * ql + i)] -
                            M[static_cast<std::size_t>(j * ql + j)];
          cost += std::norm(R);
          W[static_cast<std::size_t>(i * ql + i)] += std::conj(R);
          W[static_cast<std::size_t>(j * ql + j)] -= std::conj(R);
        }
      for (const auto& e : tensor_.pair(a, b))
        for (int i = 0; i < ql; ++i) {
          const Complex ai_c =
              std::conj(table.row(i)[static_cast<std::size_t>(e.lambda_idx)]);
          for (int j = 0; j < ql; ++j) {
            const Complex w = W[static_cast<std::size_t>(i * ql + j)];
            if (w == Complex(0)) continue;
            ga[static_cast<std::size_t>(j)]
              [static_cast<std::size_t>(e.target_idx)] += w * e.coeff * ai_c;
            ga[static_cast<std::size_t>(i)]
              [static_cast<std::size_t>(e.lambda_idx)] +=
                std::conj(w) * e.coeff *
                std::conj(table.row(j)[static_cast<std::size_t>(e.target_idx)]);
          }
        }
    }

  grad->assign(static_cast<std::size_t>(num_params()), 0.0);
  for (int k = 0; k < num_params(); ++k) {
    double g = 0;
    for (const auto& tg : chart_.targets(k))
      g += 2.0 * (ga[static_cast<std::size_t>(tg.row)]
                    [static_cast<std::size_t>(tg.col)] *
                  tg.weight)
                     .real();
    (*grad)[static_cast<std::size_t>(k)] = g;
  }
  return cost;
}

void ResidualSystem::jacobian(const std::vector<double>& p,
                              std::vector<double>* r,
                              std::vector<double>* jac) const {
  const CodeParams& cp = chart_.params();
  const int ql = cp.q_l;
  const int dim = chart_.params().dim();
  const int K = static_cast<int>(tensor_.errors().size());
  const int P = num_params();
  const int npair = ql * (ql - 1) / 2;
  const int nc1 = ql * (ql + 1) / 2;
  CodewordTable table = chart_.assemble(p);

  r->assign(static_cast<std::size_t>(num_residuals()), 0.0);
  jac->assign(static_cast<std::size_t>(num_residuals()) *
                  static_cast<std::size_t>(P),
              0.0);

  auto put = [&](int cidx, Complex v) {
    (*r)[static_cast<std::size_t>(2 * cidx)] = v.real();
    (*r)[static_cast<std::size_t>(2 * cidx) + 1] = v.imag();
  };
  auto put_d = [&](int cidx, int k, Complex dv) {
    (*jac)[static_cast<std::size_t>(2 * cidx) * P + k] += dv.real();
    (*jac)[(static_cast<std::size_t>(2 * cidx) + 1) * P + k] += dv.imag();
  };

  for (int i = 0; i < ql; ++i)
    for (int j = i; j < ql; ++j) {
      const int cidx = upper_index(i, j, ql);
      Complex g = 0;
      for (int c = 0; c < dim; ++c) {
        const Complex ai = table.row(i)[static_cast<std::size_t>(c)];
        const Complex aj = table.row(j)[static_cast<std::size_t>(c)];
        g += std::conj(ai) * aj;
        for (const auto& [k, w] : entry_params_[static_cast<std::size_t>(i)]
                                               [static_cast<std::size_t>(c)])
          put_d(cidx, k, std::conj(w) * aj);
        for (const auto& [k, w] : entry_params_[static_cast<std::size_t>(j)]
                                               [static_cast<std::size_t>(c)])
          put_d(cidx, k, std::conj(ai) * w);
      }
      put(cidx, g - (i == j ? 1.0 : 0.0));
    }

  std::vector<Complex> M(static_cast<std::size_t>(ql * ql));
  std::vector<Complex> dM(static_cast<std::size_t>(P) * ql * ql);
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b) {
      std::fill(M.begin(), M.end(), Complex(0));
      std::fill(dM.begin(), dM.end(), Complex(0));
      for (const auto& e : tensor_.pair(a, b)) {
        for (int i = 0; i < ql; ++i) {
          const Complex ai_c =
              std::conj(table.row(i)[static_cast<std::size_t>(e.lambda_idx)]);
          for (int j = 0; j < ql; ++j) {
            const Complex aj =
                table.row(j)[static_cast<std::size_t>(e.target_idx)];
            M[static_cast<std::size_t>(i * ql + j)] += e.coeff * ai_c * aj;
            for (const auto& [k, w] :
                 entry_params_[static_cast<std::size_t>(i)]
                              [static_cast<std::size_t>(e.lambda_idx)])
              dM[static_cast<std::size_t>(k) * ql * ql + i * ql + j] +=
                  e.coeff * std::conj(w) * aj;
            for (const auto& [k, w] :
                 entry_params_[static_cast<std::size_t>(j)]
                              [static_cast<std::size_t>(e.target_idx)])
              dM[static_cast<std::size_t>(k) * ql * ql + i * ql + j] +=
                  e.coeff * ai_c * w;
          }
        }
      }
      const int ab = a * K + b;
      for (int i = 0; i < ql; ++i)
        for (int j = i + 1; j < ql; ++j) {
          const int cidx = nc1 + ab * npair + strict_pair_index(i, j, ql);
          put(cidx, M[static_cast<std::size_t>(i * ql + j)]);
          for (int k = 0; k < P; ++k)
            put_d(cidx, k,
                  dM[static_cast<std::size_t>(k) * ql * ql + i * ql + j]);
        }
      for (int i = 0; i < ql; ++i)
        for (int j = 0; j < i; ++j) {
          const int cidx =
              nc1 + K * K * npair + ab * npair + strict_pair_index(j, i, ql);
          put(cidx, M[static_cast<std::size_t>(i * ql + i)] -
                        M[static_cast<std::size_t>(j * ql + j)]);
          for (int k = 0; k < P; ++k)
            put_d(cidx, k,
                  dM[static_cast<std::size_t>(k) * ql * ql + i * ql + i] -
                      dM[static_cast<std::size_t>(k) * ql * ql + j * ql + j]);
        }
    }
}

std::uint64_t per_restart_seed_mix(std::uint64_t seed, int restart) {
  std::uint64_t z =
      seed + (static_cast<std::uint64_t>(restart) + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// Levenberg-Marquardt on the squared-residual sum.
SolveResult run_lm(const ResidualSystem& system, std::vector<double> p,
                   const SearchConfig& config, long iter_budget, long* iters) {
  const int P = system.num_params();
  const int R = system.num_residuals();
  std::vector<double> rv, jv;
  Eigen::VectorXd pe = Eigen::Map<Eigen::VectorXd>(p.data(), P);
  double lambda = 1e-3;
  double best_cost = std::numeric_limits<double>::infinity();
  double window_cost = std::numeric_limits<double>::infinity();
  int stall = 0, window = 0;
  long it = 0;

  system.jacobian(p, &rv, &jv);
  Eigen::Map<Eigen::VectorXd> r(rv.data(), R);
  double cost = r.squaredNorm();

  while (it < iter_budget && cost >= config.cost_tol) {
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>
        J(jv.data(), R, P);
    Eigen::VectorXd g = 2.0 * J.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() < config.grad_tol) break;
    Eigen::MatrixXd A = J.transpose() * J;
    Eigen::VectorXd diag = A.diagonal().cwiseMax(1e-12);
    bool accepted = false;
    for (int tries = 0; tries < 40; ++tries) {
      Eigen::MatrixXd As = A;
      As.diagonal() += lambda * diag;
      Eigen::VectorXd delta = As.ldlt().solve(-J.transpose() * r);
      std::vector<double> ptrial(p);
      Eigen::Map<Eigen::VectorXd>(ptrial.data(), P) =
          Eigen::Map<Eigen::VectorXd>(p.data(), P) + delta;
      const double trial_cost = system.cost(ptrial);
      ++it;
      if (trial_cost < cost) {
        p = std::move(ptrial);
        cost = trial_cost;
        lambda = std::max(lambda / 3.0, 1e-14);
        accepted = true;
        break;
      }
      lambda *= 4.0;
      if (lambda > 1e14) break;
    }
    if (!accepted) break;
    if (cost < best_cost * (1.0 - 1e-13)) {
      best_cost = cost;
      stall = 0;
    } else if (++stall > 25) {
      break;
    }
    // Give up on flat valleys: demand 1% relative progress per 50 steps.
    if (++window >= 50) {
      if (cost > 0.99 * window_cost && cost > config.cost_tol) break;
      window_cost = cost;
      window = 0;
    }
    system.jacobian(p, &rv, &jv);
    new (&r) Eigen::Map<Eigen::VectorXd>(rv.data(), R);
    cost = r.squaredNorm();
  }
  *iters = it;
  SolveResult res{system.chart().assemble(p), cost, it,
                  cost < config.cost_tol, 0};
  return res;
}

// L-BFGS (two-loop recursion, Armijo backtracking).
void run_lbfgs(const ResidualSystem& system, std::vector<double>* pio,
               const SearchConfig& config, long iter_budget, long* iters,
               double* final_cost) {
  const int P = system.num_params();
  const int mem = 10;
  Eigen::VectorXd p = Eigen::Map<Eigen::VectorXd>(pio->data(), P);
  std::vector<double> pv(pio->begin(), pio->end()), gv;
  double cost = system.cost_and_grad(pv, &gv);
  Eigen::VectorXd g = Eigen::Map<Eigen::VectorXd>(gv.data(), P);

  std::vector<Eigen::VectorXd> S, Y;
  std::vector<double> rho;
  double best_cost = cost;
  double window_cost = cost;
  int stall = 0, window = 0;
  long it = 0;

  // Runs down to ~1e-8 only; a Levenberg-Marquardt polish finishes the job.
  while (it < iter_budget && cost >= 1e-8 &&
         g.lpNorm<Eigen::Infinity>() >= config.grad_tol) {
    // two-loop recursion
    Eigen::VectorXd q = g;
    const int m = static_cast<int>(S.size());
    std::vector<double> alpha(static_cast<std::size_t>(m));
    for (int i = m - 1; i >= 0; --i) {
      alpha[static_cast<std::size_t>(i)] =
          rho[static_cast<std::size_t>(i)] *
          S[static_cast<std::size_t>(i)].dot(q);
      q -= alpha[static_cast<std::size_t>(i)] * Y[static_cast<std::size_t>(i)];
    }
    if (m > 0) {
      const auto& s = S.back();
      const auto& y = Y.back();
      q *= s.dot(y) / y.squaredNorm();
    }
    for (int i = 0; i < m; ++i) {
      const double beta = rho[static_cast<std::size_t>(i)] *
                          Y[static_cast<std::size_t>(i)].dot(q);
      q += (alpha[static_cast<std::size_t>(i)] - beta) *
           S[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd dir = -q;
    double slope = g.dot(dir);
    if (slope >= 0) {
      dir = -g;
      slope = -g.squaredNorm();
    }

    double step = 1.0;
    double new_cost = cost;
    Eigen::VectorXd pnew;
    bool ok = false;
    for (int ls = 0; ls < 50; ++ls) {
      pnew = p + step * dir;
      std::vector<double> pvec(pnew.data(), pnew.data() + P);
      new_cost = system.cost(pvec);
      ++it;
      if (new_cost <= cost + 1e-4 * step * slope) {
        ok = true;
        break;
      }
      step *= 0.5;
    }
    if (!ok) break;

    std::vector<double> pvec(pnew.data(), pnew.data() + P);
    const double c2 = system.cost_and_grad(pvec, &gv);
    Eigen::VectorXd gnew = Eigen::Map<Eigen::VectorXd>(gv.data(), P);
    Eigen::VectorXd s = pnew - p, y = gnew - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      S.push_back(s);
      Y.push_back(y);
      rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > mem) {
        S.erase(S.begin());
        Y.erase(Y.begin());
        rho.erase(rho.begin());
      }
    }
    p = pnew;
    g = gnew;
    cost = c2;
    if (cost < best_cost * (1.0 - 1e-12)) {
      best_cost = cost;
      stall = 0;
    } else if (++stall > 200) {
      break;
    }
    if (++window >= 200) {
      if (cost > 0.995 * window_cost) break;
      window_cost = cost;
      window = 0;
    }
  }
  Eigen::Map<Eigen::VectorXd>(pio->data(), P) = p;
  *iters = it;
  *final_cost = cost;
}

constexpr int kDirectLMParamCap = 512;

}  // namespace

SolveResult solve_from(const ResidualSystem& system, std::vector<double> p0,
                       const SearchConfig& config, std::uint64_t sub_seed) {
  long iters = 0;
  SolveResult res{system.chart().assemble(p0), 0, 0, false, sub_seed};
  if (system.num_params() <= kDirectLMParamCap) {
    res = run_lm(system, std::move(p0), config, config.max_iters, &iters);
  } else {
    double cost = 0;
    run_lbfgs(system, &p0, config, config.max_iters, &iters, &cost);
    // Polish only clearly converging runs; a failed polish at this size
    // costs minutes.
    if (cost < 1e-7) {
      long lm_iters = 0;
      res = run_lm(system, std::move(p0), config, 30, &lm_iters);
      iters += lm_iters;
    } else {
      res = SolveResult{system.chart().assemble(p0), cost, iters,
                        cost < config.cost_tol, sub_seed};
    }
  }
  res.iters = iters;
  res.seed = sub_seed;
  return res;
}

namespace {

std::vector<double> random_start(const ResidualSystem& system,
                                 std::uint64_t sub_seed) {
  std::mt19937_64 rng(sub_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> p(static_cast<std::size_t>(system.num_params()));
  for (double& v : p) v = gauss(rng);
  // Scale so the assembled rows are roughly unit norm.
  CodewordTable table = system.chart().assemble(p);
  double mean = 0;
  for (int i = 0; i < table.num_rows(); ++i) mean += table.row_norm(i);
  mean /= table.num_rows();
  if (mean > 1e-12)
    for (double& v : p) v /= mean;
  return p;
}

int thread_count(const SearchConfig& config) {
  if (config.threads > 0) return config.threads;
  if (const char* env = std::getenv("PICODE_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 4;
}

}  // namespace

MinimizeOutcome minimize(const ResidualSystem& system,
                         const SearchConfig& config) {
  const int T = thread_count(config);
  std::vector<SolveResult> results;
  results.reserve(static_cast<std::size_t>(config.restarts));
  int done = 0;
  bool found = false;
  while (done < config.restarts && !(found && config.stop_on_success)) {
    const int block = std::min(T, config.restarts - done);
    std::vector<SolveResult> slot(static_cast<std::size_t>(block),
                                  SolveResult{CodewordTable(system.chart().params()), 0, 0,
                                              false, 0});
    std::vector<std::thread> pool;
    for (int k = 0; k < block; ++k) {
      pool.emplace_back([&, k] {
        const int restart = done + k;
        const std::uint64_t sub = per_restart_seed_mix(config.rng_seed, restart);
        slot[static_cast<std::size_t>(k)] =
            solve_from(system, random_start(system, sub), config, sub);
      });
    }
    for (auto& th : pool) th.join();
    for (auto& r : slot) {
      if (r.converged) found = true;
      results.push_back(std::move(r));
    }
    done += block;
  }

  MinimizeOutcome out{SolveResult{CodewordTable(system.chart().params()),
                                  std::numeric_limits<double>::infinity(), 0,
                                  false, 0},
                      {},
                      {},
                      0};
  for (int k = 0; k < static_cast<int>(results.size()); ++k) {
    const SolveResult& r = results[static_cast<std::size_t>(k)];
    out.restarts.push_back({k, r.seed, r.cost, r.iters, r.converged});
    if (r.converged) {
      ++out.num_converged;
      if (config.keep_tables) out.converged_tables.push_back(r.table);
    }
    if (r.cost < out.best.cost) out.best = r;
  }
  return out;
}

MinimizeOutcome minimize(const Parametrization& chart,
                         const SearchConfig& config) {
  ResidualSystem system(chart);
  return minimize(system, config);
}

std::vector<double> analytic_gradient(const ResidualSystem& system,
                                      const std::vector<double>& point) {
  std::vector<double> g;
  system.cost_and_grad(point, &g);
  return g;
}

std::vector<MinNEntry> find_min_n(CodeParams templ, ParamKind kind,
                                  const SearchConfig& config, int n_lo,
                                  int n_hi, bool full_range) {
  std::vector<MinNEntry> out;
  bool found = false;
  for (int n = n_lo; n <= n_hi; ++n) {
    if (found && !full_range) break;
    CodeParams cp = templ;
    cp.n = n;
    const bool skip =
        n < 4 * templ.t + 1 ||
        (kind == ParamKind::kPRRestricted && n % 2 == 0);
    if (skip) {
      out.push_back({n, false, std::numeric_limits<double>::infinity()});
      continue;
    }
    MinimizeOutcome mo = minimize(Parametrization::make(kind, cp), config);
    out.push_back({n, mo.num_converged > 0, mo.best.cost});
    if (mo.num_converged > 0) found = true;
  }
  return out;
}

std::vector<GridPoint> grid_scan(int n, int t, int i, int j, double step,
                                 const SearchConfig& config) {
  if (!(0 <= i && i < j && j <= n) || step <= 0)
    throw std::invalid_argument("bad grid-scan arguments");
  std::vector<GridPoint> out;
  for (double a = 0; a <= 1.0 + 1e-12; a += step)
    for (double b = 0; a * a + b * b <= 1.0 + 1e-12; b += step) {
      auto chart = Parametrization::make(
          ParamKind::kCoefficientFixed, CodeParams{n, 2, 2, t},
          {{i, Complex(a, 0)}, {j, Complex(b, 0)}});
      MinimizeOutcome mo = minimize(chart, config);
      out.push_back({a, b, mo.best.cost, mo.num_converged > 0});
    }
  return out;
}

SymmetryReport symmetry_check(const CodewordTable& table, double tol) {
  const CodeParams& p = table.params();
  if (p.q_p != 2 || p.q_l != 2)
    throw std::invalid_argument("symmetry_check needs q_p = q_l = 2");
  if (table.max_imag() >= tol)
    throw std::invalid_argument("symmetry_check needs a real table");
  const int n = p.n;
  std::vector<double> alpha(static_cast<std::size_t>(n) + 1),
      beta(static_cast<std::size_t>(n) + 1);
  for (int c = 0; c <= n; ++c) {
    alpha[static_cast<std::size_t>(c)] =
        table.row(0)[static_cast<std::size_t>(c)].real();
    beta[static_cast<std::size_t>(c)] =
        table.row(1)[static_cast<std::size_t>(c)].real();
  }
  // Canonicalize the two global signs.
  for (auto* v : {&alpha, &beta})
    for (double x : *v) {
      if (std::abs(x) > tol) {
        if (x < 0)
          for (double& y : *v) y = -y;
        break;
      }
    }

  double mirror_dev = 0;
  for (int c = 0; c <= n; ++c)
    mirror_dev = std::max(
        mirror_dev, std::abs(std::abs(beta[static_cast<std::size_t>(c)]) -
                             std::abs(alpha[static_cast<std::size_t>(n - c)])));
  double phase_dev = std::numeric_limits<double>::infinity();
  for (double s : {1.0, -1.0}) {
    double dev = 0;
    for (int c = 0; c <= n; ++c)
      dev = std::max(dev, std::abs(beta[static_cast<std::size_t>(c)] -
                                   s * ((c % 2 == 0) ? 1.0 : -1.0) *
                                       alpha[static_cast<std::size_t>(n - c)]));
    phase_dev = std::min(phase_dev, dev);
  }
  return SymmetryReport{mirror_dev < tol, phase_dev < tol, mirror_dev,
                        phase_dev};
}

Clusters cluster_solutions(const std::vector<CodewordTable>& tables,
                           double tol, bool quotient_row_signs) {
  std::vector<std::vector<Complex>> flat;
  for (const auto& t : tables) {
    std::vector<Complex> v;
    for (int i = 0; i < t.num_rows(); ++i) {
      std::vector<Complex> row(t.row(i));
      if (quotient_row_signs)
        for (const Complex& x : row) {
          if (std::abs(x) > 1e-8) {
            if (x.real() < 0)
              for (Complex& y : row) y = -y;
            break;
          }
        }
      v.insert(v.end(), row.begin(), row.end());
    }
    flat.push_back(std::move(v));
  }
  Clusters out;
  for (int k = 0; k < static_cast<int>(flat.size()); ++k) {
    int assigned = -1;
    for (int c = 0; c < out.count; ++c) {
      const auto& rep =
          flat[static_cast<std::size_t>(out.representatives[static_cast<std::size_t>(c)])];
      double d2 = 0;
      for (std::size_t e = 0; e < rep.size(); ++e)
        d2 += std::norm(flat[static_cast<std::size_t>(k)][e] - rep[e]);
      if (std::sqrt(d2) < tol) {
        assigned = c;
        break;
      }
    }
    if (assigned < 0) {
      assigned = out.count++;
      out.representatives.push_back(k);
    }
    out.assignment.push_back(assigned);
  }
  return out;
}

}  // namespace pic::opt
