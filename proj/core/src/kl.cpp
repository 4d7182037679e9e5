#include "picode/kl.hpp"

#include <cmath>

namespace pic::kl {

namespace {

void accumulate(KLReport* rep, const Complex& z) {
  rep->cost += std::norm(z);
  rep->max_abs = std::max(rep->max_abs, std::abs(z));
}

}  // namespace

const Complex* KLReport::find_c2(int i, int j, int mu_idx, int nu_idx) const {
  for (const auto& r : c2)
    if (r.i == i && r.j == j && r.mu_idx == mu_idx && r.nu_idx == nu_idx)
      return &r.value;
  return nullptr;
}

const Complex* KLReport::find_c3(int i, int j, int mu_idx, int nu_idx) const {
  for (const auto& r : c3)
    if (r.i == i && r.j == j && r.mu_idx == mu_idx && r.nu_idx == nu_idx)
      return &r.value;
  return nullptr;
}

int identity_count(const CodeParams& p) {
  const auto K =
      static_cast<int>(comb::composition_count(2 * p.t, p.q_p));
  const int pairs = p.q_l * (p.q_l - 1) / 2;
  const int c1 = p.q_l * (p.q_l + 1) / 2;
  return c1 + 2 * pairs * K * K;
}

KLReport qudit_residuals(const CodewordTable& table,
                         const comb::TransitionTensor& tensor) {
  const CodeParams& p = table.params();
  if (tensor.n() != p.n || tensor.q() != p.q_p || tensor.t() != p.t)
    throw std::invalid_argument("tensor does not match table parameters");

  KLReport rep;
  rep.identity_count = identity_count(p);

  // C1: Gram deviation.
  rep.c1.assign(p.q_l, std::vector<Complex>(p.q_l));
  for (int i = 0; i < p.q_l; ++i) {
    for (int j = 0; j < p.q_l; ++j) {
      Complex g = 0;
      for (int k = 0; k < table.dim(); ++k)
        g += std::conj(table.row(i)[k]) * table.row(j)[k];
      rep.c1[i][j] = g - (i == j ? 1.0 : 0.0);
      if (j >= i) accumulate(&rep, rep.c1[i][j]);
    }
  }

  const int K = static_cast<int>(tensor.errors().size());
  for (int a = 0; a < K; ++a) {
    for (int b = 0; b < K; ++b) {
      const auto& entries = tensor.pair(a, b);
      // C2 for unordered pairs {i, j}, i < j, both (mu, nu) orders are
      // covered by the loop over (a, b).
      for (int i = 0; i < p.q_l; ++i) {
        for (int j = i + 1; j < p.q_l; ++j) {
          Complex r = 0;
          for (const auto& e : entries)
            r += std::conj(table.row(i)[e.lambda_idx]) *
                 table.row(j)[e.target_idx] * e.coeff;
          rep.c2.push_back({i, j, a, b, r});
          accumulate(&rep, r);
        }
      }
      // C3 for i > j.
      for (int i = 0; i < p.q_l; ++i) {
        for (int j = 0; j < i; ++j) {
          Complex r = 0;
          for (const auto& e : entries)
            r += (std::conj(table.row(i)[e.lambda_idx]) *
                      table.row(i)[e.target_idx] -
                  std::conj(table.row(j)[e.lambda_idx]) *
                      table.row(j)[e.target_idx]) *
                 e.coeff;
          rep.c3.push_back({i, j, a, b, r});
          accumulate(&rep, r);
        }
      }
    }
  }
  return rep;
}

KLReport qudit_residuals(const CodewordTable& table) {
  const CodeParams& p = table.params();
  comb::TransitionTensor tensor(p.n, p.q_p, p.t);
  return qudit_residuals(table, tensor);
}

KLReport qubit_residuals(const CodewordTable& table) {
  const CodeParams& p = table.params();
  if (p.q_p != 2)
    throw std::invalid_argument("qubit_residuals requires q_p = 2");

  const int n = p.n, t = p.t;
  // b_{a,b,j} = binom(n-2t, j-a) / sqrt(binom(n,j) binom(n,j-a+b)),
  // zero when j-a or j-a+b leaves [0, n-2t] resp. [0, n].
  auto coeff = [&](int a, int b, int j) -> double {
    const int ja = j - a;
    const int jab = j - a + b;
    if (ja < 0 || ja > n - 2 * t || jab < 0 || jab > n) return 0.0;
    return std::exp(comb::log_binomial(n - 2 * t, ja) -
                    0.5 * (comb::log_binomial(n, j) +
                           comb::log_binomial(n, jab)));
  };

  KLReport rep;
  rep.identity_count = identity_count(p);
  rep.c1.assign(p.q_l, std::vector<Complex>(p.q_l));
  for (int i = 0; i < p.q_l; ++i) {
    for (int j = 0; j < p.q_l; ++j) {
      Complex g = 0;
      for (int k = 0; k < table.dim(); ++k)
        g += std::conj(table.row(i)[k]) * table.row(j)[k];
      rep.c1[i][j] = g - (i == j ? 1.0 : 0.0);
      if (j >= i) accumulate(&rep, rep.c1[i][j]);
    }
  }

  // Error composition index for (2t-a, a) in the canonical order is a.
  const int K = 2 * t + 1;
  for (int a = 0; a < K; ++a) {
    for (int b = 0; b < K; ++b) {
      for (int i = 0; i < p.q_l; ++i) {
        for (int j = i + 1; j < p.q_l; ++j) {
          Complex r = 0;
          for (int k = 0; k <= n; ++k) {
            const int tgt = k - a + b;
            if (tgt < 0 || tgt > n) continue;
            r += std::conj(table.row(i)[k]) * table.row(j)[tgt] *
                 coeff(a, b, k);
          }
          rep.c2.push_back({i, j, a, b, r});
          accumulate(&rep, r);
        }
      }
      for (int i = 0; i < p.q_l; ++i) {
        for (int j = 0; j < i; ++j) {
          Complex r = 0;
          for (int k = 0; k <= n; ++k) {
            const int tgt = k - a + b;
            if (tgt < 0 || tgt > n) continue;
            r += (std::conj(table.row(i)[k]) * table.row(i)[tgt] -
                  std::conj(table.row(j)[k]) * table.row(j)[tgt]) *
                 coeff(a, b, k);
          }
          rep.c3.push_back({i, j, a, b, r});
          accumulate(&rep, r);
        }
      }
    }
  }
  return rep;
}

double cost(const CodewordTable& table) {
  return qudit_residuals(table).cost;
}

DistanceReport verify_distance(const CodewordTable& table, double tol) {
  if (tol <= 0) throw std::invalid_argument("tol must be > 0");
  DistanceReport out{-1, -1, 0};
  for (int tp = 0; table.params().n >= 2 * tp; ++tp) {
    KLReport rep = qudit_residuals(table.with_t(tp));
    if (rep.max_abs > tol) break;
    out.t = tp;
    out.d = 2 * tp + 1;
    out.max_abs_at_t = rep.max_abs;
  }
  return out;
}

}  // namespace pic::kl
