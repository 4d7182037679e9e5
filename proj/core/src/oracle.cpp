#include "picode/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace pic::oracle {

namespace {

std::int64_t ipow(int q, int n) {
  std::int64_t r = 1;
  for (int i = 0; i < n; ++i) {
    r *= q;
    if (r > kDenseCap) throw std::runtime_error("dense-state cap exceeded");
  }
  return r;
}

std::vector<int> digits_of(std::int64_t idx, int q, int n) {
  std::vector<int> d(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    d[i] = static_cast<int>(idx % q);
    idx /= q;
  }
  return d;
}

}  // namespace

double DenseState::norm() const {
  double s = 0;
  for (const auto& z : amplitudes) s += std::norm(z);
  return std::sqrt(s);
}

void DeletionSpec::validate(int n, int q) const {
  if (positions.size() != x.size())
    throw std::invalid_argument("positions and x size mismatch");
  int prev = 0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (positions[k] <= prev || positions[k] > n)
      throw std::invalid_argument("positions must be strictly increasing in [1, n]");
    if (x[k] < 0 || x[k] >= q)
      throw std::invalid_argument("x entries must be in [0, q)");
    prev = positions[k];
  }
}

DenseState dicke_vector(int n, int q, const comb::Composition& lambda) {
  if (lambda.n() != n || lambda.q() != q)
    throw std::invalid_argument("lambda must be a composition of n into q parts");
  const std::int64_t size = ipow(q, n);
  DenseState s{q, n, std::vector<Complex>(static_cast<std::size_t>(size))};
  const double amp =
      std::exp(-0.5 * comb::log_multinomial(n, lambda));
  std::vector<int> count(static_cast<std::size_t>(q));
  for (std::int64_t idx = 0; idx < size; ++idx) {
    std::fill(count.begin(), count.end(), 0);
    std::int64_t v = idx;
    for (int i = 0; i < n; ++i) {
      ++count[static_cast<std::size_t>(v % q)];
      v /= q;
    }
    bool match = true;
    for (int k = 0; k < q; ++k)
      if (count[k] != lambda[k]) {
        match = false;
        break;
      }
    if (match) s.amplitudes[static_cast<std::size_t>(idx)] = amp;
  }
  return s;
}

DenseState assemble_dense(const CodewordTable& table, int row) {
  const CodeParams& p = table.params();
  const std::int64_t size = ipow(p.q_p, p.n);
  DenseState out{p.q_p, p.n,
                 std::vector<Complex>(static_cast<std::size_t>(size))};
  comb::CompositionSet lambdas(p.n, p.q_p);
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    const Complex a = table.row(row)[li];
    if (a == Complex(0)) continue;
    DenseState d = dicke_vector(p.n, p.q_p, lambdas.at(li));
    for (std::size_t k = 0; k < d.amplitudes.size(); ++k)
      out.amplitudes[k] += a * d.amplitudes[k];
  }
  return out;
}

DenseState apply_single_deletion(const DenseState& state, int site, int k) {
  if (site < 1 || site > state.n)
    throw std::invalid_argument("deletion site out of range");
  if (k < 0 || k >= state.q)
    throw std::invalid_argument("deletion type out of range");
  const std::int64_t low_size = ipow(state.q, state.n - site);
  const std::int64_t high_size = ipow(state.q, site - 1);
  DenseState out{state.q, state.n - 1,
                 std::vector<Complex>(
                     static_cast<std::size_t>(high_size * low_size))};
  for (std::int64_t h = 0; h < high_size; ++h) {
    const std::int64_t in_base = (h * state.q + k) * low_size;
    const std::int64_t out_base = h * low_size;
    for (std::int64_t l = 0; l < low_size; ++l)
      out.amplitudes[static_cast<std::size_t>(out_base + l)] =
          state.amplitudes[static_cast<std::size_t>(in_base + l)];
  }
  return out;
}

DenseState apply_kraus(const DenseState& state, const DeletionSpec& spec) {
  spec.validate(state.n, state.q);
  DenseState cur = state;
  // Largest position first so earlier indices stay valid.
  for (std::size_t k = spec.positions.size(); k-- > 0;)
    cur = apply_single_deletion(cur, spec.positions[k], spec.x[k]);
  return cur;
}

Complex inner(const DenseState& a, const DenseState& b) {
  if (a.amplitudes.size() != b.amplitudes.size())
    throw std::invalid_argument("dimension mismatch");
  Complex s = 0;
  for (std::size_t k = 0; k < a.amplitudes.size(); ++k)
    s += std::conj(a.amplitudes[k]) * b.amplitudes[k];
  return s;
}

kl::KLReport brute_kl_residuals(const CodewordTable& table) {
  std::vector<int> idx(static_cast<std::size_t>(2 * table.params().t));
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<int>(k) + 1;
  return brute_kl_residuals(table, idx);
}

kl::KLReport brute_kl_residuals(const CodewordTable& table,
                                const std::vector<int>& index_set) {
  const CodeParams& p = table.params();
  const int tt = 2 * p.t;
  if (static_cast<int>(index_set.size()) != tt)
    throw std::invalid_argument("index set must have size 2t");

  std::vector<DenseState> codewords;
  for (int i = 0; i < p.q_l; ++i) codewords.push_back(assemble_dense(table, i));

  // All deletion strings x in [q]^{2t}, grouped by weight.
  comb::CompositionSet weights(tt, p.q_p);
  const std::int64_t num_strings = [&] {
    std::int64_t r = 1;
    for (int i = 0; i < tt; ++i) r *= p.q_p;
    return r;
  }();
  std::vector<std::vector<std::int64_t>> groups(weights.size());
  for (std::int64_t s = 0; s < num_strings; ++s) {
    std::vector<int> ds = digits_of(s, p.q_p, tt);
    std::vector<int> count(static_cast<std::size_t>(p.q_p));
    for (int d : ds) ++count[static_cast<std::size_t>(d)];
    groups[static_cast<std::size_t>(
        weights.index_of(comb::Composition(count)))].push_back(s);
  }

  // Deleted codewords A_{I,x} |c_i> for every x.
  std::vector<std::vector<DenseState>> deleted(
      static_cast<std::size_t>(num_strings));
  for (std::int64_t s = 0; s < num_strings; ++s) {
    DeletionSpec spec{index_set, digits_of(s, p.q_p, tt)};
    for (int i = 0; i < p.q_l; ++i)
      deleted[static_cast<std::size_t>(s)].push_back(
          apply_kraus(codewords[i], spec));
  }

  kl::KLReport rep;
  rep.identity_count = kl::identity_count(p);
  rep.c1.assign(p.q_l, std::vector<Complex>(p.q_l));
  for (int i = 0; i < p.q_l; ++i)
    for (int j = 0; j < p.q_l; ++j) {
      rep.c1[i][j] =
          inner(codewords[i], codewords[j]) - (i == j ? 1.0 : 0.0);
      if (j >= i) {
        rep.cost += std::norm(rep.c1[i][j]);
        rep.max_abs = std::max(rep.max_abs, std::abs(rep.c1[i][j]));
      }
    }

  const int K = static_cast<int>(weights.size());
  auto group_mean = [&](int a, int b, int i, int j) {
    Complex sum = 0;
    for (std::int64_t sx : groups[static_cast<std::size_t>(a)])
      for (std::int64_t sy : groups[static_cast<std::size_t>(b)])
        sum += inner(deleted[static_cast<std::size_t>(sx)][i],
                     deleted[static_cast<std::size_t>(sy)][j]);
    return sum / static_cast<double>(groups[static_cast<std::size_t>(a)].size() *
                                     groups[static_cast<std::size_t>(b)].size());
  };

  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b) {
      for (int i = 0; i < p.q_l; ++i)
        for (int j = i + 1; j < p.q_l; ++j) {
          Complex r = group_mean(a, b, i, j);
          rep.c2.push_back({i, j, a, b, r});
          rep.cost += std::norm(r);
          rep.max_abs = std::max(rep.max_abs, std::abs(r));
        }
      for (int i = 0; i < p.q_l; ++i)
        for (int j = 0; j < i; ++j) {
          Complex r = group_mean(a, b, i, i) - group_mean(a, b, j, j);
          rep.c3.push_back({i, j, a, b, r});
          rep.cost += std::norm(r);
          rep.max_abs = std::max(rep.max_abs, std::abs(r));
        }
    }
  return rep;
}

}  // namespace pic::oracle
