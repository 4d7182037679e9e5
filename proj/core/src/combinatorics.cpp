#include "picode/combinatorics.hpp"

#include <cmath>

namespace pic::comb {

Composition::Composition(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("composition needs q >= 1");
  for (int p : parts_) {
    if (p < 0) throw std::invalid_argument("composition entries must be >= 0");
    n_ += p;
  }
}

CompositionSet::CompositionSet(int n, int q) : n_(n), q_(q) {
  if (n < 0 || q < 1) throw std::invalid_argument("bad (n, q)");
  // Ascending lex order of the suffix; parts[0] absorbs the remainder.
  std::vector<int> suffix(static_cast<std::size_t>(q) - 1, 0);
  while (true) {
    int s = 0;
    for (int v : suffix) s += v;
    if (s <= n) {
      std::vector<int> parts;
      parts.reserve(q);
      parts.push_back(n - s);
      parts.insert(parts.end(), suffix.begin(), suffix.end());
      index_[parts] = static_cast<int>(list_.size());
      list_.emplace_back(std::move(parts));
    }
    // next suffix with sum <= n in lex order
    int k = q - 2;
    while (k >= 0) {
      ++suffix[k];
      int s2 = 0;
      for (int v : suffix) s2 += v;
      if (s2 <= n) break;
      suffix[k] = 0;
      --k;
    }
    if (k < 0) break;
  }
}

int CompositionSet::index_of(const Composition& c) const {
  auto it = index_.find(c.parts());
  if (it == index_.end())
    throw std::invalid_argument("composition not in set");
  return it->second;
}

int CompositionSet::shifted_index(const Composition& c, const Composition& mu,
                                  const Composition& nu) const {
  if (mu.q() != q_ || nu.q() != q_ || c.q() != q_)
    throw std::invalid_argument("composition length mismatch");
  std::vector<int> shifted(c.parts());
  for (int k = 0; k < q_; ++k) {
    shifted[k] += nu[k] - mu[k];
    if (shifted[k] < 0) return -1;
  }
  auto it = index_.find(shifted);
  return it == index_.end() ? -1 : it->second;
}

BigInt composition_count(int n, int q) { return binomial(n + q - 1, q - 1); }

BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r = 1;
  if (k > n - k) k = n - k;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
         std::lgamma(n - k + 1.0);
}

BigInt multinomial(int n, const Composition& lambda) {
  if (lambda.n() != n)
    throw std::invalid_argument("multinomial: sum(lambda) != n");
  BigInt r = 1;
  int rest = n;
  for (int k = 0; k < lambda.q(); ++k) {
    r *= binomial(rest, lambda[k]);
    rest -= lambda[k];
  }
  return r;
}

double log_multinomial(int n, const Composition& lambda) {
  if (lambda.n() != n)
    throw std::invalid_argument("multinomial: sum(lambda) != n");
  double r = std::lgamma(n + 1.0);
  for (int k = 0; k < lambda.q(); ++k) r -= std::lgamma(lambda[k] + 1.0);
  return r;
}

namespace {

// log multinomial of (n, parts) or NaN flag via bool; parts may be invalid.
bool shifted_parts(const Composition& lambda, const Composition& mu,
                   const Composition& nu, std::vector<int>* out) {
  out->assign(lambda.parts().begin(), lambda.parts().end());
  for (int k = 0; k < lambda.q(); ++k) {
    (*out)[k] += nu[k] - mu[k];
    if ((*out)[k] < 0) return false;
  }
  return true;
}

}  // namespace

double transition_coeff(int n, int t, const Composition& lambda,
                        const Composition& mu, const Composition& nu) {
  const int q = lambda.q();
  if (mu.q() != q || nu.q() != q)
    throw std::invalid_argument("composition length mismatch");
  std::vector<int> diff(static_cast<std::size_t>(q));
  for (int k = 0; k < q; ++k) {
    diff[k] = lambda[k] - mu[k];
    if (diff[k] < 0) return 0.0;
  }
  std::vector<int> target;
  if (!shifted_parts(lambda, mu, nu, &target)) return 0.0;

  Composition d(diff), tgt(target);
  double log_num = log_multinomial(n - 2 * t, d);
  double log_den =
      0.5 * (log_multinomial(n, lambda) + log_multinomial(n, tgt));
  return std::exp(log_num - log_den);
}

Rational transition_ratio_exact(int n, int t, const Composition& lambda,
                                const Composition& mu) {
  const int q = lambda.q();
  if (mu.q() != q) throw std::invalid_argument("composition length mismatch");
  std::vector<int> diff(static_cast<std::size_t>(q));
  for (int k = 0; k < q; ++k) {
    diff[k] = lambda[k] - mu[k];
    if (diff[k] < 0) return 0;
  }
  return Rational(multinomial(n - 2 * t, Composition(diff)),
                  multinomial(n, lambda));
}

TransitionTensor::TransitionTensor(int n, int q, int t)
    : n_(n), q_(q), t_(t), lambdas_(n, q), errors_(2 * t, q) {
  if (n < 2 * t) throw std::invalid_argument("need n >= 2t");
  entries_.resize(errors_.size() * errors_.size());
  for (std::size_t a = 0; a < errors_.size(); ++a) {
    for (std::size_t b = 0; b < errors_.size(); ++b) {
      auto& list = entries_[a * errors_.size() + b];
      const Composition& mu = errors_.at(a);
      const Composition& nu = errors_.at(b);
      for (std::size_t li = 0; li < lambdas_.size(); ++li) {
        const Composition& lambda = lambdas_.at(li);
        int tgt = lambdas_.shifted_index(lambda, mu, nu);
        if (tgt < 0) continue;
        double c = transition_coeff(n, t, lambda, mu, nu);
        if (c == 0.0) continue;
        list.push_back({static_cast<int>(li), tgt, c});
      }
    }
  }
}

}  // namespace pic::comb
