#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pic::comb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// An ordered tuple of q nonnegative integers summing to n.  For q = 2 the
/// qubit Dicke index j is parts[1].
class Composition {
 public:
  Composition() = default;
  explicit Composition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int operator[](std::size_t k) const { return parts_[k]; }
  int n() const { return n_; }
  int q() const { return static_cast<int>(parts_.size()); }

  bool operator==(const Composition& o) const { return parts_ == o.parts_; }
  bool operator<(const Composition& o) const { return parts_ < o.parts_; }

 private:
  std::vector<int> parts_;
  int n_ = 0;
};

/// All compositions of n into q parts in canonical order: ascending
/// lexicographic order of the suffix (parts[1], ..., parts[q-1]).
/// For q = 2 the index of a composition equals its second entry.
class CompositionSet {
 public:
  CompositionSet(int n, int q);

  int n() const { return n_; }
  int q() const { return q_; }
  std::size_t size() const { return list_.size(); }
  const Composition& at(std::size_t k) const { return list_[k]; }
  const std::vector<Composition>& all() const { return list_; }

  /// Inverse map; throws if the composition is not of (n, q).
  int index_of(const Composition& c) const;

  /// Index of c shifted by -mu+nu, or -1 if any entry goes negative.
  int shifted_index(const Composition& c, const Composition& mu,
                    const Composition& nu) const;

 private:
  int n_;
  int q_;
  std::vector<Composition> list_;
  std::map<std::vector<int>, int> index_;
};

/// Number of compositions of n into q parts, C(n+q-1, q-1).
BigInt composition_count(int n, int q);

/// n! / prod(lambda_i!); throws std::invalid_argument if sum(lambda) != n.
BigInt multinomial(int n, const Composition& lambda);

/// Natural log of the multinomial coefficient, via lgamma.
double log_multinomial(int n, const Composition& lambda);

/// Ordinary binomial as arbitrary precision integer.
BigInt binomial(int n, int k);

double log_binomial(int n, int k);

/// The ratio binom(n-2t, lambda-mu) / sqrt(binom(n,lambda) binom(n,lambda-mu+nu)),
/// defined as exactly zero when lambda-mu or lambda-mu+nu has a negative entry.
/// Computed in log space.
double transition_coeff(int n, int t, const Composition& lambda,
                        const Composition& mu, const Composition& nu);

/// Exact variant binom(n-2t, lambda-mu) / binom(n, lambda) used by the
/// simplicial LP; zero when lambda-mu has a negative entry.
Rational transition_ratio_exact(int n, int t, const Composition& lambda,
                                const Composition& mu);

/// Precomputed deletion-transition coefficients for a given (n, q, t).
/// For each ordered pair (mu, nu) of compositions of 2t and each lambda of n
/// it stores the coefficient together with the canonical index of
/// lambda-mu+nu.  Entries with negative shifts are dropped.
class TransitionTensor {
 public:
  struct Entry {
    int lambda_idx;
    int target_idx;  // index of lambda - mu + nu
    double coeff;
  };

  TransitionTensor(int n, int q, int t);

  int n() const { return n_; }
  int q() const { return q_; }
  int t() const { return t_; }
  const CompositionSet& lambdas() const { return lambdas_; }
  const CompositionSet& errors() const { return errors_; }
  std::size_t num_error_pairs() const {
    return errors_.size() * errors_.size();
  }
  /// Entries for the ordered pair (mu_idx, nu_idx).
  const std::vector<Entry>& pair(int mu_idx, int nu_idx) const {
    return entries_[static_cast<std::size_t>(mu_idx) * errors_.size() +
                    nu_idx];
  }

 private:
  int n_, q_, t_;
  CompositionSet lambdas_;
  CompositionSet errors_;  // compositions of 2t into q parts
  std::vector<std::vector<Entry>> entries_;
};

}  // namespace pic::comb
