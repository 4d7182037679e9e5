#pragma once

#include "picode/kl.hpp"

namespace pic::oracle {

/// Dense state vector in the full q^n-dimensional space.  Site 1 is the most
/// significant base-q digit of the basis index.
struct DenseState {
  int q = 2;
  int n = 0;
  std::vector<Complex> amplitudes;

  double norm() const;
};

/// Positions (1-based, strictly increasing) projected onto the basis string x.
struct DeletionSpec {
  std::vector<int> positions;
  std::vector<int> x;

  void validate(int n, int q) const;
};

/// Enforced cap on q^n amplitudes.
inline constexpr std::int64_t kDenseCap = std::int64_t{1} << 22;

/// Unit-norm uniform superposition over all strings of weight lambda.
DenseState dicke_vector(int n, int q, const comb::Composition& lambda);

/// Dense codeword sum over the table's Dicke basis.
DenseState assemble_dense(const CodewordTable& table, int row);

/// Projects the listed sites onto <x| and removes them, via sequential
/// single-site contractions.
DenseState apply_kraus(const DenseState& state, const DeletionSpec& spec);

/// Single k-type deletion at site i (1-based).
DenseState apply_single_deletion(const DenseState& state, int site, int k);

Complex inner(const DenseState& a, const DenseState& b);

/// Brute-force KL residuals via explicit Kraus operators A_{I,x} with
/// I = {1, ..., 2t}; entrywise comparable with kl::qudit_residuals.
kl::KLReport brute_kl_residuals(const CodewordTable& table);

/// Same but with an arbitrary index set of size 2t.
kl::KLReport brute_kl_residuals(const CodewordTable& table,
                                const std::vector<int>& index_set);

}  // namespace pic::oracle
