#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ncrank/exactmat.hpp"
#include "ncrank/pencil.hpp"

namespace ncrank {

// Strictly increasing, 1-based.
using Subset = std::vector<unsigned>;

std::uint64_t binomial(unsigned n, unsigned k);

// Ordered, signed basis of Lambda^k(K^n): basis vector j is
// signs[j] * e_{subsets[j]}.
class SubsetBasis {
 public:
  static SubsetBasis lex(unsigned n, unsigned k);
  // Source side of the recursive block form of A(p,n): subsets avoiding n in
  // lex order, then subsets containing n ordered by their part below n.
  static SubsetBasis split_source(unsigned n, unsigned p);
  // Target side, Lambda^{p+1}: the images under L_{e_n} of the avoiding
  // block of split_source (same order), then (p+1)-subsets avoiding n.
  static SubsetBasis split_target(unsigned n, unsigned p);

  unsigned n() const { return n_; }
  unsigned degree() const { return k_; }
  std::size_t size() const { return subsets_.size(); }
  const Subset& subset(std::size_t j) const { return subsets_[j]; }
  int sign(std::size_t j) const { return signs_[j]; }
  // Throws std::out_of_range when s is not a basis subset.
  std::size_t index_of(const Subset& s) const;

 private:
  SubsetBasis(unsigned n, unsigned k) : n_(n), k_(k) {}
  void push(Subset s, int sign);

  unsigned n_, k_;
  std::vector<Subset> subsets_;
  std::vector<int> signs_;
  std::map<Subset, std::size_t> index_;
};

// Matrix of L_{e_i}: Lambda^p -> Lambda^{p+1} in lex bases. Rational.
DenseMatrix wedge_matrix(unsigned i, unsigned p, unsigned n);
DenseMatrix wedge_matrix(unsigned i, const SubsetBasis& src, const SubsetBasis& tgt);

// A(p,n) = sum_i t_i L_{e_i}, zero constant term.
LinearPencil wedge_pencil(unsigned p, unsigned n);
LinearPencil wedge_pencil(const SubsetBasis& src, const SubsetBasis& tgt);

struct BlockCheck {
  bool ok = true;
  std::size_t identity_size = 0;
  std::vector<std::string> diffs;
};
// Builds A(p,n) in the split bases and compares it blockwise with
// [[t_n I, A(p-1,n-1)], [A(p,n-1), 0]]. Requires 1 <= p <= n-2.
BlockCheck block_structure_check(unsigned p, unsigned n);

// (p+1) x (p+1) with S_r(j,k) = 1 iff j = k + r (1-based). Rational.
DenseMatrix shift_matrix(int r, unsigned p);

// sum_i L_{e_i} (x) S_{i-p-1} for A(p, 2p+1). Rational, square of size
// C(2p+1,p)(p+1).
DenseMatrix toeplitz_witness(unsigned p);

struct WitnessCertificate {
  unsigned p = 0;
  std::size_t size = 0;
  std::size_t rank = 0;
  bool full = false;
  std::string arithmetic;  // "prime:<q>" or "rational"
};
// Full rank mod a prime certifies full rank over Q; otherwise falls back to
// exact Bareiss.
WitnessCertificate certify_witness(unsigned p, std::uint64_t modulus = kDefaultModulus);

struct WedgeRatioReport {
  unsigned p = 0;
  std::size_t crk_formula = 0, crk_observed = 0;
  std::size_t ncrk = 0;  // C(2p+1,p), witnessed
  mpq_class ratio;
  WitnessCertificate witness;
  bool passed = false;
};
WedgeRatioReport ratio_report(unsigned p, const SamplingConfig& cfg);

struct EgFamilyReport {
  unsigned i = 0, n = 0;
  std::size_t full = 0;  // min(C(n,i), C(n,i+1))
  std::size_t crk = 0, ncrk = 0;
  bool expect_deficient_crk = false;
  bool passed = false;
};
EgFamilyReport egfamily_audit(unsigned i, unsigned n, const SamplingConfig& cfg);

}  // namespace ncrank
