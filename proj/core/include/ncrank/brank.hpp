#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ncrank/exactmat.hpp"
#include "ncrank/pencil.hpp"

namespace ncrank {

// Dense a x b x c tensor T = sum_i e_i (x) X_i.
class Tensor3 {
 public:
  Tensor3(std::size_t a, std::size_t b, std::size_t c);

  std::size_t a() const { return a_; }
  std::size_t b() const { return b_; }
  std::size_t c() const { return c_; }

  const mpq_class& at(std::size_t i, std::size_t j, std::size_t k) const {
    return e_[(i * b_ + j) * c_ + k];
  }
  void set(std::size_t i, std::size_t j, std::size_t k, const mpq_class& v);

  // The b x c matrix X_i (0-based i). Rational.
  DenseMatrix slice(std::size_t i) const;
  void set_slice(std::size_t i, const DenseMatrix& m);

  bool is_integral() const;
  Tensor3 combine(const mpq_class& alpha, const Tensor3& other, const mpq_class& beta) const;

  friend bool operator==(const Tensor3& x, const Tensor3& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.e_ == y.e_;
  }

 private:
  std::size_t a_, b_, c_;
  std::vector<mpq_class> e_;
};

// {"a","b","c","entries":[[i,j,k,"v"],...]}, canonical compact output.
std::string tensor_to_json(const Tensor3& t);
Tensor3 tensor_from_json(const std::string& text);

struct BorderRankCertificate {
  std::size_t a = 0, b = 0, c = 0;
  unsigned p = 0, n = 0;
  std::size_t psi_rows = 0, psi_cols = 0;
  std::size_t psi_rank = 0;
  std::size_t xl_rank = 0;      // C(n-1, p)
  std::size_t lower_bound = 0;  // ceil(psi_rank / xl_rank)
  bool exact = true;            // false: prime-field rank, holds whp
  std::uint64_t modulus = 0;    // prime used (0 for exact)
  std::uint64_t seed = 0;
  std::size_t threshold_D = 0;  // (lower_bound - 1) * xl_rank: psi_rank exceeds it
};

// sum_i wedge_matrix(i, p, a) (x) slice(i). Rational.
DenseMatrix psi_apply(unsigned p, const Tensor3& t);

// Exact rank over Q when `exact`, so the bound is unconditional. Otherwise
// the rank of the reduction mod cfg.modulus, which can only undercount; the
// certificate is then marked inexact.
BorderRankCertificate certify(const Tensor3& t, unsigned p, bool exact,
                              const SamplingConfig& cfg = {});

// m = 2p+1, slices Q~_{i-p-1}: (S_r (+) S_r) without its last row/column.
Tensor3 explicit_tensor(unsigned p);

struct EquationsReport {
  unsigned p = 0, m = 0;
  std::size_t observed_rank = 0;
  std::size_t threshold_D = 0;  // C(2p,p)(2m-4)
  std::size_t full_rank = 0;    // m C(2p+1,p)
  bool exceeds_threshold = false;
  bool full = false;
  BlowupRankReport report;
};
EquationsReport equations_threshold_check(unsigned p, const SamplingConfig& cfg);

}  // namespace ncrank
