#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <gmpxx.h>

#include "ncrank/exactmat.hpp"
#include "ncrank/random.hpp"

namespace ncrank {

// A = X_0 + t_1 X_1 + ... + t_m X_m, stored sparsely. Variable index 0 is the
// constant term; 1..m are the t_i.
class LinearPencil {
 public:
  struct Entry {
    std::uint32_t row, col, var;
    mpq_class value;
  };

  LinearPencil(std::size_t rows, std::size_t cols, std::size_t num_vars, ScalarDomain dom);
  static LinearPencil from_matrices(const DenseMatrix& constant,
                                    const std::vector<DenseMatrix>& coeffs);
  // Bulk construction; duplicate positions are summed.
  static LinearPencil from_entries(std::size_t rows, std::size_t cols, std::size_t num_vars,
                                   ScalarDomain dom, std::vector<Entry> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t num_vars() const { return num_vars_; }
  const ScalarDomain& domain() const { return dom_; }

  // Accumulates into the existing coefficient. Prime-domain values are
  // reduced on entry.
  void add(std::size_t row, std::size_t col, std::size_t var, const mpq_class& value);

  // Nonzero entries sorted by (var, row, col).
  std::vector<Entry> entries() const;
  std::size_t nnz() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }

  DenseMatrix matrix(std::size_t var) const;
  DenseMatrix constant() const { return matrix(0); }
  // k in 1..num_vars
  DenseMatrix coeff(std::size_t k) const;

  // Reduction of a Rational pencil; prime pencils with the same modulus pass
  // through.
  LinearPencil reduced(std::uint64_t modulus) const;

  friend bool operator==(const LinearPencil& a, const LinearPencil& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.num_vars_ == b.num_vars_ &&
           a.dom_ == b.dom_ && a.coeffs_ == b.coeffs_;
  }

 private:
  using Key = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;  // var, row, col
  std::size_t rows_, cols_, num_vars_;
  ScalarDomain dom_;
  std::map<Key, mpq_class> coeffs_;
};

struct NotStabilized : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BlowupRankReport {
  std::size_t d = 0;
  std::size_t observed_rank = 0;
  unsigned trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t modulus = 0;
  bool divisible_by_d = true;
  bool full = false;
};

// r(p, q) for 0 <= p <= p_max, 0 <= q <= q_max; row/column 0 are zero.
struct BlowupProfile {
  std::size_t p_max = 0, q_max = 0;
  std::vector<std::vector<std::size_t>> r;
};

struct ProfileViolation {
  int check;  // 1: increase in q, 2: concavity in q, 3: increase in p, 4: concavity in p
  std::size_t p, q;
  std::string detail;
};

struct MonotoneAudit {
  std::size_t d_start = 1;
  bool asserted = true;  // false for rectangular pencils: observed only
  bool retried = false;  // first pass failed; these are the trials x4 results
  std::vector<BlowupRankReport> reports;
  std::vector<std::size_t> violations;  // d with r(d+1)/(d+1) < r(d)/d
  bool passed() const { return !asserted || violations.empty(); }
};

struct RatioReport {
  std::size_t crk = 0, ncrk = 0;
  bool has_ratio = false;
  mpq_class ratio;
  bool bound_holds = true;  // ncrk < 2 crk, or the zero pencil
};

// X_0 (x) I_d + sum_i X_i (x) S_i.
DenseMatrix evaluate(const LinearPencil& a, const std::vector<DenseMatrix>& subs, std::size_t d);

// Rank mod p of the (p,q) blow-up sum_v X_v (x) T_v, one p x q matrix per
// variable index 0..m. Chooses a dense or sparse kernel by size and fill.
std::size_t blowup_rank_mod(const LinearPencil& a_mod, const std::vector<DenseMatrix>& mats,
                            std::size_t p, std::size_t q);

std::size_t crank_estimate(const LinearPencil& a, const SamplingConfig& cfg);
BlowupRankReport blowup_rank_estimate(const LinearPencil& a, std::size_t d,
                                      const SamplingConfig& cfg);
// Throws NotStabilized when the blow-up rank at d* = max(rows, cols) is not a
// multiple of d*.
std::size_t ncrank(const LinearPencil& a, const SamplingConfig& cfg);

std::vector<BlowupRankReport> regularity_audit(const LinearPencil& a, std::size_t d_max,
                                               const SamplingConfig& cfg);
bool regularity_passed(const std::vector<BlowupRankReport>& reports);

// Rectangular blow-ups: each of X_0..X_m gets its own random p x q matrix.
std::size_t rect_blowup_rank_estimate(const LinearPencil& a, std::size_t p, std::size_t q,
                                      const SamplingConfig& cfg);
BlowupProfile profile(const LinearPencil& a, std::size_t p_max, std::size_t q_max,
                      const SamplingConfig& cfg);
std::vector<ProfileViolation> concavity_audit(const BlowupProfile& prof);

struct ConcavityCheck {
  BlowupProfile profile;
  std::vector<ProfileViolation> violations;
  bool retried = false;
};
// profile + concavity_audit; on violations the profile is recomputed once
// with four times the trials before the result is reported.
ConcavityCheck concavity_check(const LinearPencil& a, std::size_t p_max, std::size_t q_max,
                               const SamplingConfig& cfg);

// r(d,d)/d weakly increasing for d >= max(1, ceil(n/2) - 1), n = rows = cols.
// Violations trigger one re-run with four times the trials.
MonotoneAudit monotone_audit(const LinearPencil& a, std::size_t d_max, const SamplingConfig& cfg);

RatioReport ratio_audit(const LinearPencil& a, const SamplingConfig& cfg);

// Zero constant term; each X_i is a product of random integer factors with a
// random inner dimension in 1..min(rows, cols), so ranks vary across
// coefficients. Entries of the factors lie in [-2, 2]. Rational domain.
LinearPencil random_pencil(std::size_t rows, std::size_t cols, std::size_t vars,
                           std::mt19937_64& rng);

}  // namespace ncrank
