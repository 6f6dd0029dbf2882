#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ncrank/modarith.hpp"

namespace ncrank {

class ScalarDomain {
 public:
  enum class Kind { Rational, PrimeField };

  static ScalarDomain rational() { return ScalarDomain(Kind::Rational, 0); }
  // Throws std::invalid_argument unless modulus is a prime in [2, 2^63).
  static ScalarDomain prime(std::uint64_t modulus = kDefaultModulus);

  Kind kind() const { return kind_; }
  bool is_rational() const { return kind_ == Kind::Rational; }
  bool is_prime() const { return kind_ == Kind::PrimeField; }
  std::uint64_t modulus() const { return modulus_; }
  ModField field() const { return ModField(modulus_); }

  std::string describe() const;

  friend bool operator==(const ScalarDomain& a, const ScalarDomain& b) {
    return a.kind_ == b.kind_ && a.modulus_ == b.modulus_;
  }

 private:
  ScalarDomain(Kind k, std::uint64_t m) : kind_(k), modulus_(m) {}
  Kind kind_;
  std::uint64_t modulus_;
};

// Row-major dense matrix. Rational entries live in `q_` (canonical mpq),
// prime-field entries in `r_` as residues in [0, p).
class DenseMatrix {
 public:
  DenseMatrix() : DenseMatrix(0, 0, ScalarDomain::rational()) {}
  DenseMatrix(std::size_t rows, std::size_t cols, ScalarDomain dom);

  static DenseMatrix identity(std::size_t n, ScalarDomain dom);
  static DenseMatrix from_ints(const std::vector<std::vector<long>>& rows,
                               ScalarDomain dom);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const ScalarDomain& domain() const { return dom_; }

  // Rational-domain accessors.
  const mpq_class& q(std::size_t i, std::size_t j) const { return q_[i * cols_ + j]; }
  void set_q(std::size_t i, std::size_t j, const mpq_class& v);

  // Prime-domain accessors.
  std::uint64_t r(std::size_t i, std::size_t j) const { return r_[i * cols_ + j]; }
  void set_r(std::size_t i, std::size_t j, std::uint64_t v) { r_[i * cols_ + j] = v; }
  std::uint64_t* row_ptr(std::size_t i) { return r_.data() + i * cols_; }
  const std::uint64_t* row_ptr(std::size_t i) const { return r_.data() + i * cols_; }

  // Domain-agnostic: rational values are reduced when the domain is prime.
  void set(std::size_t i, std::size_t j, const mpq_class& v);
  void set_int(std::size_t i, std::size_t j, long v);
  // Value as a rational (prime residues are returned as integers).
  mpq_class get(std::size_t i, std::size_t j) const;
  bool is_zero_at(std::size_t i, std::size_t j) const;
  std::string entry_string(std::size_t i, std::size_t j) const;

  bool is_zero() const;
  bool is_identity() const;

  DenseMatrix operator+(const DenseMatrix& o) const;
  DenseMatrix operator-(const DenseMatrix& o) const;
  DenseMatrix operator*(const DenseMatrix& o) const;
  DenseMatrix scaled(const mpq_class& c) const;
  DenseMatrix transpose() const;

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b);

 private:
  void check_same(const DenseMatrix& o, const char* what) const;

  std::size_t rows_, cols_;
  ScalarDomain dom_;
  std::vector<mpq_class> q_;
  std::vector<std::uint64_t> r_;
};

// Exact rank. Bareiss over the integers after clearing row denominators for
// Rational; plain elimination for PrimeField. Pivot: first nonzero row in
// column order.
std::size_t rank(const DenseMatrix& m);

// Rank of a residue matrix, destroying its contents. Used by hot paths that
// already own a scratch buffer.
std::size_t rank_mod_inplace(std::vector<std::uint64_t>& a, std::size_t rows,
                             std::size_t cols, const ModField& f);

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);
// std::nullopt is the Singular outcome.
std::optional<DenseMatrix> inverse(const DenseMatrix& m);
DenseMatrix direct_sum(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix delete_last_row_col(const DenseMatrix& m);
// Rational -> PrimeField reduction. Prime input is returned unchanged if the
// modulus matches.
DenseMatrix reduce_mod(const DenseMatrix& m, std::uint64_t modulus);

// Sparse row over Z/p: strictly increasing columns, nonzero values.
struct SparseRow {
  std::vector<std::uint32_t> cols;
  std::vector<std::uint64_t> vals;
};

// Rank over Z/p of a matrix given by rows. Rows are consumed.
std::size_t sparse_rank_mod(std::vector<SparseRow> rows, std::size_t ncols,
                            const ModField& f);

}  // namespace ncrank
