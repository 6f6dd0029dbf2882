#include "ncrank/exactmat.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ncrank {

namespace {

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 r = 1, x = b % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t sp : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % sp == 0) return n == sp;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * x % n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

ModField::ModField(std::uint64_t p) : p_(p), mersenne61_(p == kDefaultModulus) {}

std::uint64_t ModField::inv(std::uint64_t a) const {
  if (a == 0) throw std::domain_error("inverse of zero in prime field");
  // extended Euclid on signed 128-bit
  __int128 t = 0, nt = 1, r = p_, nr = a;
  while (nr != 0) {
    __int128 qt = r / nr;
    __int128 tmp = t - qt * nt;
    t = nt;
    nt = tmp;
    tmp = r - qt * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += p_;
  return static_cast<std::uint64_t>(t);
}

std::uint64_t ModField::reduce(const mpz_class& z) const {
  static_assert(sizeof(unsigned long) == 8, "residues must fit an unsigned long");
  return mpz_fdiv_ui(z.get_mpz_t(), p_);
}

std::uint64_t ModField::reduce(const mpq_class& q) const {
  std::uint64_t num = reduce(q.get_num());
  std::uint64_t den = reduce(q.get_den());
  if (den == 0) throw std::domain_error("denominator divisible by the modulus");
  return den == 1 ? num : mul(num, inv(den));
}

std::uint64_t ModField::from_int(std::int64_t v) const {
  if (v >= 0) return static_cast<std::uint64_t>(v) % p_;
  std::uint64_t m = static_cast<std::uint64_t>(-(v + 1)) % p_;  // avoids INT64_MIN overflow
  return p_ - 1 - m;
}

ScalarDomain ScalarDomain::prime(std::uint64_t modulus) {
  if (modulus >= (1ULL << 63) || !is_prime_u64(modulus)) {
    throw std::invalid_argument("modulus " + std::to_string(modulus) +
                                " is not a prime below 2^63");
  }
  return ScalarDomain(Kind::PrimeField, modulus);
}

std::string ScalarDomain::describe() const {
  return is_rational() ? std::string("rational") : "prime:" + std::to_string(modulus_);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, ScalarDomain dom)
    : rows_(rows), cols_(cols), dom_(dom) {
  if (dom_.is_rational())
    q_.assign(rows * cols, mpq_class(0));
  else
    r_.assign(rows * cols, 0);
}

DenseMatrix DenseMatrix::identity(std::size_t n, ScalarDomain dom) {
  DenseMatrix m(n, n, dom);
  for (std::size_t i = 0; i < n; ++i) m.set_int(i, i, 1);
  return m;
}

DenseMatrix DenseMatrix::from_ints(const std::vector<std::vector<long>>& rows,
                                   ScalarDomain dom) {
  std::size_t nr = rows.size(), nc = nr ? rows[0].size() : 0;
  DenseMatrix m(nr, nc, dom);
  for (std::size_t i = 0; i < nr; ++i) {
    if (rows[i].size() != nc) throw std::invalid_argument("ragged matrix literal");
    for (std::size_t j = 0; j < nc; ++j) m.set_int(i, j, rows[i][j]);
  }
  return m;
}

void DenseMatrix::set_q(std::size_t i, std::size_t j, const mpq_class& v) {
  mpq_class& e = q_[i * cols_ + j];
  e = v;
  e.canonicalize();
}

void DenseMatrix::set(std::size_t i, std::size_t j, const mpq_class& v) {
  if (dom_.is_rational())
    set_q(i, j, v);
  else
    r_[i * cols_ + j] = dom_.field().reduce(v);
}

void DenseMatrix::set_int(std::size_t i, std::size_t j, long v) {
  if (dom_.is_rational())
    q_[i * cols_ + j] = v;
  else
    r_[i * cols_ + j] = dom_.field().from_int(v);
}

mpq_class DenseMatrix::get(std::size_t i, std::size_t j) const {
  if (dom_.is_rational()) return q_[i * cols_ + j];
  mpz_class z;
  mpz_set_ui(z.get_mpz_t(), r_[i * cols_ + j]);
  return mpq_class(z);
}

bool DenseMatrix::is_zero_at(std::size_t i, std::size_t j) const {
  return dom_.is_rational() ? sgn(q_[i * cols_ + j]) == 0 : r_[i * cols_ + j] == 0;
}

std::string DenseMatrix::entry_string(std::size_t i, std::size_t j) const {
  return dom_.is_rational() ? q_[i * cols_ + j].get_str() : std::to_string(r_[i * cols_ + j]);
}

bool DenseMatrix::is_zero() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!is_zero_at(i, j)) return false;
  return true;
}

bool DenseMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  return *this == identity(rows_, dom_);
}

void DenseMatrix::check_same(const DenseMatrix& o, const char* what) const {
  if (!(dom_ == o.dom_)) throw std::invalid_argument(std::string(what) + ": domain mismatch");
}

DenseMatrix DenseMatrix::operator+(const DenseMatrix& o) const {
  check_same(o, "add");
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("add: shape mismatch");
  DenseMatrix out(rows_, cols_, dom_);
  if (dom_.is_rational()) {
    for (std::size_t k = 0; k < q_.size(); ++k) out.q_[k] = q_[k] + o.q_[k];
  } else {
    ModField f = dom_.field();
    for (std::size_t k = 0; k < r_.size(); ++k) out.r_[k] = f.add(r_[k], o.r_[k]);
  }
  return out;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& o) const {
  return *this + o.scaled(mpq_class(-1));
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& o) const {
  check_same(o, "mul");
  if (cols_ != o.rows_) throw std::invalid_argument("mul: shape mismatch");
  DenseMatrix out(rows_, o.cols_, dom_);
  if (dom_.is_rational()) {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const mpq_class& a = q_[i * cols_ + k];
        if (sgn(a) == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) out.q_[i * o.cols_ + j] += a * o.q_[k * o.cols_ + j];
      }
  } else {
    ModField f = dom_.field();
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        std::uint64_t a = r_[i * cols_ + k];
        if (a == 0) continue;
        std::uint64_t* dst = out.r_.data() + i * o.cols_;
        const std::uint64_t* src = o.r_.data() + k * o.cols_;
        for (std::size_t j = 0; j < o.cols_; ++j) dst[j] = f.add(dst[j], f.mul(a, src[j]));
      }
  }
  return out;
}

DenseMatrix DenseMatrix::scaled(const mpq_class& c) const {
  DenseMatrix out(rows_, cols_, dom_);
  if (dom_.is_rational()) {
    for (std::size_t k = 0; k < q_.size(); ++k) out.q_[k] = q_[k] * c;
  } else {
    ModField f = dom_.field();
    std::uint64_t cr = f.reduce(c);
    for (std::size_t k = 0; k < r_.size(); ++k) out.r_[k] = f.mul(r_[k], cr);
  }
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(cols_, rows_, dom_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      if (dom_.is_rational())
        out.q_[j * rows_ + i] = q_[i * cols_ + j];
      else
        out.r_[j * rows_ + i] = r_[i * cols_ + j];
    }
  return out;
}

bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
  return a.dom_ == b.dom_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.q_ == b.q_ &&
         a.r_ == b.r_;
}

namespace {

// Fraction-free elimination (Bareiss) with column skipping. Every entry
// remaining below the current pivot row is a minor of the original matrix,
// so the division by the previous pivot is exact.
std::size_t bareiss_rank(std::vector<mpz_class> a, std::size_t rows, std::size_t cols) {
  std::size_t rk = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && rk < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = rk; i < rows; ++i)
      if (sgn(a[i * cols + c]) != 0) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    if (piv != rk)
      for (std::size_t j = c; j < cols; ++j) std::swap(a[piv * cols + j], a[rk * cols + j]);
    const mpz_class p = a[rk * cols + c];
    for (std::size_t i = rk + 1; i < rows; ++i) {
      mpz_class f = a[i * cols + c];
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_class& e = a[i * cols + j];
        e = e * p - f * a[rk * cols + j];
        mpz_divexact(e.get_mpz_t(), e.get_mpz_t(), prev.get_mpz_t());
      }
      a[i * cols + c] = 0;
    }
    prev = p;
    ++rk;
  }
  return rk;
}

}  // namespace

std::size_t rank_mod_inplace(std::vector<std::uint64_t>& a, std::size_t rows,
                             std::size_t cols, const ModField& f) {
  std::size_t rk = 0;
  for (std::size_t c = 0; c < cols && rk < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = rk; i < rows; ++i)
      if (a[i * cols + c] != 0) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    if (piv != rk)
      std::swap_ranges(a.begin() + piv * cols + c, a.begin() + piv * cols + cols,
                       a.begin() + rk * cols + c);
    std::uint64_t* prow = a.data() + rk * cols;
    std::uint64_t pinv = f.inv(prow[c]);
    for (std::size_t i = rk + 1; i < rows; ++i) {
      std::uint64_t* row = a.data() + i * cols;
      if (row[c] == 0) continue;
      std::uint64_t factor = f.mul(row[c], pinv);
      std::uint64_t nf = f.neg(factor);
      row[c] = 0;
      for (std::size_t j = c + 1; j < cols; ++j)
        if (prow[j]) row[j] = f.add(row[j], f.mul(nf, prow[j]));
    }
    ++rk;
  }
  return rk;
}

std::size_t rank(const DenseMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0) return 0;
  if (m.domain().is_prime()) {
    std::vector<std::uint64_t> a(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) std::copy_n(m.row_ptr(i), cols, a.begin() + i * cols);
    return rank_mod_inplace(a, rows, cols, m.domain().field());
  }
  std::vector<mpz_class> a(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < cols; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m.q(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < cols; ++j) {
      const mpq_class& v = m.q(i, j);
      a[i * cols + j] = v.get_num() * (l / v.get_den());
    }
  }
  return bareiss_rank(std::move(a), rows, cols);
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  if (!(a.domain() == b.domain())) throw std::invalid_argument("kron: domain mismatch");
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols(), a.domain());
  const bool rat = a.domain().is_rational();
  ModField f(rat ? 2 : a.domain().modulus());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a.is_zero_at(i, j)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) {
          std::size_t oi = i * b.rows() + k, oj = j * b.cols() + l;
          if (rat)
            out.set_q(oi, oj, a.q(i, j) * b.q(k, l));
          else
            out.set_r(oi, oj, f.mul(a.r(i, j), b.r(k, l)));
        }
    }
  return out;
}

std::optional<DenseMatrix> inverse(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix is not square");
  const std::size_t n = m.rows();
  DenseMatrix inv = DenseMatrix::identity(n, m.domain());
  if (m.domain().is_rational()) {
    std::vector<mpq_class> a(n * n), b(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        a[i * n + j] = m.q(i, j);
        b[i * n + j] = i == j ? 1 : 0;
      }
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = n;
      for (std::size_t i = c; i < n; ++i)
        if (sgn(a[i * n + c]) != 0) {
          piv = i;
          break;
        }
      if (piv == n) return std::nullopt;
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a[piv * n + j], a[c * n + j]);
        std::swap(b[piv * n + j], b[c * n + j]);
      }
      mpq_class pinv = 1 / a[c * n + c];
      for (std::size_t j = 0; j < n; ++j) {
        a[c * n + j] *= pinv;
        b[c * n + j] *= pinv;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (i == c || sgn(a[i * n + c]) == 0) continue;
        mpq_class fct = a[i * n + c];
        for (std::size_t j = 0; j < n; ++j) {
          a[i * n + j] -= fct * a[c * n + j];
          b[i * n + j] -= fct * b[c * n + j];
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) inv.set_q(i, j, b[i * n + j]);
    return inv;
  }
  ModField f = m.domain().field();
  std::vector<std::uint64_t> a(n * 2 * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(m.row_ptr(i), n, a.begin() + i * 2 * n);
    a[i * 2 * n + n + i] = 1;
  }
  const std::size_t w = 2 * n;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = c; i < n; ++i)
      if (a[i * w + c] != 0) {
        piv = i;
        break;
      }
    if (piv == n) return std::nullopt;
    if (piv != c) std::swap_ranges(a.begin() + piv * w, a.begin() + piv * w + w, a.begin() + c * w);
    std::uint64_t pinv = f.inv(a[c * w + c]);
    for (std::size_t j = 0; j < w; ++j) a[c * w + j] = f.mul(a[c * w + j], pinv);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i * w + c] == 0) continue;
      std::uint64_t nf = f.neg(a[i * w + c]);
      for (std::size_t j = 0; j < w; ++j)
        if (a[c * w + j]) a[i * w + j] = f.add(a[i * w + j], f.mul(nf, a[c * w + j]));
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.set_r(i, j, a[i * w + n + j]);
  return inv;
}

DenseMatrix direct_sum(const DenseMatrix& a, const DenseMatrix& b) {
  if (!(a.domain() == b.domain())) throw std::invalid_argument("direct_sum: domain mismatch");
  DenseMatrix out(a.rows() + b.rows(), a.cols() + b.cols(), a.domain());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.set(i, j, a.get(i, j));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out.set(a.rows() + i, a.cols() + j, b.get(i, j));
  return out;
}

DenseMatrix delete_last_row_col(const DenseMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0)
    throw std::invalid_argument("delete_last_row_col: matrix has no row or column to remove");
  DenseMatrix out(m.rows() - 1, m.cols() - 1, m.domain());
  for (std::size_t i = 0; i + 1 < m.rows(); ++i)
    for (std::size_t j = 0; j + 1 < m.cols(); ++j) out.set(i, j, m.get(i, j));
  return out;
}

DenseMatrix reduce_mod(const DenseMatrix& m, std::uint64_t modulus) {
  ScalarDomain dom = ScalarDomain::prime(modulus);
  if (m.domain() == dom) return m;
  if (m.domain().is_prime()) throw std::invalid_argument("reduce_mod: matrix already lives in another prime field");
  DenseMatrix out(m.rows(), m.cols(), dom);
  ModField f(modulus);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m.q(i, j)) != 0) out.set_r(i, j, f.reduce(m.q(i, j)));
  return out;
}

}  // namespace ncrank
