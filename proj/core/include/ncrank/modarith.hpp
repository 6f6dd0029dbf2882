#pragma once

#include <cstdint>
#include <gmpxx.h>

namespace ncrank {

// 2^61 - 1. Mersenne, so products reduce with a shift and an add.
inline constexpr std::uint64_t kDefaultModulus = 2305843009213693951ULL;

// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime_u64(std::uint64_t n);

// Arithmetic in Z/p for a prime p < 2^63.
class ModField {
 public:
  explicit ModField(std::uint64_t p);

  std::uint64_t modulus() const { return p_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    unsigned __int128 x = static_cast<unsigned __int128>(a) * b;
    if (mersenne61_) {
      std::uint64_t lo = static_cast<std::uint64_t>(x) & kDefaultModulus;
      std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
      std::uint64_t r = lo + hi;
      return r >= kDefaultModulus ? r - kDefaultModulus : r;
    }
    return static_cast<std::uint64_t>(x % p_);
  }

  // a must be nonzero.
  std::uint64_t inv(std::uint64_t a) const;

  // Reduce an arbitrary rational. Throws std::domain_error when p divides
  // the denominator.
  std::uint64_t reduce(const mpq_class& q) const;
  std::uint64_t reduce(const mpz_class& z) const;
  std::uint64_t from_int(std::int64_t v) const;

 private:
  std::uint64_t p_;
  bool mersenne61_;
};

}  // namespace ncrank
