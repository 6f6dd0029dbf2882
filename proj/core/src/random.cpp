#include "ncrank/random.hpp"

namespace ncrank {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::mt19937_64 derive_stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(derive_seed(seed, index));
}

std::uint64_t random_residue(std::mt19937_64& rng, const ModField& f) {
  // rejection sampling keeps the draw uniform and portable across stdlibs
  const std::uint64_t p = f.modulus();
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % p;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % p;
}

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t modulus,
                          std::mt19937_64& rng) {
  DenseMatrix m(rows, cols, ScalarDomain::prime(modulus));
  ModField f(modulus);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set_r(i, j, random_residue(rng, f));
  return m;
}

}  // namespace ncrank
