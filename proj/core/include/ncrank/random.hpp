#pragma once

#include <cstdint>
#include <random>

#include "ncrank/exactmat.hpp"

namespace ncrank {

// Used when neither a --seed flag nor NCRANK_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 0x6e63726bULL;
inline constexpr unsigned kDefaultTrials = 8;

struct SamplingConfig {
  std::uint64_t seed = kDefaultSeed;
  unsigned trials = kDefaultTrials;
  std::uint64_t modulus = kDefaultModulus;
};

// Independent stream for (seed, index); the result does not depend on the
// order in which streams are requested.
std::mt19937_64 derive_stream(std::uint64_t seed, std::uint64_t index);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

std::uint64_t random_residue(std::mt19937_64& rng, const ModField& f);
DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t modulus,
                          std::mt19937_64& rng);

}  // namespace ncrank
