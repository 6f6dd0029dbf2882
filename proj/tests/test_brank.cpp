#include <doctest.h>

#include <random>

#include "ncrank/brank.hpp"
#include "ncrank/wedge.hpp"

using namespace ncrank;

namespace {

// Sum of r random integral rank-one tensors.
Tensor3 random_rank_r(std::size_t a, std::size_t b, std::size_t c, std::size_t r, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> e(-2, 2);
  Tensor3 t(a, b, c);
  for (std::size_t k = 0; k < r; ++k) {
    std::vector<long> x(a), y(b), z(c);
    for (auto& v : x) v = e(rng);
    for (auto& v : y) v = e(rng);
    for (auto& v : z) v = e(rng);
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = 0; j < b; ++j)
        for (std::size_t l = 0; l < c; ++l) t.set(i, j, l, t.at(i, j, l) + x[i] * y[j] * z[l]);
  }
  return t;
}

Tensor3 random_tensor(std::size_t a, std::size_t b, std::size_t c, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> e(-4, 4);
  Tensor3 t(a, b, c);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t l = 0; l < c; ++l) t.set(i, j, l, e(rng));
  return t;
}

}  // namespace

TEST_SUITE("brank") {
  TEST_CASE("psi is linear") {
    std::mt19937_64 rng(21);
    for (unsigned p = 1; p <= 2; ++p) {
      auto t = random_tensor(5, 3, 4, rng), u = random_tensor(5, 3, 4, rng);
      const mpq_class al(3, 2), be(-5);
      CHECK(psi_apply(p, t.combine(al, u, be)) == psi_apply(p, t).scaled(al) + psi_apply(p, u).scaled(be));
    }
  }

  TEST_CASE("rank one and zero tensors") {
    Tensor3 t(5, 3, 3);
    t.set(0, 0, 0, 1);
    for (unsigned p = 1; p <= 3; ++p) {
      auto c = certify(t, p, true);
      CHECK(c.psi_rank == binomial(4, p));
      CHECK(c.lower_bound == 1);
    }
    CHECK(psi_apply(2, Tensor3(5, 2, 2)).is_zero());
    CHECK(certify(Tensor3(5, 2, 2), 2, true).lower_bound == 0);
  }

  TEST_CASE("rank-r tensors give psi rank at most r times the map rank") {
    std::mt19937_64 rng(22);
    for (std::size_t r = 1; r <= 3; ++r)
      for (unsigned p = 1; p <= 2; ++p) {
        auto t = random_rank_r(5, 4, 4, r, rng);
        auto c = certify(t, p, true);
        CHECK(c.psi_rank <= r * c.xl_rank);
        CHECK(c.lower_bound <= r);
      }
  }

  TEST_CASE("bound never exceeds the trivial flattening") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 6; ++k) {
      auto t = random_tensor(5, 2 + k % 3, 3, rng);
      auto c = certify(t, 1 + k % 2, true);
      CHECK(c.lower_bound <= std::min(t.a(), t.b() * t.c()));
    }
  }

  TEST_CASE("psi rank is bounded by the blow-up of the wedge space") {
    std::mt19937_64 rng(24);
    SamplingConfig cfg;
    for (unsigned p = 1; p <= 2; ++p) {
      auto t = random_tensor(5, 2, 3, rng);
      auto c = certify(t, p, true);
      CHECK(c.psi_rank <= rect_blowup_rank_estimate(wedge_pencil(p, 5), 2, 3, cfg));
    }
  }

  TEST_CASE("prime certificate agrees with exact on integral input") {
    std::mt19937_64 rng(25);
    auto t = random_tensor(5, 3, 3, rng);
    auto ex = certify(t, 2, true), pr = certify(t, 2, false);
    CHECK(ex.exact);
    CHECK_FALSE(pr.exact);
    CHECK(pr.psi_rank == ex.psi_rank);
  }

  TEST_CASE("explicit tensors") {
    const auto q = ScalarDomain::rational();
    auto t1 = explicit_tensor(1);
    CHECK(t1.a() == 3);
    CHECK(t1.slice(1) == DenseMatrix::identity(3, q));
    CHECK(t1.slice(0) == delete_last_row_col(direct_sum(shift_matrix(-1, 1), shift_matrix(-1, 1))));
    for (unsigned p = 1; p <= 3; ++p) {
      auto t = explicit_tensor(p);
      bool binary = true;
      for (std::size_t i = 0; i < t.a(); ++i)
        for (std::size_t j = 0; j < t.b(); ++j)
          for (std::size_t k = 0; k < t.c(); ++k) binary = binary && (t.at(i, j, k) == 0 || t.at(i, j, k) == 1);
      CHECK(binary);
    }
    CHECK(certify(explicit_tensor(2), 2, true).psi_rank >= 40);
    const std::size_t bounds[] = {0, 3, 7, 11};
    for (unsigned p = 1; p <= 3; ++p) CHECK(certify(explicit_tensor(p), p, true).lower_bound >= bounds[p]);
  }

  TEST_CASE("equations threshold") {
    SamplingConfig cfg;
    const std::size_t thr[] = {0, 4, 36, 200}, full[] = {0, 9, 50, 245};
    for (unsigned p = 1; p <= 3; ++p) {
      auto e = equations_threshold_check(p, cfg);
      CHECK(e.threshold_D == thr[p]);
      CHECK(e.full_rank == full[p]);
      CHECK(e.exceeds_threshold);
    }
    CHECK(equations_threshold_check(2, cfg).observed_rank == 50);
  }

  TEST_CASE("tensor json round trip") {
    std::mt19937_64 rng(26);
    auto t = random_tensor(3, 2, 4, rng);
    t.set(0, 1, 2, mpq_class(-3, 7));
    const std::string s = tensor_to_json(t);
    CHECK(tensor_from_json(s) == t);
    CHECK(tensor_to_json(tensor_from_json(s)) == s);
    CHECK_THROWS_AS(tensor_from_json("[]"), std::invalid_argument);
  }
}
