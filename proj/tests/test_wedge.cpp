#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "ncrank/wedge.hpp"

using namespace ncrank;

namespace {

bool is_skew(const DenseMatrix& m) { return m + m.transpose() == DenseMatrix(m.rows(), m.cols(), m.domain()); }

DenseMatrix row_signed_permutation(const std::vector<int>& perm, int signs) {
  DenseMatrix p(perm.size(), perm.size(), ScalarDomain::rational());
  for (std::size_t i = 0; i < perm.size(); ++i) p.set_int(i, perm[i], (signs >> i) & 1 ? -1 : 1);
  return p;
}

}  // namespace

TEST_SUITE("wedge") {
  TEST_CASE("basis") {
    CHECK(binomial(7, 3) == 35);
    CHECK(binomial(3, 5) == 0);
    auto b = SubsetBasis::lex(4, 2);
    REQUIRE(b.size() == 6);
    CHECK(b.subset(0) == Subset{1, 2});
    CHECK(b.subset(5) == Subset{3, 4});
    CHECK(b.index_of({2, 4}) == 4);
    CHECK_THROWS_AS(b.index_of({1, 1}), std::out_of_range);
  }

  TEST_CASE("degree zero gives standard columns") {
    for (unsigned i = 1; i <= 4; ++i) {
      auto m = wedge_matrix(i, 0, 4);
      REQUIRE(m.rows() == 4);
      REQUIRE(m.cols() == 1);
      for (unsigned r = 0; r < 4; ++r) CHECK(m.get(r, 0) == (r + 1 == i ? 1 : 0));
    }
  }

  TEST_CASE("anticommutativity") {
    for (unsigned n = 3; n <= 6; ++n)
      for (unsigned p = 0; p + 2 <= n; ++p)
        for (unsigned i = 1; i <= n; ++i) {
          const auto li = wedge_matrix(i, p, n), li1 = wedge_matrix(i, p + 1, n);
          CHECK((li1 * li).is_zero());
          for (unsigned j = i + 1; j <= n; ++j) {
            const auto lj = wedge_matrix(j, p, n), lj1 = wedge_matrix(j, p + 1, n);
            CHECK(li1 * lj == (lj1 * li).scaled(-1));
          }
        }
  }

  TEST_CASE("each map has rank C(n-1, p)") {
    for (unsigned n = 2; n <= 7; ++n)
      for (unsigned p = 0; p < n; ++p)
        for (unsigned i = 1; i <= n; ++i) CHECK(rank(wedge_matrix(i, p, n)) == binomial(n - 1, p));
  }

  TEST_CASE("A(1,3) spans the skew-symmetric 3x3 matrices") {
    // Some signed reordering of the target basis makes all three maps skew;
    // they are independent, so they span all of the 3-dimensional space.
    std::vector<int> perm{0, 1, 2};
    bool found = false;
    do {
      for (int s = 0; s < 8 && !found; ++s) {
        auto p = row_signed_permutation(perm, s);
        bool ok = true;
        for (unsigned i = 1; i <= 3; ++i) ok = ok && is_skew(p * wedge_matrix(i, 1, 3));
        found = ok;
      }
    } while (!found && std::next_permutation(perm.begin(), perm.end()));
    CHECK(found);
    DenseMatrix stacked(3, 9, ScalarDomain::rational());
    for (unsigned i = 1; i <= 3; ++i) {
      auto m = wedge_matrix(i, 1, 3);
      for (std::size_t k = 0; k < 9; ++k) stacked.set(i - 1, k, m.get(k / 3, k % 3));
    }
    CHECK(rank(stacked) == 3);
  }

  TEST_CASE("pencil shape and commutative rank") {
    SamplingConfig cfg;
    for (unsigned p = 1; p <= 3; ++p) {
      auto a = wedge_pencil(p, 2 * p + 1);
      CHECK(a.rows() == binomial(2 * p + 1, p));
      CHECK(a.cols() == a.rows());
    }
    CHECK(crank_estimate(wedge_pencil(1, 3), cfg) == 2);
    CHECK(crank_estimate(wedge_pencil(2, 5), cfg) == 6);
    CHECK(crank_estimate(wedge_pencil(2, 6), cfg) == binomial(5, 2));
  }

  TEST_CASE("recursive block form") {
    const std::pair<unsigned, unsigned> cases[] = {{1, 3}, {1, 4}, {2, 5}, {2, 6}, {3, 7}};
    for (auto [p, n] : cases) {
      auto b = block_structure_check(p, n);
      CHECK_MESSAGE(b.ok, "p=" << p << " n=" << n);
      CHECK(b.identity_size == binomial(n - 1, p));  // L_{e_n} pairs the two blocks of size C(n-1,p)
    }
  }

  TEST_CASE("split bases are signed permutations of lex bases") {
    auto src = SubsetBasis::split_source(5, 2), tgt = SubsetBasis::split_target(5, 2);
    CHECK(src.size() == binomial(5, 2));
    CHECK(tgt.size() == binomial(5, 3));
    auto lex = SubsetBasis::lex(5, 2);
    for (std::size_t j = 0; j < src.size(); ++j) CHECK_NOTHROW(lex.index_of(src.subset(j)));
  }

  TEST_CASE("shift matrices") {
    const auto q = ScalarDomain::rational();
    CHECK(shift_matrix(0, 2) == DenseMatrix::identity(3, q));
    auto s = shift_matrix(1, 2);
    CHECK(s.get(1, 0) == 1);
    CHECK(s.get(2, 1) == 1);
    CHECK(rank(s) == 2);
    CHECK_THROWS_AS(shift_matrix(3, 2), std::out_of_range);
  }

  TEST_CASE("toeplitz witness") {
    const std::size_t sizes[] = {0, 6, 30, 140};
    for (unsigned p = 1; p <= 3; ++p) {
      auto w = certify_witness(p);
      CHECK(w.size == sizes[p]);
      CHECK(w.rank == sizes[p]);
      CHECK(w.full);
      CHECK(w.rank % (p + 1) == 0);
    }
    CHECK(rank(toeplitz_witness(1)) == 6);
  }

  TEST_CASE("ratio reports") {
    SamplingConfig cfg;
    const std::size_t crk[] = {0, 2, 6, 20}, nc[] = {0, 3, 10, 35};
    for (unsigned p = 1; p <= 3; ++p) {
      auto r = ratio_report(p, cfg);
      CHECK(r.crk_observed == crk[p]);
      CHECK(r.crk_formula == crk[p]);
      CHECK(r.ncrk == nc[p]);
      CHECK(r.ratio == mpq_class(2 * p + 1, p + 1));
      CHECK(r.passed);
    }
  }

  TEST_CASE("family with deficient commutative rank") {
    SamplingConfig cfg;
    auto e = egfamily_audit(1, 4, cfg);
    CHECK(e.crk == 3);
    CHECK(e.ncrk == 4);
    CHECK(e.full == 4);
    CHECK(e.passed);
    auto e0 = egfamily_audit(0, 4, cfg);
    CHECK(e0.crk == 1);
    CHECK(e0.ncrk == 1);
    CHECK(e0.passed);
    auto e2 = egfamily_audit(2, 5, cfg);
    CHECK(e2.crk == 6);
    CHECK(e2.ncrk == 10);
  }

  TEST_CASE("full column rank descends along chains") {
    SamplingConfig cfg;
    for (auto [i, n] : {std::pair{2u, 6u}, std::pair{2u, 5u}}) {
      while (true) {
        auto e = egfamily_audit(i, n, cfg);
        CHECK_MESSAGE(e.passed, "i=" << i << " n=" << n);
        CHECK(e.ncrk == e.full);
        if (i == 0) break;
        --i;
        --n;
      }
    }
  }
}
