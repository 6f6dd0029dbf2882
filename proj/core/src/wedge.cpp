#include "ncrank/wedge.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ncrank {

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (unsigned j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

namespace {

// All k-subsets of {1..n} in lex order.
std::vector<Subset> lex_subsets(unsigned n, unsigned k) {
  std::vector<Subset> out;
  if (k > n) return out;
  Subset s(k);
  for (unsigned j = 0; j < k; ++j) s[j] = j + 1;
  while (true) {
    out.push_back(s);
    int j = static_cast<int>(k) - 1;
    while (j >= 0 && s[j] == n - k + static_cast<unsigned>(j) + 1) --j;
    if (j < 0) break;
    ++s[j];
    for (unsigned l = static_cast<unsigned>(j) + 1; l < k; ++l) s[l] = s[l - 1] + 1;
  }
  return out;
}

Subset with(const Subset& s, unsigned i) {
  Subset t = s;
  t.insert(std::upper_bound(t.begin(), t.end(), i), i);
  return t;
}

// (-1)^{#{s in S : s < i}}
int insertion_sign(const Subset& s, unsigned i) {
  auto below = std::lower_bound(s.begin(), s.end(), i) - s.begin();
  return below % 2 == 0 ? 1 : -1;
}

}  // namespace

void SubsetBasis::push(Subset s, int sign) {
  index_.emplace(s, subsets_.size());
  subsets_.push_back(std::move(s));
  signs_.push_back(sign);
}

std::size_t SubsetBasis::index_of(const Subset& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) throw std::out_of_range("subset is not in this basis");
  return it->second;
}

SubsetBasis SubsetBasis::lex(unsigned n, unsigned k) {
  SubsetBasis b(n, k);
  for (auto& s : lex_subsets(n, k)) b.push(std::move(s), 1);
  return b;
}

// The avoiding-then-containing split. Blocks that contain n carry the sign
// (-1)^p: this turns the L_{e_n} block into +I while leaving the L_{e_i}
// (i < n) block between the two containing blocks unchanged, so all four
// blocks come out literally equal to the smaller pencils.
SubsetBasis SubsetBasis::split_source(unsigned n, unsigned p) {
  SubsetBasis b(n, p);
  const int sigma = p % 2 == 0 ? 1 : -1;
  for (auto& s : lex_subsets(n - 1, p)) b.push(std::move(s), 1);
  if (p >= 1)
    for (auto& s : lex_subsets(n - 1, p - 1)) b.push(with(s, n), sigma);
  return b;
}

SubsetBasis SubsetBasis::split_target(unsigned n, unsigned p) {
  SubsetBasis b(n, p + 1);
  const int sigma = p % 2 == 0 ? 1 : -1;
  for (auto& s : lex_subsets(n - 1, p)) b.push(with(s, n), sigma);
  for (auto& s : lex_subsets(n - 1, p + 1)) b.push(std::move(s), 1);
  return b;
}

DenseMatrix wedge_matrix(unsigned i, const SubsetBasis& src, const SubsetBasis& tgt) {
  if (src.n() != tgt.n() || tgt.degree() != src.degree() + 1)
    throw std::invalid_argument("wedge_matrix: bases do not describe Lambda^p -> Lambda^{p+1}");
  if (i < 1 || i > src.n()) throw std::out_of_range("wedge_matrix: index i out of range");
  DenseMatrix m(tgt.size(), src.size(), ScalarDomain::rational());
  for (std::size_t c = 0; c < src.size(); ++c) {
    const Subset& s = src.subset(c);
    if (std::binary_search(s.begin(), s.end(), i)) continue;
    std::size_t r = tgt.index_of(with(s, i));
    m.set_int(r, c, insertion_sign(s, i) * src.sign(c) * tgt.sign(r));
  }
  return m;
}

DenseMatrix wedge_matrix(unsigned i, unsigned p, unsigned n) {
  if (n == 0 || p > n - 1) throw std::out_of_range("wedge_matrix: need 0 <= p <= n-1");
  return wedge_matrix(i, SubsetBasis::lex(n, p), SubsetBasis::lex(n, p + 1));
}

LinearPencil wedge_pencil(const SubsetBasis& src, const SubsetBasis& tgt) {
  const unsigned n = src.n();
  LinearPencil a(tgt.size(), src.size(), n, ScalarDomain::rational());
  for (unsigned i = 1; i <= n; ++i) {
    DenseMatrix m = wedge_matrix(i, src, tgt);
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c)
        if (!m.is_zero_at(r, c)) a.add(r, c, i, m.q(r, c));
  }
  return a;
}

LinearPencil wedge_pencil(unsigned p, unsigned n) {
  if (n == 0 || p > n - 1) throw std::out_of_range("wedge_pencil: need 0 <= p <= n-1");
  return wedge_pencil(SubsetBasis::lex(n, p), SubsetBasis::lex(n, p + 1));
}

BlockCheck block_structure_check(unsigned p, unsigned n) {
  if (p < 1 || n < p + 2) throw std::out_of_range("block_structure_check: need 1 <= p <= n-2");
  BlockCheck out;
  const SubsetBasis src = SubsetBasis::split_source(n, p);
  const SubsetBasis tgt = SubsetBasis::split_target(n, p);
  const std::size_t nb = binomial(n - 1, p);      // |B| = |C|
  const std::size_t na = binomial(n - 1, p - 1);  // |A|
  const std::size_t nd = binomial(n - 1, p + 1);  // |D|
  out.identity_size = nb;

  auto diff = [&](const std::string& what, std::size_t r, std::size_t c, const mpq_class& got,
                  const mpq_class& want) {
    out.ok = false;
    if (out.diffs.size() < 32) {
      std::ostringstream os;
      os << what << " at (" << r << "," << c << "): got " << got.get_str() << ", want " << want.get_str();
      out.diffs.push_back(os.str());
    }
  };

  for (unsigned i = 1; i <= n; ++i) {
    const DenseMatrix m = wedge_matrix(i, src, tgt);
    // Expected blocks for this variable.
    DenseMatrix tl(nb, nb, ScalarDomain::rational()), tr(nb, na, ScalarDomain::rational()),
        bl(nd, nb, ScalarDomain::rational());
    if (i == n) {
      tl = DenseMatrix::identity(nb, ScalarDomain::rational());
    } else {
      if (p >= 1 && na > 0) tr = wedge_matrix(i, p - 1, n - 1);
      if (nd > 0) bl = wedge_matrix(i, p, n - 1);
    }
    const std::string tag = "t_" + std::to_string(i);
    for (std::size_t r = 0; r < nb + nd; ++r)
      for (std::size_t c = 0; c < nb + na; ++c) {
        mpq_class want = 0;
        if (r < nb && c < nb) want = tl.q(r, c);
        else if (r < nb) want = tr.q(r, c - nb);
        else if (c < nb) want = bl.q(r - nb, c);
        if (m.q(r, c) != want) diff(tag, r, c, m.q(r, c), want);
      }
  }
  return out;
}

DenseMatrix shift_matrix(int r, unsigned p) {
  if (r < -static_cast<int>(p) || r > static_cast<int>(p)) throw std::out_of_range("shift_matrix: need -p <= r <= p");
  DenseMatrix s(p + 1, p + 1, ScalarDomain::rational());
  for (int j = 1; j <= static_cast<int>(p) + 1; ++j) {
    int k = j - r;
    if (k >= 1 && k <= static_cast<int>(p) + 1) s.set_int(j - 1, k - 1, 1);
  }
  return s;
}

DenseMatrix toeplitz_witness(unsigned p) {
  if (p < 1) throw std::out_of_range("toeplitz_witness: need p >= 1");
  const unsigned n = 2 * p + 1;
  std::vector<DenseMatrix> subs;
  for (unsigned i = 1; i <= n; ++i) subs.push_back(shift_matrix(static_cast<int>(i) - static_cast<int>(p) - 1, p));
  return evaluate(wedge_pencil(p, n), subs, p + 1);
}

WitnessCertificate certify_witness(unsigned p, std::uint64_t modulus) {
  WitnessCertificate cert;
  cert.p = p;
  const DenseMatrix w = toeplitz_witness(p);
  cert.size = w.rows();
  cert.rank = rank(reduce_mod(w, modulus));
  cert.arithmetic = "prime:" + std::to_string(modulus);
  if (cert.rank < cert.size) {
    cert.rank = rank(w);
    cert.arithmetic = "rational";
  }
  cert.full = cert.rank == cert.size;
  return cert;
}

WedgeRatioReport ratio_report(unsigned p, const SamplingConfig& cfg) {
  WedgeRatioReport rep;
  rep.p = p;
  rep.crk_formula = binomial(2 * p, p);
  rep.crk_observed = crank_estimate(wedge_pencil(p, 2 * p + 1), cfg);
  rep.witness = certify_witness(p, cfg.modulus);
  // Full rank at d = p+1 makes the pencil square-full; ncrk is its size.
  rep.ncrk = rep.witness.full ? binomial(2 * p + 1, p) : rep.witness.rank / (p + 1);
  rep.ratio = mpq_class(static_cast<unsigned long>(rep.ncrk), static_cast<unsigned long>(rep.crk_formula));
  rep.ratio.canonicalize();
  rep.passed = rep.witness.full && rep.crk_observed == rep.crk_formula;
  return rep;
}

EgFamilyReport egfamily_audit(unsigned i, unsigned n, const SamplingConfig& cfg) {
  if (n == 0 || i > n - 1) throw std::out_of_range("egfamily_audit: need 0 <= i <= n-1");
  EgFamilyReport rep;
  rep.i = i;
  rep.n = n;
  rep.full = std::min(binomial(n, i), binomial(n, i + 1));
  const LinearPencil a = wedge_pencil(i, n);
  rep.crk = crank_estimate(a, cfg);
  rep.ncrk = ncrank(a, cfg);
  rep.expect_deficient_crk = i != 0 && i != n - 1;
  rep.passed = rep.ncrk == rep.full && (!rep.expect_deficient_crk || rep.crk < rep.full);
  return rep;
}

}  // namespace ncrank
