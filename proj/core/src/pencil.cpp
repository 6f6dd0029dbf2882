#include "ncrank/pencil.hpp"

#include <algorithm>
#include <numeric>

namespace ncrank {

LinearPencil::LinearPencil(std::size_t rows, std::size_t cols, std::size_t num_vars,
                           ScalarDomain dom)
    : rows_(rows), cols_(cols), num_vars_(num_vars), dom_(dom) {}

LinearPencil LinearPencil::from_matrices(const DenseMatrix& constant,
                                         const std::vector<DenseMatrix>& coeffs) {
  LinearPencil a(constant.rows(), constant.cols(), coeffs.size(), constant.domain());
  for (std::size_t v = 0; v <= coeffs.size(); ++v) {
    const DenseMatrix& m = v == 0 ? constant : coeffs[v - 1];
    if (m.rows() != a.rows_ || m.cols() != a.cols_)
      throw std::invalid_argument("pencil coefficient has the wrong shape");
    if (!(m.domain() == a.dom_)) throw std::invalid_argument("pencil coefficient domain mismatch");
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!m.is_zero_at(i, j)) a.add(i, j, v, m.get(i, j));
  }
  return a;
}

LinearPencil LinearPencil::from_entries(std::size_t rows, std::size_t cols, std::size_t num_vars,
                                        ScalarDomain dom, std::vector<Entry> entries) {
  LinearPencil a(rows, cols, num_vars, dom);
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return std::tie(x.var, x.row, x.col) < std::tie(y.var, y.row, y.col);
  });
  for (std::size_t i = 0; i < entries.size();) {
    const Entry& e = entries[i];
    if (e.row >= rows || e.col >= cols || e.var > num_vars)
      throw std::out_of_range("pencil entry index out of range");
    mpq_class sum = e.value;
    std::size_t j = i + 1;
    for (; j < entries.size() && entries[j].var == e.var && entries[j].row == e.row &&
           entries[j].col == e.col;
         ++j)
      sum += entries[j].value;
    if (dom.is_prime()) sum = mpq_class(mpz_class(static_cast<unsigned long>(dom.field().reduce(sum))));
    if (sgn(sum) != 0) a.coeffs_.emplace_hint(a.coeffs_.end(), Key{e.var, e.row, e.col}, sum);
    i = j;
  }
  return a;
}

void LinearPencil::add(std::size_t row, std::size_t col, std::size_t var, const mpq_class& value) {
  if (row >= rows_ || col >= cols_ || var > num_vars_)
    throw std::out_of_range("pencil entry index out of range");
  Key k{static_cast<std::uint32_t>(var), static_cast<std::uint32_t>(row),
        static_cast<std::uint32_t>(col)};
  mpq_class v;
  if (dom_.is_rational()) {
    v = value;
    v.canonicalize();
  } else {
    ModField f = dom_.field();
    v = mpq_class(mpz_class(static_cast<unsigned long>(f.reduce(value))));
  }
  auto it = coeffs_.find(k);
  if (it == coeffs_.end()) {
    if (sgn(v) != 0) coeffs_.emplace(k, v);
    return;
  }
  mpq_class s = it->second + v;
  if (dom_.is_prime()) {
    ModField f = dom_.field();
    s = mpq_class(mpz_class(static_cast<unsigned long>(f.reduce(s))));
  }
  if (sgn(s) == 0)
    coeffs_.erase(it);
  else
    it->second = s;
}

std::vector<LinearPencil::Entry> LinearPencil::entries() const {
  std::vector<Entry> out;
  out.reserve(coeffs_.size());
  for (const auto& [k, v] : coeffs_) out.push_back({std::get<1>(k), std::get<2>(k), std::get<0>(k), v});
  return out;
}

DenseMatrix LinearPencil::matrix(std::size_t var) const {
  if (var > num_vars_) throw std::out_of_range("pencil variable index out of range");
  DenseMatrix m(rows_, cols_, dom_);
  auto lo = coeffs_.lower_bound(Key{static_cast<std::uint32_t>(var), 0, 0});
  for (auto it = lo; it != coeffs_.end() && std::get<0>(it->first) == var; ++it)
    m.set(std::get<1>(it->first), std::get<2>(it->first), it->second);
  return m;
}

DenseMatrix LinearPencil::coeff(std::size_t k) const {
  if (k == 0 || k > num_vars_) throw std::out_of_range("coefficient index must be in 1..m");
  return matrix(k);
}

LinearPencil LinearPencil::reduced(std::uint64_t modulus) const {
  ScalarDomain dom = ScalarDomain::prime(modulus);
  if (dom_ == dom) return *this;
  if (dom_.is_prime()) throw std::invalid_argument("pencil already lives in another prime field");
  LinearPencil out(rows_, cols_, num_vars_, dom);
  for (const auto& [k, v] : coeffs_) out.add(std::get<1>(k), std::get<2>(k), std::get<0>(k), v);
  return out;
}

DenseMatrix evaluate(const LinearPencil& a, const std::vector<DenseMatrix>& subs, std::size_t d) {
  if (subs.size() != a.num_vars())
    throw std::invalid_argument("evaluate: expected one substitute per variable");
  for (const DenseMatrix& s : subs) {
    if (s.rows() != d || s.cols() != d) throw std::invalid_argument("evaluate: substitute is not d x d");
    if (!(s.domain() == a.domain())) throw std::invalid_argument("evaluate: substitute domain mismatch");
  }
  DenseMatrix out(a.rows() * d, a.cols() * d, a.domain());
  const bool rat = a.domain().is_rational();
  ModField f(rat ? 2 : a.domain().modulus());
  for (const auto& e : a.entries()) {
    std::size_t r0 = e.row * d, c0 = e.col * d;
    if (e.var == 0) {
      for (std::size_t k = 0; k < d; ++k) {
        if (rat)
          out.set_q(r0 + k, c0 + k, out.q(r0 + k, c0 + k) + e.value);
        else
          out.set_r(r0 + k, c0 + k, f.add(out.r(r0 + k, c0 + k), f.reduce(e.value)));
      }
      continue;
    }
    const DenseMatrix& s = subs[e.var - 1];
    std::uint64_t ev = rat ? 0 : f.reduce(e.value);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l = 0; l < d; ++l) {
        if (s.is_zero_at(k, l)) continue;
        if (rat)
          out.set_q(r0 + k, c0 + l, out.q(r0 + k, c0 + l) + e.value * s.q(k, l));
        else
          out.set_r(r0 + k, c0 + l, f.add(out.r(r0 + k, c0 + l), f.mul(ev, s.r(k, l))));
      }
  }
  return out;
}

namespace {

struct ModEntry {
  std::uint32_t row, col, var;
  std::uint64_t val;
};

std::vector<ModEntry> mod_entries(const LinearPencil& a_mod) {
  ModField f = a_mod.domain().field();
  std::vector<ModEntry> out;
  for (const auto& e : a_mod.entries()) out.push_back({e.row, e.col, e.var, f.reduce(e.value)});
  std::sort(out.begin(), out.end(), [](const ModEntry& x, const ModEntry& y) {
    return std::tie(x.row, x.col, x.var) < std::tie(y.row, y.col, y.var);
  });
  return out;
}

LinearPencil as_prime(const LinearPencil& a, const SamplingConfig& cfg) {
  return a.domain().is_prime() ? a : a.reduced(cfg.modulus);
}

constexpr std::size_t kDenseLimit = std::size_t(1) << 21;

}  // namespace

std::size_t blowup_rank_mod(const LinearPencil& a_mod, const std::vector<DenseMatrix>& mats,
                            std::size_t p, std::size_t q) {
  if (!a_mod.domain().is_prime()) throw std::invalid_argument("blowup_rank_mod: pencil must be prime-field");
  if (mats.size() != a_mod.num_vars() + 1)
    throw std::invalid_argument("blowup_rank_mod: expected one matrix per variable index");
  const ModField f = a_mod.domain().field();
  const std::size_t R = a_mod.rows() * p, C = a_mod.cols() * q;
  if (R == 0 || C == 0) return 0;
  const auto ents = mod_entries(a_mod);

  // Nonzero pattern of each substitute.
  struct Nz {
    std::uint32_t k, l;
    std::uint64_t v;
  };
  std::vector<std::vector<Nz>> nz(mats.size());
  std::size_t est = 0;
  for (std::size_t v = 0; v < mats.size(); ++v)
    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t l = 0; l < q; ++l)
        if (mats[v].r(k, l)) nz[v].push_back({std::uint32_t(k), std::uint32_t(l), mats[v].r(k, l)});
  for (const auto& e : ents) est += nz[e.var].size();

  if (R * C <= kDenseLimit || est * 20 >= R * C) {
    std::vector<std::uint64_t> buf(R * C, 0);
    for (const auto& e : ents)
      for (const Nz& z : nz[e.var]) {
        std::uint64_t& cell = buf[(e.row * p + z.k) * C + e.col * q + z.l];
        cell = f.add(cell, f.mul(e.val, z.v));
      }
    return rank_mod_inplace(buf, R, C, f);
  }

  std::vector<SparseRow> rows(R);
  std::vector<std::uint64_t> acc(C, 0);
  std::vector<std::uint32_t> touched;
  std::size_t idx = 0;
  for (std::size_t br = 0; br < a_mod.rows(); ++br) {
    std::size_t lo = idx;
    while (idx < ents.size() && ents[idx].row == br) ++idx;
    for (std::size_t k = 0; k < p; ++k) {
      touched.clear();
      for (std::size_t t = lo; t < idx; ++t) {
        const ModEntry& e = ents[t];
        for (const Nz& z : nz[e.var]) {
          if (z.k != k) continue;
          std::uint32_t c = static_cast<std::uint32_t>(e.col * q + z.l);
          if (acc[c] == 0) touched.push_back(c);  // may repeat after cancellation
          acc[c] = f.add(acc[c], f.mul(e.val, z.v));
        }
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      SparseRow& row = rows[br * p + k];
      for (std::uint32_t c : touched) {
        if (acc[c]) {
          row.cols.push_back(c);
          row.vals.push_back(acc[c]);
        }
        acc[c] = 0;
      }
    }
  }
  return sparse_rank_mod(std::move(rows), C, f);
}

namespace {

std::size_t trial_rank(const LinearPencil& a_mod, std::size_t p, std::size_t q,
                       bool identity_constant, std::mt19937_64& rng) {
  std::vector<DenseMatrix> mats;
  mats.reserve(a_mod.num_vars() + 1);
  const std::uint64_t mod = a_mod.domain().modulus();
  if (identity_constant)
    mats.push_back(DenseMatrix::identity(p, a_mod.domain()));
  else
    mats.push_back(random_matrix(p, q, mod, rng));
  for (std::size_t v = 1; v <= a_mod.num_vars(); ++v) mats.push_back(random_matrix(p, q, mod, rng));
  return blowup_rank_mod(a_mod, mats, p, q);
}

}  // namespace

std::size_t crank_estimate(const LinearPencil& a, const SamplingConfig& cfg) {
  return blowup_rank_estimate(a, 1, cfg).observed_rank;
}

BlowupRankReport blowup_rank_estimate(const LinearPencil& a, std::size_t d,
                                      const SamplingConfig& cfg) {
  if (d == 0) throw std::invalid_argument("blow-up size must be at least 1");
  if (cfg.trials == 0) throw std::invalid_argument("at least one trial is required");
  LinearPencil am = as_prime(a, cfg);
  BlowupRankReport rep;
  rep.d = d;
  rep.trials = cfg.trials;
  rep.seed = cfg.seed;
  rep.modulus = am.domain().modulus();
  const std::size_t cap = d * std::min(a.rows(), a.cols());
  for (unsigned t = 0; t < cfg.trials && rep.observed_rank < cap; ++t) {
    auto rng = derive_stream(cfg.seed, t);
    rep.observed_rank = std::max(rep.observed_rank, trial_rank(am, d, d, true, rng));
  }
  rep.divisible_by_d = rep.observed_rank % d == 0;
  rep.full = rep.observed_rank == cap;
  return rep;
}

std::size_t ncrank(const LinearPencil& a, const SamplingConfig& cfg) {
  if (a.is_zero() || a.rows() == 0 || a.cols() == 0) return 0;
  const std::size_t dstar = std::max(a.rows(), a.cols());
  BlowupRankReport rep = blowup_rank_estimate(a, dstar, cfg);
  if (!rep.divisible_by_d)
    throw NotStabilized("blow-up rank " + std::to_string(rep.observed_rank) + " at d=" +
                        std::to_string(dstar) +
                        " is not a multiple of d; raise --trials or use a larger modulus");
  return rep.observed_rank / dstar;
}

std::vector<BlowupRankReport> regularity_audit(const LinearPencil& a, std::size_t d_max,
                                               const SamplingConfig& cfg) {
  std::vector<BlowupRankReport> out;
  for (std::size_t d = 1; d <= d_max; ++d) out.push_back(blowup_rank_estimate(a, d, cfg));
  return out;
}

bool regularity_passed(const std::vector<BlowupRankReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const BlowupRankReport& r) { return r.divisible_by_d; });
}

std::size_t rect_blowup_rank_estimate(const LinearPencil& a, std::size_t p, std::size_t q,
                                      const SamplingConfig& cfg) {
  if (p == 0 || q == 0) return 0;
  LinearPencil am = as_prime(a, cfg);
  const std::size_t cap = std::min(a.rows() * p, a.cols() * q);
  std::size_t best = 0;
  for (unsigned t = 0; t < cfg.trials && best < cap; ++t) {
    auto rng = derive_stream(cfg.seed, t);
    best = std::max(best, trial_rank(am, p, q, false, rng));
  }
  return best;
}

BlowupProfile profile(const LinearPencil& a, std::size_t p_max, std::size_t q_max,
                      const SamplingConfig& cfg) {
  BlowupProfile prof;
  prof.p_max = p_max;
  prof.q_max = q_max;
  prof.r.assign(p_max + 1, std::vector<std::size_t>(q_max + 1, 0));
  for (std::size_t p = 1; p <= p_max; ++p)
    for (std::size_t q = 1; q <= q_max; ++q) prof.r[p][q] = rect_blowup_rank_estimate(a, p, q, cfg);
  return prof;
}

std::vector<ProfileViolation> concavity_audit(const BlowupProfile& prof) {
  std::vector<ProfileViolation> out;
  const auto& r = prof.r;
  auto note = [&](int check, std::size_t p, std::size_t q, const std::string& d) {
    out.push_back({check, p, q, d});
  };
  for (std::size_t p = 0; p <= prof.p_max; ++p)
    for (std::size_t q = 0; q <= prof.q_max; ++q) {
      if (q + 1 <= prof.q_max && r[p][q + 1] < r[p][q])
        note(1, p, q, "r(p,q+1) < r(p,q)");
      if (q + 2 <= prof.q_max && 2 * r[p][q + 1] < r[p][q] + r[p][q + 2])
        note(2, p, q, "2 r(p,q+1) < r(p,q) + r(p,q+2)");
      if (p + 1 <= prof.p_max && r[p + 1][q] < r[p][q])
        note(3, p, q, "r(p+1,q) < r(p,q)");
      if (p + 2 <= prof.p_max && 2 * r[p + 1][q] < r[p][q] + r[p + 2][q])
        note(4, p, q, "2 r(p+1,q) < r(p,q) + r(p+2,q)");
    }
  return out;
}

namespace {

MonotoneAudit monotone_once(const LinearPencil& a, std::size_t d_max, const SamplingConfig& cfg) {
  MonotoneAudit out;
  const std::size_t n = std::max(a.rows(), a.cols());
  out.asserted = a.rows() == a.cols();
  std::size_t half = (n + 1) / 2;
  out.d_start = std::max<std::size_t>(1, half >= 1 ? half - 1 : 0);
  out.reports = regularity_audit(a, d_max, cfg);
  for (std::size_t d = out.d_start; d < d_max; ++d) {
    // r(d+1)/(d+1) >= r(d)/d  <=>  d r(d+1) >= (d+1) r(d)
    const std::size_t rd = out.reports[d - 1].observed_rank, rn = out.reports[d].observed_rank;
    if (d * rn < (d + 1) * rd) out.violations.push_back(d);
  }
  return out;
}

}  // namespace

MonotoneAudit monotone_audit(const LinearPencil& a, std::size_t d_max, const SamplingConfig& cfg) {
  MonotoneAudit out = monotone_once(a, d_max, cfg);
  if (!out.violations.empty()) {
    SamplingConfig more = cfg;
    more.trials *= 4;
    out = monotone_once(a, d_max, more);
    out.retried = true;
  }
  return out;
}

ConcavityCheck concavity_check(const LinearPencil& a, std::size_t p_max, std::size_t q_max,
                               const SamplingConfig& cfg) {
  ConcavityCheck out;
  out.profile = profile(a, p_max, q_max, cfg);
  out.violations = concavity_audit(out.profile);
  if (!out.violations.empty()) {
    SamplingConfig more = cfg;
    more.trials *= 4;
    out.profile = profile(a, p_max, q_max, more);
    out.violations = concavity_audit(out.profile);
    out.retried = true;
  }
  return out;
}

RatioReport ratio_audit(const LinearPencil& a, const SamplingConfig& cfg) {
  RatioReport rep;
  rep.crk = crank_estimate(a, cfg);
  rep.ncrk = ncrank(a, cfg);
  if (rep.crk > 0) {
    rep.has_ratio = true;
    rep.ratio = mpq_class(static_cast<unsigned long>(rep.ncrk), static_cast<unsigned long>(rep.crk));
    rep.ratio.canonicalize();
  }
  rep.bound_holds = (rep.crk == 0 && rep.ncrk == 0) || rep.ncrk < 2 * rep.crk;
  return rep;
}

LinearPencil random_pencil(std::size_t rows, std::size_t cols, std::size_t vars,
                           std::mt19937_64& rng) {
  LinearPencil a(rows, cols, vars, ScalarDomain::rational());
  const std::size_t kmax = std::max<std::size_t>(1, std::min(rows, cols));
  auto small = [&] { return static_cast<long>(rng() % 5) - 2; };
  for (std::size_t v = 1; v <= vars; ++v) {
    const std::size_t k = 1 + rng() % kmax;
    std::vector<long> left(rows * k), right(k * cols);
    for (auto& x : left) x = small();
    for (auto& x : right) x = small();
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        long s = 0;
        for (std::size_t l = 0; l < k; ++l) s += left[i * k + l] * right[l * cols + j];
        if (s != 0) a.add(i, j, v, mpq_class(s));
      }
  }
  return a;
}

}  // namespace ncrank
