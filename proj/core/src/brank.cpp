#include "ncrank/brank.hpp"

#include <stdexcept>

#include <json.hpp>

#include "ncrank/wedge.hpp"

namespace ncrank {

using nlohmann::json;

Tensor3::Tensor3(std::size_t a, std::size_t b, std::size_t c)
    : a_(a), b_(b), c_(c), e_(a * b * c, mpq_class(0)) {
  if (a == 0 || b == 0 || c == 0) throw std::invalid_argument("tensor dimensions must be positive");
}

void Tensor3::set(std::size_t i, std::size_t j, std::size_t k, const mpq_class& v) {
  if (i >= a_ || j >= b_ || k >= c_) throw std::out_of_range("tensor index out of range");
  mpq_class& e = e_[(i * b_ + j) * c_ + k];
  e = v;
  e.canonicalize();
}

DenseMatrix Tensor3::slice(std::size_t i) const {
  DenseMatrix m(b_, c_, ScalarDomain::rational());
  for (std::size_t j = 0; j < b_; ++j)
    for (std::size_t k = 0; k < c_; ++k) m.set_q(j, k, at(i, j, k));
  return m;
}

void Tensor3::set_slice(std::size_t i, const DenseMatrix& m) {
  if (m.rows() != b_ || m.cols() != c_ || !m.domain().is_rational())
    throw std::invalid_argument("slice must be a rational b x c matrix");
  for (std::size_t j = 0; j < b_; ++j)
    for (std::size_t k = 0; k < c_; ++k) set(i, j, k, m.q(j, k));
}

bool Tensor3::is_integral() const {
  for (const auto& v : e_)
    if (v.get_den() != 1) return false;
  return true;
}

Tensor3 Tensor3::combine(const mpq_class& alpha, const Tensor3& other, const mpq_class& beta) const {
  if (a_ != other.a_ || b_ != other.b_ || c_ != other.c_) throw std::invalid_argument("tensor shape mismatch");
  Tensor3 out(a_, b_, c_);
  for (std::size_t k = 0; k < e_.size(); ++k) out.e_[k] = alpha * e_[k] + beta * other.e_[k];
  return out;
}

std::string tensor_to_json(const Tensor3& t) {
  json j;
  j["a"] = t.a();
  j["b"] = t.b();
  j["c"] = t.c();
  json ents = json::array();
  for (std::size_t i = 0; i < t.a(); ++i)
    for (std::size_t r = 0; r < t.b(); ++r)
      for (std::size_t c = 0; c < t.c(); ++c)
        if (sgn(t.at(i, r, c)) != 0) ents.push_back(json::array({i, r, c, t.at(i, r, c).get_str()}));
  j["entries"] = ents;
  return j.dump();
}

Tensor3 tensor_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    Tensor3 t(j.at("a").get<std::size_t>(), j.at("b").get<std::size_t>(), j.at("c").get<std::size_t>());
    for (const json& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 4) throw std::invalid_argument("tensor entry must be [i,j,k,value]");
      mpq_class v;
      if (e[3].is_string()) {
        if (v.set_str(e[3].get<std::string>(), 10) != 0) throw std::invalid_argument("bad numeric string");
      } else if (e[3].is_number_integer()) {
        v = mpq_class(mpz_class(e[3].dump()));
      } else {
        throw std::invalid_argument("tensor value must be a decimal string or integer");
      }
      v.canonicalize();
      t.set(e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<std::size_t>(),
            t.at(e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<std::size_t>()) + v);
    }
    return t;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("tensor JSON: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw std::invalid_argument(std::string("tensor JSON: ") + e.what());
  }
}

DenseMatrix psi_apply(unsigned p, const Tensor3& t) {
  const unsigned n = static_cast<unsigned>(t.a());
  if (p > n - 1) throw std::out_of_range("psi_apply: need 0 <= p <= a-1");
  DenseMatrix out(binomial(n, p + 1) * t.b(), binomial(n, p) * t.c(), ScalarDomain::rational());
  for (unsigned i = 1; i <= n; ++i) {
    DenseMatrix s = t.slice(i - 1);
    if (s.is_zero()) continue;
    out = out + kron(wedge_matrix(i, p, n), s);
  }
  return out;
}

BorderRankCertificate certify(const Tensor3& t, unsigned p, bool exact, const SamplingConfig& cfg) {
  BorderRankCertificate cert;
  cert.a = t.a();
  cert.b = t.b();
  cert.c = t.c();
  cert.p = p;
  cert.n = static_cast<unsigned>(t.a());
  const DenseMatrix psi = psi_apply(p, t);
  cert.psi_rows = psi.rows();
  cert.psi_cols = psi.cols();
  cert.exact = exact;
  cert.seed = cfg.seed;
  if (exact) {
    cert.psi_rank = rank(psi);
  } else {
    cert.modulus = cfg.modulus;
    cert.psi_rank = rank(reduce_mod(psi, cfg.modulus));
  }
  cert.xl_rank = binomial(cert.n - 1, p);
  cert.lower_bound = (cert.psi_rank + cert.xl_rank - 1) / cert.xl_rank;
  cert.threshold_D = cert.lower_bound == 0 ? 0 : (cert.lower_bound - 1) * cert.xl_rank;
  return cert;
}

Tensor3 explicit_tensor(unsigned p) {
  if (p < 1) throw std::out_of_range("explicit_tensor: need p >= 1");
  const unsigned m = 2 * p + 1;
  Tensor3 t(m, m, m);
  for (unsigned i = 1; i <= m; ++i) {
    const int r = static_cast<int>(i) - static_cast<int>(p) - 1;
    const DenseMatrix s = shift_matrix(r, p);
    t.set_slice(i - 1, delete_last_row_col(direct_sum(s, s)));
  }
  return t;
}

EquationsReport equations_threshold_check(unsigned p, const SamplingConfig& cfg) {
  if (p < 1) throw std::out_of_range("equations_threshold_check: need p >= 1");
  EquationsReport rep;
  rep.p = p;
  rep.m = 2 * p + 1;
  rep.threshold_D = binomial(2 * p, p) * (2 * rep.m - 4);
  rep.full_rank = rep.m * binomial(2 * p + 1, p);
  rep.report = blowup_rank_estimate(wedge_pencil(p, rep.m), rep.m, cfg);
  rep.observed_rank = rep.report.observed_rank;
  rep.exceeds_threshold = rep.observed_rank > rep.threshold_D;
  rep.full = rep.observed_rank == rep.full_rank;
  return rep;
}

}  // namespace ncrank
