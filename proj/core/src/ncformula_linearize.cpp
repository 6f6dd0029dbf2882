// Formula -> (u, L, v) realizations. Rules:
//   atom l:   u = (1,0), L = [[1,-l],[0,1]], v = (0,1)^T
//   f + g:    L = diag(L_f, L_g), u = (u_f | u_g), v = (v_f ; v_g)
//   f * g:    L = [[L_f, -v_f u_g],[0, L_g]], u = (u_f | 0), v = (0 ; v_g)
//   f^-1:     L = [[L_f, v_f],[u_f, 0]], u = -e_last, v = e_last
//   -f:       (-1) * f
// The inverse rule rests on the Schur complement: the bottom-right entry of
// L^-1 is -(u_f L_f^-1 v_f)^-1.

#include <algorithm>

#include "ncrank/ncformula.hpp"

namespace ncrank {

namespace {

using SparseVec = std::vector<std::pair<std::uint32_t, mpq_class>>;

struct Rep {
  std::uint32_t s = 0;
  std::vector<LinearPencil::Entry> L;
  SparseVec u, v;
};

Rep atom(std::uint32_t var, const mpq_class& c) {
  Rep r;
  r.s = 2;
  r.L.push_back({0, 0, 0, mpq_class(1)});
  r.L.push_back({1, 1, 0, mpq_class(1)});
  if (var == 0)
    r.L.push_back({0, 1, 0, mpq_class(-c)});
  else
    r.L.push_back({0, 1, var, mpq_class(-1)});
  r.u.push_back({0, mpq_class(1)});
  r.v.push_back({1, mpq_class(1)});
  return r;
}

void append_shifted(std::vector<LinearPencil::Entry>& dst, const std::vector<LinearPencil::Entry>& src,
                    std::uint32_t off) {
  for (const auto& e : src) dst.push_back({e.row + off, e.col + off, e.var, e.value});
}

SparseVec shifted(const SparseVec& v, std::uint32_t off) {
  SparseVec out;
  out.reserve(v.size());
  for (const auto& [i, x] : v) out.push_back({i + off, x});
  return out;
}

Rep add_rep(const Rep& f, const Rep& g) {
  Rep r;
  r.s = f.s + g.s;
  r.L.reserve(f.L.size() + g.L.size());
  append_shifted(r.L, f.L, 0);
  append_shifted(r.L, g.L, f.s);
  r.u = f.u;
  for (auto& x : shifted(g.u, f.s)) r.u.push_back(std::move(x));
  r.v = f.v;
  for (auto& x : shifted(g.v, f.s)) r.v.push_back(std::move(x));
  return r;
}

Rep mul_rep(const Rep& f, const Rep& g) {
  Rep r;
  r.s = f.s + g.s;
  r.L.reserve(f.L.size() + g.L.size() + f.v.size() * g.u.size());
  append_shifted(r.L, f.L, 0);
  append_shifted(r.L, g.L, f.s);
  for (const auto& [i, vi] : f.v)
    for (const auto& [j, uj] : g.u) r.L.push_back({i, j + f.s, 0, mpq_class(-(vi * uj))});
  r.u = f.u;
  r.v = shifted(g.v, f.s);
  return r;
}

Rep inv_rep(const Rep& f) {
  Rep r;
  r.s = f.s + 1;
  const std::uint32_t last = f.s;
  r.L = f.L;
  for (const auto& [i, vi] : f.v) r.L.push_back({i, last, 0, vi});
  for (const auto& [j, uj] : f.u) r.L.push_back({last, j, 0, uj});
  r.u.push_back({last, mpq_class(-1)});
  r.v.push_back({last, mpq_class(1)});
  return r;
}

Realization finish(std::size_t id, const Rep& rep, std::size_t m) {
  Realization out;
  out.gate_id = id;
  out.size = rep.s;
  out.u = rep.u;
  out.v = rep.v;
  out.L = LinearPencil::from_entries(rep.s, rep.s, m, ScalarDomain::rational(), rep.L);
  return out;
}

}  // namespace

void linearize_each(const ExprPtr& e, const std::function<void(const Realization&)>& sink) {
  const auto names = variables(e);
  auto index_of = [&](const std::string& n) {
    return static_cast<std::uint32_t>(std::lower_bound(names.begin(), names.end(), n) - names.begin() + 1);
  };
  const auto gs = gates(e);
  std::vector<Rep> reps(gs.size());
  for (std::size_t id = 0; id < gs.size(); ++id) {
    const Expr& g = *gs[id].node;
    const auto& ch = gs[id].children;
    switch (g.op) {
      case Op::Var:
        reps[id] = atom(index_of(g.name), 0);
        break;
      case Op::Const:
        reps[id] = atom(0, g.value);
        break;
      case Op::Add:
        reps[id] = add_rep(reps[ch[0]], reps[ch[1]]);
        break;
      case Op::Mul:
        reps[id] = mul_rep(reps[ch[0]], reps[ch[1]]);
        break;
      case Op::Neg:
        reps[id] = mul_rep(atom(0, mpq_class(-1)), reps[ch[0]]);
        break;
      case Op::Inv:
        reps[id] = inv_rep(reps[ch[0]]);
        break;
    }
    // a formula gate feeds exactly one parent, so children can go now
    for (std::size_t c : ch) reps[c] = Rep{};
    sink(finish(id, reps[id], names.size()));
  }
}

std::vector<Realization> linearize(const ExprPtr& e) {
  std::vector<Realization> out;
  linearize_each(e, [&](const Realization& r) { out.push_back(r); });
  return out;
}

std::optional<DenseMatrix> realization_value(const Realization& r,
                                             const std::vector<DenseMatrix>& subs, std::size_t d,
                                             const ScalarDomain& dom) {
  const LinearPencil L = dom.is_prime() ? r.L.reduced(dom.modulus()) : r.L;
  const DenseMatrix big = evaluate(L, subs, d);
  // Solve L(T) X = v (x) I_d, then apply u (x) I_d.
  const std::size_t n = big.rows();
  DenseMatrix rhs(n, d, dom);
  for (const auto& [i, x] : r.v)
    for (std::size_t k = 0; k < d; ++k) rhs.set(i * d + k, k, x);
  auto li = inverse(big);
  if (!li) return std::nullopt;
  const DenseMatrix x = *li * rhs;
  DenseMatrix out(d, d, dom);
  for (const auto& [j, uj] : r.u) {
    DenseMatrix block(d, d, dom);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l = 0; l < d; ++l) block.set(k, l, x.get(j * d + k, l));
    out = out + block.scaled(uj);
  }
  return out;
}

NonmonotoneWitness find_blowup_nonmonotone(const ExprPtr& e, const SamplingConfig& cfg) {
  NonmonotoneWitness w;
  bool found = false;
  linearize_each(e, [&](const Realization& r) {
    if (found) return;
    ++w.gates_scanned;
    SamplingConfig gc = cfg;
    gc.seed = derive_seed(cfg.seed, r.gate_id);
    const LinearPencil L = r.L.reduced(cfg.modulus);
    const std::size_t r2 = blowup_rank_estimate(L, 2, gc).observed_rank;
    const std::size_t r3 = blowup_rank_estimate(L, 3, gc).observed_rank;
    if (3 * r2 > 2 * r3) {
      w.gate_id = r.gate_id;
      w.size = r.size;
      w.r2 = r2;
      w.r3 = r3;
      found = true;
    }
  });
  if (!found)
    throw NotFound("no gate pencil with r(2)/2 > r(3)/3 among " + std::to_string(w.gates_scanned) +
                   " gates; raise --trials if this is unexpected");
  return w;
}

NonmonotoneWitness find_blowup_nonmonotone(const SamplingConfig& cfg) {
  return find_blowup_nonmonotone(inv(sub(bergman_psi(), constant(1))), cfg);
}

}  // namespace ncrank
