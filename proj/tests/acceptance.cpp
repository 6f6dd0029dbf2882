// Acceptance run: one PASS/FAIL line per criterion.
//
//   ncrank_acceptance [--expect-fail 2,7,8]
//
// Exit status is 0 when every failing criterion is listed in --expect-fail.
// Listed criteria are still run and printed as FAIL; the list only keeps a
// known, documented gap from failing the whole suite.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "ncrank/brank.hpp"
#include "ncrank/ncformula.hpp"
#include "ncrank/pencil.hpp"
#include "ncrank/wedge.hpp"
#include "support.hpp"

using namespace ncrank;
using namespace ncrank::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[mismatch] " << what << "; ";
    }
  }
};

const SamplingConfig kCfg;

// Random instances shared by criteria 5, 6 and 12.
std::vector<LinearPencil> random_family(std::size_t count, std::uint64_t stream) {
  std::vector<LinearPencil> out;
  for (std::size_t k = 0; k < count; ++k) {
    auto rng = derive_stream(derive_seed(kCfg.seed, stream), k);
    out.push_back(random_pencil(4, 4, 3, rng));
  }
  return out;
}

Outcome c1() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto sk = fixture("skew3.json");
  const std::size_t want[] = {0, 2, 6, 9, 12, 15};
  o.detail << "ranks";
  for (std::size_t d = 1; d <= 5; ++d) {
    const auto r = blowup_rank_estimate(sk, d, kCfg).observed_rank;
    o.detail << ' ' << r;
    o.require(r == want[d], "d=" + std::to_string(d));
  }
  const auto rr = ratio_audit(sk, kCfg);
  o.detail << "; ncrk " << rr.ncrk << "; ratio " << rr.ratio.get_str();
  o.require(rr.ncrk == 3, "ncrk");
  o.require(rr.ratio == mpq_class(3, 2), "ratio");
  const double s = seconds_since(t0);
  o.detail << "; " << s << " s";
  o.require(s < 1.0, "time limit 1 s");
  return o;
}

Outcome c2() {
  Outcome o;
  for (const char* name : {"eh_first.json", "eh_second.json"}) {
    const auto a = fixture(name);
    const auto c = crank_estimate(a, kCfg);
    const auto n = ncrank::ncrank(a, kCfg);
    o.detail << name << " crk " << c << " ncrk " << n << "; ";
    o.require(c == 3, std::string(name) + " crk");
    o.require(n == 4, std::string(name) + " ncrk");
  }
  return o;
}

Outcome c3() {
  Outcome o;
  for (unsigned p = 1; p <= 3; ++p) {
    const auto r = ratio_report(p, kCfg);
    o.detail << "p=" << p << " crk " << r.crk_observed << " witness " << r.witness.rank << '/' << r.witness.size
             << " ncrk " << r.ncrk << " ratio " << r.ratio.get_str() << "; ";
    o.require(r.crk_observed == binomial(2 * p, p), "crk");
    o.require(r.witness.full && r.witness.size == binomial(2 * p + 1, p) * (p + 1), "witness");
    o.require(r.ncrk == binomial(2 * p + 1, p), "ncrk");
    o.require(r.ratio == mpq_class(2 * p + 1, p + 1), "ratio");
  }
  return o;
}

Outcome c4() {
  Outcome o;
  const std::pair<unsigned, unsigned> cases[] = {{1, 3}, {1, 4}, {2, 5}, {2, 6}, {3, 7}};
  for (auto [p, n] : cases) {
    const auto b = block_structure_check(p, n);
    o.detail << "(" << p << "," << n << ")" << (b.ok ? " ok " : " bad ");
    o.require(b.ok, "blocks");
  }
  return o;
}

Outcome c5(const std::vector<LinearPencil>& family) {
  Outcome o;
  std::size_t reports = 0, bad = 0;
  auto run = [&](const LinearPencil& a, std::size_t dmax) {
    for (const auto& r : regularity_audit(a, dmax, kCfg)) {
      ++reports;
      if (!r.divisible_by_d) ++bad;
    }
  };
  for (const auto& a : family) run(a, 4);
  for (const char* name : {"skew3.json", "eh_first.json", "eh_second.json"}) run(fixture(name), 5);
  for (unsigned p = 1; p <= 2; ++p) run(wedge_pencil(p, 2 * p + 1), 3);
  run(identity_pencil(3), 4);
  o.detail << family.size() << " random pencils plus fixtures; " << reports << " reports; " << bad
           << " not divisible";
  o.require(bad == 0, "divisibility");
  return o;
}

Outcome c6(const std::vector<LinearPencil>& family) {
  Outcome o;
  std::size_t mono_bad = 0, conc_bad = 0, retries = 0;
  for (const auto& a : family) {
    const auto m = monotone_audit(a, 4, kCfg);
    if (!m.passed()) ++mono_bad;
    const auto c = concavity_check(a, 4, 4, kCfg);
    if (!c.violations.empty()) ++conc_bad;
    retries += m.retried + c.retried;
  }
  o.detail << family.size() << " pencils; monotone failures " << mono_bad << "; concavity failures " << conc_bad
           << "; re-runs at trials x4 " << retries;
  o.require(mono_bad == 0, "monotone");
  o.require(conc_bad == 0, "concavity");
  return o;
}

Outcome c7() {
  Outcome o;
  const auto psi = bergman_psi();
  for (std::size_t dim : {2, 3}) {
    std::size_t zero = 0, ident = 0, undef = 0, other = 0;
    for (unsigned t = 0; t < 20; ++t) {
      auto rng = derive_stream(derive_seed(kCfg.seed, 7000 + dim), t);
      const auto out = eval(psi, random_assignment(psi, dim, kCfg.modulus, rng));
      if (!out.defined())
        ++undef;
      else if (out.value->is_zero())
        ++zero;
      else if (out.value->is_identity())
        ++ident;
      else
        ++other;
    }
    o.detail << dim << "x" << dim << ": zero " << zero << " identity " << ident << " undefined " << undef
             << " other " << other << "; ";
    if (dim == 2) o.require(zero == 20, "psi = 0 on 2x2");
    if (dim == 3) o.require(ident == 20, "psi = I on 3x3");
  }
  return o;
}

Outcome c8() {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    const auto w = find_blowup_nonmonotone(kCfg);
    o.detail << "gate " << w.gate_id << " size " << w.size << " r2 " << w.r2 << " r3 " << w.r3;
    o.require(w.r2 == 2 * w.size, "r2 = 2s");
    o.require(w.r3 < 3 * w.size, "r3 < 3s");
    o.require(w.r3 % 3 == 0, "3 | r3");
  } catch (const NotFound& e) {
    o.detail << e.what();
    o.require(false, "no witness gate");
  }
  const double s = seconds_since(t0);
  o.detail << "; " << s << " s";
  o.require(s < 60.0, "time limit 60 s");
  return o;
}

Outcome c9() {
  Outcome o;
  for (unsigned p = 1; p <= 3; ++p) {
    const auto c = certify(explicit_tensor(p), p, true);
    const std::size_t target = 2 * (2 * p + 1) - 3;
    o.detail << "p=" << p << " psi_rank " << c.psi_rank << " bound " << c.lower_bound << " (need " << target
             << "); ";
    o.require(c.exact, "exact arithmetic");
    o.require(c.lower_bound >= target, "bound");
  }
  return o;
}

Outcome c10() {
  Outcome o;
  for (unsigned p = 1; p <= 3; ++p) {
    const auto e = equations_threshold_check(p, kCfg);
    o.detail << "p=" << p << " rank " << e.observed_rank << " > " << e.threshold_D << (e.full ? " (full)" : "")
             << "; ";
    o.require(e.exceeds_threshold, "threshold");
    if (p == 2) o.require(e.observed_rank == 50, "full rank 50 at p=2");
  }
  return o;
}

Outcome c11() {
  Outcome o;
  const ModField f(kCfg.modulus);
  const auto dom = ScalarDomain::prime(kCfg.modulus);
  std::size_t points = 0, scalar_bad = 0, scalar_undef = 0, circuit_checks = 0, circuit_bad = 0, circuit_undef = 0;
  std::size_t gates_total = 0;
  for (std::size_t k = 0; k < 200; ++k) {
    auto rng = derive_stream(derive_seed(kCfg.seed, 1100), k);
    const auto e = random_formula(rng, 5);
    const auto rs = linearize(e);
    gates_total += rs.size();
    const auto names = variables(e);
    for (int t = 0; t < 20; ++t) {
      std::map<std::string, std::uint64_t> point;
      std::vector<DenseMatrix> subs;
      for (const auto& v : names) {
        point[v] = random_residue(rng, f);
        DenseMatrix m(1, 1, dom);
        m.set_r(0, 0, point[v]);
        subs.push_back(m);
      }
      const auto want = ScalarOracle(f, point).run(e);
      ++points;
      if (!want.back()) ++scalar_undef;
      // soundness where the gate is defined; the root is undefined exactly
      // when some gate pencil is singular
      bool all_invertible = true;
      for (const auto& r : rs) {
        const auto got = realization_value(r, subs, 1, dom);
        const auto& w = want[r.gate_id];
        all_invertible = all_invertible && got.has_value();
        if (w && (!got || got->r(0, 0) != *w)) ++scalar_bad;
      }
      ++circuit_checks;
      if (!want.back()) ++circuit_undef;
      if (bool(want.back()) != all_invertible) ++circuit_bad;
    }
    for (std::size_t dim : {2, 3}) {
      const auto asg = random_assignment(e, dim, kCfg.modulus, rng);
      const bool defined = eval(e, asg).defined();
      const auto subs = ordered_subs(e, asg);
      bool all_invertible = true;
      for (const auto& r : rs) {
        const auto big = evaluate(r.L.reduced(kCfg.modulus), subs, dim);
        all_invertible = all_invertible && rank(big) == big.rows();
      }
      ++circuit_checks;
      if (!defined) ++circuit_undef;
      if (defined != all_invertible) ++circuit_bad;
    }
  }
  o.detail << "200 formulas, " << gates_total << " gates; scalar points " << points << " (" << scalar_undef
           << " undefined) mismatches " << scalar_bad << "; circuit checks at 1x1, 2x2, 3x3 " << circuit_checks << " ("
           << circuit_undef << " undefined) mismatches " << circuit_bad;
  o.require(scalar_bad == 0, "scalar consistency");
  o.require(circuit_bad == 0, "circuit equivalence");
  return o;
}

Outcome c12(const std::vector<LinearPencil>& fam5, const std::vector<LinearPencil>& fam6) {
  Outcome o;
  std::size_t checked = 0, bad = 0;
  auto check = [&](const LinearPencil& a) {
    ++checked;
    try {
      if (!ratio_audit(a, kCfg).bound_holds) ++bad;
    } catch (const NotStabilized&) {
      ++bad;
    }
  };
  for (const char* name : {"skew3.json", "eh_first.json", "eh_second.json"}) check(fixture(name));
  check(identity_pencil(3));
  for (unsigned p = 1; p <= 3; ++p) {
    ++checked;
    const auto r = ratio_report(p, kCfg);
    if (!(r.ncrk < 2 * r.crk_observed)) ++bad;
  }
  for (const auto& a : fam5) check(a);
  for (const auto& a : fam6) check(a);
  o.detail << checked << " pencils; " << bad << " with ncrk >= 2 crk";
  o.require(bad == 0, "ratio bound");
  return o;
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.insert(std::stoi(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      expected = parse_list(argv[++i]);
    } else {
      std::cerr << "usage: ncrank_acceptance [--expect-fail N,M,...]\n";
      return 2;
    }
  }

  const auto fam5 = random_family(100, 5);
  const auto fam6 = random_family(25, 6);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"skew family blow-up ranks, ncrk 3, ratio 3/2", c1},
      {"both 4x4 fixtures: crk 3, ncrk 4", c2},
      {"wedge family p=1..3: crk, witness, ncrk, ratio", c3},
      {"recursive block structure", c4},
      {"regularity audit", [&] { return c5(fam5); }},
      {"monotonicity and concavity audits", [&] { return c6(fam6); }},
      {"Bergman dichotomy", c7},
      {"blow-up rank non-monotone gate", c8},
      {"explicit tensor border-rank bounds", c9},
      {"equations threshold", c10},
      {"realization soundness and circuit equivalence", c11},
      {"ratio bound ncrk < 2 crk", [&] { return c12(fam5, fam6); }},
  };

  std::vector<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    const auto t0 = Clock::now();
    Outcome o = criteria[i].second();
    const double s = seconds_since(t0);
    if (!o.pass) failed.push_back(id);
    std::printf("criterion %2d [PRIMARY] %s: %s | %s | %.2f s\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.str().c_str(), s);
    std::fflush(stdout);
  }

  bool unexpected = false;
  std::printf("summary: %zu/%zu pass", criteria.size() - failed.size(), criteria.size());
  if (!failed.empty()) {
    std::printf("; failing:");
    for (int id : failed) {
      std::printf(" %d%s", id, expected.count(id) ? "" : "(unexpected)");
      unexpected = unexpected || !expected.count(id);
    }
  }
  for (int id : expected)
    if (std::find(failed.begin(), failed.end(), id) == failed.end())
      std::printf("; criterion %d was listed as an expected failure but passed", id);
  std::printf("\n");
  return unexpected ? 1 : 0;
}
