// ncrank: command-line front end. Every command produces one JSON record per
// line (or a key: value rendering of the same record without --json).
//
// Exit codes: 0 pass, 1 audit failure, 2 usage or input error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "ncrank/brank.hpp"
#include "ncrank/ncformula.hpp"
#include "ncrank/pencil.hpp"
#include "ncrank/pencil_io.hpp"
#include "ncrank/version.hpp"
#include "ncrank/wedge.hpp"

using nlohmann::json;
using namespace ncrank;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

const char* const kHint =
    "hint: randomized ranks are lower bounds; a failure here usually means undersampling. "
    "Re-run with a larger --trials or another --seed.";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Runtime {
  SamplingConfig cfg;
  bool json_out = false;
  std::string seed_source = "default";
};

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return "sha256:" + os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text << '\n';
}

json record(const std::string& command, const Runtime& rt, const std::string& input) {
  json r;
  r["tool"] = "ncrank";
  r["version"] = NCRANK_VERSION;
  r["command"] = command;
  r["config"] = {{"modulus", rt.cfg.modulus},
                 {"seed", rt.cfg.seed},
                 {"seed_source", rt.seed_source},
                 {"trials", rt.cfg.trials},
                 {"output", rt.json_out ? "json" : "human"}};
  r["input_hash"] = sha256_hex(input);
  return r;
}

void emit(const json& r, const Runtime& rt) {
  if (rt.json_out) {
    std::cout << r.dump() << '\n';
    return;
  }
  for (const auto& [k, v] : r.items()) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  std::cout << '\n';
}

json matrix_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.entry_string(i, j));
    rows.push_back(row);
  }
  return rows;
}

json report_json(const BlowupRankReport& r) {
  return {{"d", r.d},           {"observed_rank", r.observed_rank}, {"divisible_by_d", r.divisible_by_d},
          {"full", r.full},     {"trials", r.trials},               {"seed", r.seed},
          {"modulus", r.modulus}};
}

json certificate_json(const BorderRankCertificate& c) {
  return {{"tensor_dims", {c.a, c.b, c.c}},
          {"map_params", {{"p", c.p}, {"n", c.n}}},
          {"psi_dims", {c.psi_rows, c.psi_cols}},
          {"psi_rank", c.psi_rank},
          {"xl_rank", c.xl_rank},
          {"lower_bound", c.lower_bound},
          {"threshold_D", c.threshold_D},
          {"arithmetic", c.exact ? std::string("exact-rational") : "prime:" + std::to_string(c.modulus) + " (whp)"},
          {"seed", c.seed}};
}

std::size_t parse_size(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw UsageError("bad " + what + ": '" + s + "'");
  }
}

// --- rank -----------------------------------------------------------------

int cmd_rank(const Runtime& rt, const std::string& file, const std::string& mode) {
  const std::string text = read_file(file);
  const LinearPencil a = pencil_from_json(text);
  json r = record("rank pencil", rt, text);
  r["pencil"] = {{"rows", a.rows()}, {"cols", a.cols()}, {"num_vars", a.num_vars()}};
  r["mode"] = mode;
  int code = kPass;
  if (mode == "crk") {
    r["crk"] = crank_estimate(a, rt.cfg);
  } else if (mode == "ncrk") {
    try {
      r["ncrk"] = ncrank::ncrank(a, rt.cfg);
    } catch (const NotStabilized& e) {
      r["error"] = e.what();
      code = kFail;
    }
  } else if (mode.rfind("blowup=", 0) == 0) {
    const auto rep = blowup_rank_estimate(a, parse_size(mode.substr(7), "blow-up size"), rt.cfg);
    r.update(report_json(rep));
    if (!rep.divisible_by_d) code = kFail;
  } else if (mode.rfind("profile=", 0) == 0) {
    const std::string dims = mode.substr(8);
    const auto x = dims.find('x');
    if (x == std::string::npos) throw UsageError("profile mode needs <p>x<q>");
    const auto prof = profile(a, parse_size(dims.substr(0, x), "p"), parse_size(dims.substr(x + 1), "q"), rt.cfg);
    r["p_max"] = prof.p_max;
    r["q_max"] = prof.q_max;
    r["profile"] = prof.r;
  } else {
    throw UsageError("unknown --mode '" + mode + "'");
  }
  r["status"] = code == kPass ? "pass" : "fail";
  emit(r, rt);
  if (code != kPass) std::cerr << kHint << '\n';
  return code;
}

// --- audit ----------------------------------------------------------------

struct AuditOpts {
  std::string kind;
  std::string input;
  std::vector<std::string> random;
  std::size_t d_max = 4, p_max = 4, q_max = 4;
};

json audit_one(const AuditOpts& o, const LinearPencil& a, const Runtime& rt, bool& ok) {
  json r;
  if (o.kind == "regularity") {
    auto reps = regularity_audit(a, o.d_max, rt.cfg);
    json arr = json::array();
    for (const auto& rep : reps) arr.push_back(report_json(rep));
    r["reports"] = arr;
    ok = regularity_passed(reps);
  } else if (o.kind == "monotone") {
    auto m = monotone_audit(a, o.d_max, rt.cfg);
    json ranks = json::array();
    for (const auto& rep : m.reports) ranks.push_back(rep.observed_rank);
    r["ranks"] = ranks;
    r["d_start"] = m.d_start;
    r["asserted"] = m.asserted;
    r["retried"] = m.retried;
    r["violations"] = m.violations;
    ok = m.passed();
  } else if (o.kind == "concavity") {
    auto c = concavity_check(a, o.p_max, o.q_max, rt.cfg);
    json v = json::array();
    for (const auto& x : c.violations) v.push_back({{"check", x.check}, {"p", x.p}, {"q", x.q}, {"detail", x.detail}});
    r["profile"] = c.profile.r;
    r["retried"] = c.retried;
    r["violations"] = v;
    ok = c.violations.empty();
  } else if (o.kind == "ratio") {
    try {
      auto rr = ratio_audit(a, rt.cfg);
      r["crk"] = rr.crk;
      r["ncrk"] = rr.ncrk;
      r["ratio"] = rr.has_ratio ? json(rr.ratio.get_str()) : json(nullptr);
      r["bound_holds"] = rr.bound_holds;
      ok = rr.bound_holds;
    } catch (const NotStabilized& e) {
      r["error"] = e.what();
      ok = false;
    }
  } else {
    throw UsageError("unknown audit '" + o.kind + "' (regularity|monotone|concavity|ratio)");
  }
  r["status"] = ok ? "pass" : "fail";
  return r;
}

int cmd_audit(const Runtime& rt, const AuditOpts& o) {
  if (o.input.empty() == o.random.empty()) throw UsageError("give exactly one of --input or --random");
  bool all_ok = true;
  std::size_t count = 0, failures = 0;
  std::string command = "audit " + o.kind;
  if (!o.input.empty()) {
    const std::string text = read_file(o.input);
    const LinearPencil a = pencil_from_json(text);
    json r = record(command, rt, text);
    bool ok = true;
    r.update(audit_one(o, a, rt, ok));
    emit(r, rt);
    all_ok = ok;
    count = 1;
    failures = ok ? 0 : 1;
  } else {
    std::map<std::string, std::size_t> kv{{"rows", 4}, {"cols", 4}, {"vars", 3}, {"count", 10}};
    for (const auto& tok : o.random) {
      auto eq = tok.find('=');
      if (eq == std::string::npos || !kv.count(tok.substr(0, eq)))
        throw UsageError("--random expects rows=R cols=C vars=V count=K, got '" + tok + "'");
      kv[tok.substr(0, eq)] = parse_size(tok.substr(eq + 1), tok.substr(0, eq));
    }
    std::ostringstream spec;
    for (const auto& [k, v] : kv) spec << k << '=' << v << ';';
    for (std::size_t k = 0; k < kv["count"]; ++k) {
      auto rng = derive_stream(rt.cfg.seed, k);
      const LinearPencil a = random_pencil(kv["rows"], kv["cols"], kv["vars"], rng);
      const std::string text = pencil_to_json(a);
      json r = record(command, rt, text);
      r["instance"] = k;
      r["random_spec"] = spec.str();
      bool ok = true;
      r.update(audit_one(o, a, rt, ok));
      emit(r, rt);
      all_ok = all_ok && ok;
      ++count;
      if (!ok) ++failures;
    }
    json s = record(command + " summary", rt, spec.str());
    s["instances"] = count;
    s["failures"] = failures;
    s["status"] = all_ok ? "pass" : "fail";
    emit(s, rt);
  }
  if (!all_ok) std::cerr << kHint << '\n';
  return all_ok ? kPass : kFail;
}

// --- wedge ----------------------------------------------------------------

std::string params(const std::string& cmd, std::initializer_list<std::pair<const char*, long>> kv) {
  std::string s = cmd;
  for (const auto& [k, v] : kv) s += std::string(" ") + k + "=" + std::to_string(v);
  return s;
}

int cmd_wedge_build(const Runtime& rt, unsigned p, unsigned n, const std::string& emit_path) {
  const LinearPencil a = wedge_pencil(p, n);
  const std::string text = pencil_to_json(a);
  json r = record("wedge build", rt, params("wedge build", {{"p", p}, {"n", n}}));
  r["rows"] = a.rows();
  r["cols"] = a.cols();
  r["num_vars"] = a.num_vars();
  r["nnz"] = a.nnz();
  r["pencil_hash"] = sha256_hex(text);
  if (!emit_path.empty()) {
    write_file(emit_path, text);
    r["emitted"] = emit_path;
  } else {
    r["pencil"] = json::parse(text);
  }
  r["status"] = "pass";
  emit(r, rt);
  return kPass;
}

int cmd_wedge_blocks(const Runtime& rt, unsigned p, unsigned n) {
  const auto b = block_structure_check(p, n);
  json r = record("wedge check-blocks", rt, params("wedge check-blocks", {{"p", p}, {"n", n}}));
  r["p"] = p;
  r["n"] = n;
  r["ok"] = b.ok;
  r["identity_size"] = b.identity_size;
  r["diffs"] = b.diffs;
  r["status"] = b.ok ? "pass" : "fail";
  emit(r, rt);
  return b.ok ? kPass : kFail;
}

json witness_json(const WitnessCertificate& w) {
  return {{"p", w.p}, {"size", w.size}, {"rank", w.rank}, {"full", w.full}, {"arithmetic", w.arithmetic}};
}

int cmd_wedge_witness(const Runtime& rt, unsigned p) {
  const auto w = certify_witness(p, rt.cfg.modulus);
  json r = record("wedge witness", rt, params("wedge witness", {{"p", p}}));
  r.update(witness_json(w));
  r["divisible_by_d"] = w.rank % (p + 1) == 0;
  r["status"] = w.full ? "pass" : "fail";
  emit(r, rt);
  return w.full ? kPass : kFail;
}

int cmd_wedge_ratio(const Runtime& rt, unsigned p) {
  const auto w = ratio_report(p, rt.cfg);
  json r = record("wedge ratio", rt, params("wedge ratio", {{"p", p}}));
  r["p"] = p;
  r["crk"] = w.crk_observed;
  r["crk_formula"] = w.crk_formula;
  r["ncrk"] = w.ncrk;
  r["ratio"] = w.ratio.get_str();
  r["witness"] = witness_json(w.witness);
  r["status"] = w.passed ? "pass" : "fail";
  emit(r, rt);
  if (!w.passed) std::cerr << kHint << '\n';
  return w.passed ? kPass : kFail;
}

int cmd_wedge_egfamily(const Runtime& rt, unsigned i, unsigned n) {
  json r = record("wedge egfamily", rt, params("wedge egfamily", {{"i", i}, {"n", n}}));
  try {
    const auto e = egfamily_audit(i, n, rt.cfg);
    r["i"] = i;
    r["n"] = n;
    r["full"] = e.full;
    r["crk"] = e.crk;
    r["ncrk"] = e.ncrk;
    r["expect_deficient_crk"] = e.expect_deficient_crk;
    r["status"] = e.passed ? "pass" : "fail";
    emit(r, rt);
    if (!e.passed) std::cerr << kHint << '\n';
    return e.passed ? kPass : kFail;
  } catch (const NotStabilized& ex) {
    r["error"] = ex.what();
    r["status"] = "fail";
    emit(r, rt);
    std::cerr << kHint << '\n';
    return kFail;
  }
}

// --- brank ----------------------------------------------------------------

int cmd_brank_certify(const Runtime& rt, const std::string& file, unsigned p, bool exact) {
  const std::string text = read_file(file);
  const Tensor3 t = tensor_from_json(text);
  const auto c = certify(t, p, exact, rt.cfg);
  json r = record("brank certify", rt, text);
  r.update(certificate_json(c));
  r["status"] = "pass";
  emit(r, rt);
  return kPass;
}

int cmd_brank_explicit(const Runtime& rt, unsigned p, const std::string& emit_path, bool do_certify) {
  const Tensor3 t = explicit_tensor(p);
  const std::string text = tensor_to_json(t);
  json r = record("brank explicit", rt, text);
  r["p"] = p;
  r["m"] = 2 * p + 1;
  if (!emit_path.empty()) {
    write_file(emit_path, text);
    r["emitted"] = emit_path;
  } else if (!do_certify) {
    r["tensor"] = json::parse(text);
  }
  int code = kPass;
  if (do_certify) {
    const auto c = certify(t, p, true, rt.cfg);
    r.update(certificate_json(c));
    const std::size_t target = 2 * (2 * p + 1) - 3;
    r["target_2m_minus_3"] = target;
    r["meets_target"] = c.lower_bound >= target;
    if (c.lower_bound < target) code = kFail;
  }
  r["status"] = code == kPass ? "pass" : "fail";
  emit(r, rt);
  return code;
}

int cmd_brank_equations(const Runtime& rt, unsigned p) {
  const auto e = equations_threshold_check(p, rt.cfg);
  json r = record("brank equations", rt, params("brank equations", {{"p", p}}));
  r["p"] = p;
  r["m"] = e.m;
  r["observed_rank"] = e.observed_rank;
  r["threshold_D"] = e.threshold_D;
  r["exceeds_threshold"] = e.exceeds_threshold;
  r["full_rank"] = e.full_rank;
  r["observed_full"] = e.full;
  r["report"] = report_json(e.report);
  r["status"] = e.exceeds_threshold ? "pass" : "fail";
  emit(r, rt);
  if (!e.exceeds_threshold) std::cerr << kHint << '\n';
  return e.exceeds_threshold ? kPass : kFail;
}

// --- ncf ------------------------------------------------------------------

std::string expr_text(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return read_file(arg.substr(1));
  return arg;
}

Assignment random_assignment(const ExprPtr& e, std::size_t dim, std::uint64_t modulus, std::mt19937_64& rng) {
  Assignment a;
  for (const auto& v : variables(e)) a.emplace(v, random_matrix(dim, dim, modulus, rng));
  return a;
}

int cmd_ncf_eval(const Runtime& rt, const std::string& expr_arg, std::size_t dim) {
  const std::string text = expr_text(expr_arg);
  const ExprPtr e = parse(text);
  auto rng = derive_stream(rt.cfg.seed, 0);
  const auto assign = random_assignment(e, dim, rt.cfg.modulus, rng);
  const auto out = eval(e, assign);
  json r = record("ncf eval", rt, text);
  r["expression"] = print(e);
  r["dim"] = dim;
  r["gates"] = gate_count(e);
  r["defined"] = out.defined();
  if (out.defined())
    r["value"] = matrix_json(*out.value);
  else
    r["failing_gate"] = out.failing_gate;
  r["status"] = "pass";
  emit(r, rt);
  return kPass;
}

int cmd_ncf_bergman(const Runtime& rt, std::size_t dim) {
  const ExprPtr psi = bergman_psi();
  // the values claimed for the expression; other sizes are reported only
  std::string expected = dim == 2 ? "zero" : dim == 3 ? "identity" : "";
  std::map<std::string, std::size_t> tally;
  std::vector<std::string> per_trial;
  for (unsigned t = 0; t < rt.cfg.trials; ++t) {
    auto rng = derive_stream(rt.cfg.seed, t);
    const auto out = eval(psi, random_assignment(psi, dim, rt.cfg.modulus, rng));
    std::string kind = !out.defined()              ? "undefined"
                       : out.value->is_zero()      ? "zero"
                       : out.value->is_identity()  ? "identity"
                                                   : "other";
    ++tally[kind];
    per_trial.push_back(kind);
  }
  json r = record("ncf bergman", rt, print(psi));
  r["dim"] = dim;
  r["gates"] = gate_count(psi);
  r["outcomes"] = per_trial;
  r["tally"] = tally;
  r["expected"] = expected.empty() ? json(nullptr) : json(expected);
  const bool ok = expected.empty() || tally[expected] == rt.cfg.trials;
  r["status"] = ok ? "pass" : "fail";
  emit(r, rt);
  return ok ? kPass : kFail;
}

const char* op_name(Op op) {
  switch (op) {
    case Op::Var: return "var";
    case Op::Const: return "const";
    case Op::Add: return "add";
    case Op::Mul: return "mul";
    case Op::Neg: return "neg";
    case Op::Inv: return "inv";
  }
  return "?";
}

int cmd_ncf_linearize(const Runtime& rt, const std::string& expr_arg, const std::string& dir) {
  const std::string text = expr_text(expr_arg);
  const ExprPtr e = parse(text);
  const auto gs = gates(e);
  if (!dir.empty()) std::filesystem::create_directories(dir);
  json manifest = json::array();
  linearize_each(e, [&](const Realization& r) {
    json g = {{"gate_id", r.gate_id}, {"op", op_name(gs[r.gate_id].node->op)}, {"size", r.size}};
    if (!dir.empty()) {
      const std::string name = "gate_" + std::to_string(r.gate_id) + ".json";
      write_file((std::filesystem::path(dir) / name).string(), pencil_to_json(r.L));
      g["file"] = name;
      json u = json::array(), v = json::array();
      for (const auto& [i, x] : r.u) u.push_back({i, x.get_str()});
      for (const auto& [i, x] : r.v) v.push_back({i, x.get_str()});
      g["u"] = u;
      g["v"] = v;
    }
    manifest.push_back(g);
  });
  json r = record("ncf linearize", rt, text);
  r["expression"] = print(e);
  r["variables"] = variables(e);
  r["gates"] = manifest.size();
  r["root_size"] = manifest.back()["size"];
  if (!dir.empty()) {
    json m = {{"expression", print(e)}, {"variables", variables(e)}, {"gates", manifest}};
    write_file((std::filesystem::path(dir) / "manifest.json").string(), m.dump());
    r["manifest"] = (std::filesystem::path(dir) / "manifest.json").string();
  } else {
    r["gate_list"] = manifest;
  }
  r["status"] = "pass";
  emit(r, rt);
  return kPass;
}

int cmd_ncf_counterexample(const Runtime& rt) {
  const ExprPtr e = inv(sub(bergman_psi(), constant(1)));
  json r = record("ncf counterexample", rt, print(e));
  r["gates"] = gate_count(e);
  try {
    const auto w = find_blowup_nonmonotone(e, rt.cfg);
    r["gate_id"] = w.gate_id;
    r["size"] = w.size;
    r["r2"] = w.r2;
    r["r3"] = w.r3;
    r["gates_scanned"] = w.gates_scanned;
    const bool ok = w.r2 == 2 * w.size && w.r3 < 3 * w.size && w.r3 % 3 == 0;
    r["r2_full"] = w.r2 == 2 * w.size;
    r["r3_deficient"] = w.r3 < 3 * w.size;
    r["r3_divisible_by_3"] = w.r3 % 3 == 0;
    r["status"] = ok ? "pass" : "fail";
    emit(r, rt);
    return ok ? kPass : kFail;
  } catch (const NotFound& ex) {
    r["error"] = ex.what();
    r["status"] = "fail";
    emit(r, rt);
    std::cerr << kHint << '\n';
    return kFail;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ncrank: commutative, blow-up and non-commutative ranks of linear pencils"};
  app.set_version_flag("--version", std::string(NCRANK_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Runtime rt;
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "64-bit seed (else NCRANK_SEED, else a fixed default)");
  app.add_option("--trials", rt.cfg.trials, "random trials per estimate")->check(CLI::PositiveNumber);
  app.add_option("--modulus", rt.cfg.modulus, "prime modulus (> 2^40)");
  app.add_flag("--json", rt.json_out, "machine-readable output, one record per line");

  std::function<int()> action;

  // rank pencil <file> --mode ...
  auto* rank = app.add_subcommand("rank", "rank estimates for a pencil file");
  rank->require_subcommand(1);
  auto* rank_pencil = rank->add_subcommand("pencil", "estimate ranks of a pencil JSON file");
  std::string pencil_file, mode = "crk";
  rank_pencil->add_option("file", pencil_file)->required();
  rank_pencil->add_option("--mode", mode, "crk | blowup=<d> | ncrk | profile=<p>x<q>");
  rank_pencil->callback([&] { action = [&] { return cmd_rank(rt, pencil_file, mode); }; });

  // audit <kind>
  auto* audit = app.add_subcommand("audit", "property audits on a pencil file or random pencils");
  AuditOpts ao;
  audit->add_option("kind", ao.kind, "regularity | monotone | concavity | ratio")->required();
  audit->add_option("--input", ao.input, "pencil JSON file");
  audit->add_option("--random", ao.random, "rows=R cols=C vars=V count=K")->expected(1, 4);
  audit->add_option("--dmax", ao.d_max, "largest square blow-up");
  audit->add_option("--pmax", ao.p_max, "profile rows");
  audit->add_option("--qmax", ao.q_max, "profile columns");
  audit->callback([&] { action = [&] { return cmd_audit(rt, ao); }; });

  // wedge ...
  auto* wedge = app.add_subcommand("wedge", "exterior-algebra pencils A(p,n)");
  wedge->require_subcommand(1);
  unsigned wp = 1, wn = 3, wi = 0;
  std::string wemit;
  auto* wbuild = wedge->add_subcommand("build", "construct A(p,n)");
  wbuild->add_option("--p", wp)->required();
  wbuild->add_option("--n", wn)->required();
  wbuild->add_option("--emit", wemit, "write the pencil JSON here");
  wbuild->callback([&] { action = [&] { return cmd_wedge_build(rt, wp, wn, wemit); }; });
  auto* wblocks = wedge->add_subcommand("check-blocks", "verify the recursive block form");
  wblocks->add_option("--p", wp)->required();
  wblocks->add_option("--n", wn)->required();
  wblocks->callback([&] { action = [&] { return cmd_wedge_blocks(rt, wp, wn); }; });
  auto* wwit = wedge->add_subcommand("witness", "certify the Toeplitz witness");
  wwit->add_option("--p", wp)->required();
  wwit->callback([&] { action = [&] { return cmd_wedge_witness(rt, wp); }; });
  auto* wratio = wedge->add_subcommand("ratio", "crk, ncrk and their ratio for A(p,2p+1)");
  wratio->add_option("--p", wp)->required();
  wratio->callback([&] { action = [&] { return cmd_wedge_ratio(rt, wp); }; });
  auto* weg = wedge->add_subcommand("egfamily", "ncrk full and crk deficient for A(i,n)");
  weg->add_option("--i", wi)->required();
  weg->add_option("--n", wn)->required();
  weg->callback([&] { action = [&] { return cmd_wedge_egfamily(rt, wi, wn); }; });

  // brank ...
  auto* brank = app.add_subcommand("brank", "border-rank lower bounds");
  brank->require_subcommand(1);
  std::string tensor_file, bemit;
  unsigned bp = 1;
  bool exact = false, do_certify = false;
  auto* bcert = brank->add_subcommand("certify", "certify a lower bound for a tensor file");
  bcert->add_option("--tensor", tensor_file)->required();
  bcert->add_option("--p", bp)->required();
  bcert->add_flag("--exact", exact, "exact rational rank (unconditional)");
  bcert->callback([&] { action = [&] { return cmd_brank_certify(rt, tensor_file, bp, exact); }; });
  auto* bexp = brank->add_subcommand("explicit", "the explicit m x m x m tensor, m = 2p+1");
  bexp->add_option("--p", bp)->required();
  bexp->add_option("--emit", bemit, "write the tensor JSON here");
  bexp->add_flag("--certify", do_certify, "certify border rank >= 2m-3 exactly");
  bexp->callback([&] { action = [&] { return cmd_brank_explicit(rt, bp, bemit, do_certify); }; });
  auto* beq = brank->add_subcommand("equations", "blow-up rank against the equations threshold");
  beq->add_option("--p", bp)->required();
  beq->callback([&] { action = [&] { return cmd_brank_equations(rt, bp); }; });

  // ncf ...
  auto* ncf = app.add_subcommand("ncf", "non-commutative rational formulas");
  ncf->require_subcommand(1);
  std::string expr, emit_dir;
  std::size_t dim = 2;
  auto* neval = ncf->add_subcommand("eval", "evaluate on random matrices");
  neval->add_option("--expr", expr, "expression text or @file")->required();
  neval->add_option("--dim", dim)->check(CLI::PositiveNumber);
  neval->callback([&] { action = [&] { return cmd_ncf_eval(rt, expr, dim); }; });
  auto* nberg = ncf->add_subcommand("bergman", "evaluate Bergman's expression on random matrices");
  nberg->add_option("--dim", dim)->check(CLI::PositiveNumber);
  nberg->callback([&] { action = [&] { return cmd_ncf_bergman(rt, dim); }; });
  auto* nlin = ncf->add_subcommand("linearize", "per-gate pencil realizations");
  nlin->add_option("--expr", expr, "expression text or @file")->required();
  nlin->add_option("--emit-pencils", emit_dir, "directory for gate pencils and manifest");
  nlin->callback([&] { action = [&] { return cmd_ncf_linearize(rt, expr, emit_dir); }; });
  auto* ncex = ncf->add_subcommand("counterexample", "search the gate pencils of (psi - 1)^-1");
  ncex->callback([&] { action = [&] { return cmd_ncf_counterexample(rt); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (seed) {
      rt.cfg.seed = *seed;
      rt.seed_source = "flag";
    } else if (const char* env = std::getenv("NCRANK_SEED")) {
      rt.cfg.seed = parse_size(env, "NCRANK_SEED");
      rt.seed_source = "env";
    }
    if (rt.cfg.modulus <= (1ULL << 40)) throw UsageError("--modulus must exceed 2^40");
    ScalarDomain::prime(rt.cfg.modulus);  // validates primality
    return action();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
