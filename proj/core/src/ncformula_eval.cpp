#include "ncrank/ncformula.hpp"

namespace ncrank {

namespace {

struct Shape {
  std::size_t n;
  ScalarDomain dom;
};

Shape check_assignment(const ExprPtr& e, const Assignment& assign) {
  Shape sh{1, ScalarDomain::rational()};
  bool first = true;
  for (const auto& [name, m] : assign) {
    if (m.rows() != m.cols()) throw std::invalid_argument("value of '" + name + "' is not square");
    if (first) {
      sh = {m.rows(), m.domain()};
      first = false;
    } else if (m.rows() != sh.n || !(m.domain() == sh.dom)) {
      throw std::invalid_argument("assigned matrices differ in size or domain");
    }
  }
  for (const auto& v : variables(e))
    if (!assign.count(v)) throw std::invalid_argument("unbound variable '" + v + "'");
  return sh;
}

// Shared walk. With stop_early the first undefined inverse aborts and is
// reported through `failing`.
std::vector<std::optional<DenseMatrix>> walk(const ExprPtr& e, const Assignment& assign,
                                             bool stop_early, std::optional<std::size_t>& failing) {
  const Shape sh = check_assignment(e, assign);
  const auto gs = gates(e);
  std::vector<std::optional<DenseMatrix>> val(gs.size());
  for (std::size_t id = 0; id < gs.size(); ++id) {
    const Expr& g = *gs[id].node;
    const auto& ch = gs[id].children;
    switch (g.op) {
      case Op::Var:
        val[id] = assign.at(g.name);
        break;
      case Op::Const:
        val[id] = DenseMatrix::identity(sh.n, sh.dom).scaled(g.value);
        break;
      case Op::Add:
        if (val[ch[0]] && val[ch[1]]) val[id] = *val[ch[0]] + *val[ch[1]];
        break;
      case Op::Mul:
        if (val[ch[0]] && val[ch[1]]) val[id] = *val[ch[0]] * *val[ch[1]];
        break;
      case Op::Neg:
        if (val[ch[0]]) val[id] = val[ch[0]]->scaled(mpq_class(-1));
        break;
      case Op::Inv:
        if (val[ch[0]]) {
          val[id] = inverse(*val[ch[0]]);
          if (!val[id] && !failing) {
            failing = id;
            if (stop_early) return val;
          }
        }
        break;
    }
  }
  return val;
}

}  // namespace

EvalOutcome eval(const ExprPtr& e, const Assignment& assign) {
  std::optional<std::size_t> failing;
  auto vals = walk(e, assign, true, failing);
  EvalOutcome out;
  if (failing) {
    out.failing_gate = *failing;
    return out;
  }
  out.value = std::move(vals.back());
  return out;
}

std::vector<std::optional<DenseMatrix>> eval_gates(const ExprPtr& e, const Assignment& assign) {
  std::optional<std::size_t> failing;
  return walk(e, assign, false, failing);
}

}  // namespace ncrank
