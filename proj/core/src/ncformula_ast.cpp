#include <algorithm>
#include <set>

#include "ncrank/ncformula.hpp"

namespace ncrank {

namespace {

ExprPtr make(Op op, ExprPtr l = nullptr, ExprPtr r = nullptr) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

}  // namespace

ExprPtr var(const std::string& name) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Var;
  e->name = name;
  return e;
}

ExprPtr constant(const mpq_class& c) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Const;
  e->value = c;
  e->value.canonicalize();
  return e;
}

ExprPtr add(ExprPtr a, ExprPtr b) { return make(Op::Add, std::move(a), std::move(b)); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return make(Op::Mul, std::move(a), std::move(b)); }
ExprPtr neg(ExprPtr a) { return make(Op::Neg, std::move(a)); }
ExprPtr inv(ExprPtr a) { return make(Op::Inv, std::move(a)); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return add(std::move(a), neg(std::move(b))); }
ExprPtr comm(ExprPtr a, ExprPtr b) { return sub(mul(a, b), mul(b, a)); }

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->op != b->op) return false;
  switch (a->op) {
    case Op::Var:
      return a->name == b->name;
    case Op::Const:
      return a->value == b->value;
    case Op::Neg:
    case Op::Inv:
      return structurally_equal(a->lhs, b->lhs);
    case Op::Add:
    case Op::Mul:
      return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
  }
  return false;
}

namespace {

// Binding levels: 0 sum, 1 product, 2 unary, 3 atom.
int level(const Expr& e) {
  switch (e.op) {
    case Op::Add:
      return 0;
    case Op::Mul:
      return 1;
    case Op::Neg:
      return 2;
    case Op::Const:
      return sgn(e.value) < 0 ? 2 : 3;
    default:
      return 3;
  }
}

void emit(const Expr& e, std::string& out);

void emit_at(const Expr& e, int min_level, std::string& out) {
  if (level(e) < min_level) {
    out += '(';
    emit(e, out);
    out += ')';
  } else {
    emit(e, out);
  }
}

void emit(const Expr& e, std::string& out) {
  switch (e.op) {
    case Op::Var:
      out += e.name;
      return;
    case Op::Const:
      out += e.value.get_str();
      return;
    case Op::Inv:
      out += "inv(";
      emit(*e.lhs, out);
      out += ')';
      return;
    case Op::Neg:
      out += '-';
      // "-3" would read back as a literal
      if (e.lhs->op == Op::Const && sgn(e.lhs->value) >= 0)
        emit_at(*e.lhs, 4, out);
      else
        emit_at(*e.lhs, 2, out);
      return;
    case Op::Mul:
      emit_at(*e.lhs, 1, out);
      out += '*';
      emit_at(*e.rhs, 2, out);
      return;
    case Op::Add:
      emit_at(*e.lhs, 0, out);
      if (e.rhs->op == Op::Neg) {
        out += " - ";
        emit_at(*e.rhs->lhs, 1, out);
      } else {
        out += " + ";
        emit_at(*e.rhs, 1, out);
      }
      return;
  }
}

void collect(const ExprPtr& e, std::vector<Gate>& out) {
  Gate g{e.get(), {}};
  if (e->lhs) {
    collect(e->lhs, out);
    g.children.push_back(out.size() - 1);
  }
  if (e->rhs) {
    collect(e->rhs, out);
    g.children.push_back(out.size() - 1);
  }
  out.push_back(std::move(g));
}

std::size_t count(const Expr& e) {
  return 1 + (e.lhs ? count(*e.lhs) : 0) + (e.rhs ? count(*e.rhs) : 0);
}

void names(const Expr& e, std::set<std::string>& out) {
  if (e.op == Op::Var) out.insert(e.name);
  if (e.lhs) names(*e.lhs, out);
  if (e.rhs) names(*e.rhs, out);
}

}  // namespace

std::string print(const ExprPtr& e) {
  std::string out;
  emit(*e, out);
  return out;
}

std::vector<Gate> gates(const ExprPtr& e) {
  std::vector<Gate> out;
  collect(e, out);
  return out;
}

std::size_t gate_count(const ExprPtr& e) { return count(*e); }

std::vector<std::string> variables(const ExprPtr& e) {
  std::set<std::string> s;
  names(*e, s);
  return {s.begin(), s.end()};
}

ExprPtr bergman_psi() {
  const ExprPtr x = var("x"), y = var("y");
  auto prime = [&](const ExprPtr& w) { return comm(x, w); };
  auto delta = [&](const ExprPtr& w) { return mul(prime(mul(w, w)), inv(prime(inv(w)))); };
  const ExprPtr y1 = prime(y), y2 = prime(y1), y3 = prime(y2);
  return mul(mul(mul(delta(y1), delta(y2)), prime(inv(delta(y2)))), prime(inv(delta(y3))));
}

}  // namespace ncrank
