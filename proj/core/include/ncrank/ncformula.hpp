#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ncrank/exactmat.hpp"
#include "ncrank/pencil.hpp"

namespace ncrank {

enum class Op { Var, Const, Add, Mul, Neg, Inv };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable AST node. Subtrees may be shared in memory; as a formula every
// occurrence is a separate gate.
struct Expr {
  Op op;
  std::string name;  // Var
  mpq_class value;   // Const
  ExprPtr lhs, rhs;  // Add/Mul use both, Neg/Inv use lhs
};

ExprPtr var(const std::string& name);
ExprPtr constant(const mpq_class& c);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr neg(ExprPtr a);
ExprPtr inv(ExprPtr a);
ExprPtr sub(ExprPtr a, ExprPtr b);   // a + (-b)
ExprPtr comm(ExprPtr a, ExprPtr b);  // a*b - b*a

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

struct SyntaxError : std::runtime_error {
  SyntaxError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

// Grammar: expr := term (('+'|'-') term)*, term := unary ('*' unary)*,
// unary := '-' unary | primary, primary := number | ident | inv(expr) |
// comm(expr, expr) | '(' expr ')'. Numbers are integers or n/d. A minus
// directly followed by a number literal is part of the literal.
ExprPtr parse(const std::string& text);
// Canonical form: parse(print(e)) is structurally equal to e.
std::string print(const ExprPtr& e);

// Gates in post-order (children left to right, then the node); gate ids are
// positions in this list, so the root is the last gate.
struct Gate {
  const Expr* node;
  std::vector<std::size_t> children;
};
std::vector<Gate> gates(const ExprPtr& e);
std::size_t gate_count(const ExprPtr& e);
// Sorted, unique. Variable k in a realization pencil is names[k-1].
std::vector<std::string> variables(const ExprPtr& e);

using Assignment = std::map<std::string, DenseMatrix>;

struct EvalOutcome {
  std::optional<DenseMatrix> value;
  std::size_t failing_gate = 0;  // meaningful when !value
  bool defined() const { return value.has_value(); }
};

// Depth-first, left to right; stops at the first inverse gate whose input is
// singular. Throws std::invalid_argument for unbound names or mismatched
// shapes/domains.
EvalOutcome eval(const ExprPtr& e, const Assignment& assign);
// Value of every gate; std::nullopt where the gate is undefined.
std::vector<std::optional<DenseMatrix>> eval_gates(const ExprPtr& e, const Assignment& assign);

// Bergman's expression in x, y: with W' = comm(x, W) and
// delta(W) = (W W)' ((W^-1)')^-1,
// psi = delta(Y') delta(Y'') (delta(Y'')^-1)' (delta(Y''')^-1)'.
ExprPtr bergman_psi();

// u L^{-1} v for one gate. L is s x s with pencil variables ordered as
// variables(root).
struct Realization {
  std::size_t gate_id = 0;
  std::size_t size = 0;
  std::vector<std::pair<std::uint32_t, mpq_class>> u, v;  // sparse
  LinearPencil L{0, 0, 0, ScalarDomain::rational()};
};

std::vector<Realization> linearize(const ExprPtr& e);
// Streams realizations in gate order without keeping them all alive.
void linearize_each(const ExprPtr& e, const std::function<void(const Realization&)>& sink);

// Blockwise (u (x) I) L(T)^{-1} (v (x) I) for d x d substitutes given in
// variable order; std::nullopt when L(T) is singular.
std::optional<DenseMatrix> realization_value(const Realization& r,
                                             const std::vector<DenseMatrix>& subs, std::size_t d,
                                             const ScalarDomain& dom);

struct NotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonmonotoneWitness {
  std::size_t gate_id = 0;
  std::size_t size = 0;  // s
  std::size_t r2 = 0, r3 = 0;
  std::size_t gates_scanned = 0;
};

// Linearizes e and returns the first gate (in gate order) whose pencil has
// r(2)/2 > r(3)/3. Throws NotFound otherwise.
NonmonotoneWitness find_blowup_nonmonotone(const ExprPtr& e, const SamplingConfig& cfg);
// e = (bergman_psi() - 1)^{-1}.
NonmonotoneWitness find_blowup_nonmonotone(const SamplingConfig& cfg);

}  // namespace ncrank
