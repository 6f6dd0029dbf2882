#pragma once

#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ncrank/ncformula.hpp"
#include "ncrank/pencil_io.hpp"

namespace ncrank::testing {

inline std::string fixture_text(const std::string& name) {
  std::ifstream in(std::string(NCRANK_FIXTURE_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline LinearPencil fixture(const std::string& name) { return pencil_from_json(fixture_text(name)); }

// Pencil spanned by the identity only: A = t_1 I_n.
inline LinearPencil identity_pencil(std::size_t n) {
  LinearPencil a(n, n, 1, ScalarDomain::rational());
  for (std::size_t i = 0; i < n; ++i) a.add(i, i, 1, 1);
  return a;
}

// Random formula over x, y, z of depth at most `depth`. Leaves are mostly
// variables; constants are small nonzero rationals.
inline ExprPtr random_formula(std::mt19937_64& rng, unsigned depth) {
  std::uniform_int_distribution<int> pick(0, 99);
  if (depth == 0 || pick(rng) < 25) {
    static const char* names[] = {"x", "y", "z"};
    if (pick(rng) < 80) return var(names[pick(rng) % 3]);
    long num = pick(rng) % 7 - 3;
    if (num == 0) num = 1;
    return constant(mpq_class(num, 1 + pick(rng) % 3));
  }
  const int op = pick(rng);
  if (op < 25) return add(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  if (op < 50) return mul(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  if (op < 60) return sub(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  if (op < 68) return neg(random_formula(rng, depth - 1));
  if (op < 90) return inv(random_formula(rng, depth - 1));
  return comm(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
}

// Commutative evaluation over Z/p, written against the AST directly so it
// shares nothing with eval() or the realizations. One value per gate in
// post-order; std::nullopt marks an undefined gate.
class ScalarOracle {
 public:
  ScalarOracle(const ModField& f, std::map<std::string, std::uint64_t> point)
      : f_(f), point_(std::move(point)) {}

  std::vector<std::optional<std::uint64_t>> run(const ExprPtr& e) {
    out_.clear();
    walk(*e);
    return out_;
  }

 private:
  std::optional<std::uint64_t> walk(const Expr& e) {
    std::optional<std::uint64_t> v;
    switch (e.op) {
      case Op::Var:
        v = point_.at(e.name);
        break;
      case Op::Const:
        v = f_.reduce(e.value);
        break;
      case Op::Add: {
        auto a = walk(*e.lhs), b = walk(*e.rhs);
        if (a && b) v = f_.add(*a, *b);
        break;
      }
      case Op::Mul: {
        auto a = walk(*e.lhs), b = walk(*e.rhs);
        if (a && b) v = f_.mul(*a, *b);
        break;
      }
      case Op::Neg: {
        auto a = walk(*e.lhs);
        if (a) v = f_.neg(*a);
        break;
      }
      case Op::Inv: {
        auto a = walk(*e.lhs);
        if (a && *a != 0) v = f_.inv(*a);
        break;
      }
    }
    out_.push_back(v);
    return v;
  }

  ModField f_;
  std::map<std::string, std::uint64_t> point_;
  std::vector<std::optional<std::uint64_t>> out_;
};

// Substitutes in the variable order of `e`, as realization pencils expect.
inline std::vector<DenseMatrix> ordered_subs(const ExprPtr& e, const Assignment& a) {
  std::vector<DenseMatrix> subs;
  for (const auto& v : variables(e)) subs.push_back(a.at(v));
  return subs;
}

inline Assignment random_assignment(const ExprPtr& e, std::size_t dim, std::uint64_t modulus,
                                    std::mt19937_64& rng) {
  Assignment a;
  for (const auto& v : variables(e)) a.emplace(v, random_matrix(dim, dim, modulus, rng));
  return a;
}

}  // namespace ncrank::testing
