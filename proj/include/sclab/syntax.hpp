#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "sclab/universe.hpp"

namespace sclab {

enum class Lang : uint8_t { Source, Target };

std::string lang_name(Lang l);

enum class BinOp : uint8_t { Add, Monus, Mul };
enum class UnOp : uint8_t { Not };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct ExprLit {
  uint32_t value;
};
struct ExprVar {
  std::string name;
};
struct ExprBin {
  BinOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct ExprUn {
  UnOp op;
  ExprPtr operand;
};

struct Expr {
  std::variant<ExprLit, ExprVar, ExprBin, ExprUn> node;
};

ExprPtr lit(uint32_t v);
ExprPtr var(std::string name);
ExprPtr bin(BinOp op, ExprPtr l, ExprPtr r);
ExprPtr un(UnOp op, ExprPtr e);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
std::size_t expr_hash(const ExprPtr& e);
std::size_t expr_nodes(const ExprPtr& e);

// Total evaluation: add/mul reduce modulo vmax+1, monus truncates at zero,
// not maps zero to one and everything else to zero.
uint32_t eval_expr(const ExprPtr& e, const Store& s, const Universe& u);

// True when the expression mentions at least one high variable.
bool reads_high(const ExprPtr& e, const Universe& u);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct TermSkip {};
struct TermAssign {
  std::string var;
  ExprPtr expr;
};
struct TermSeq {
  TermPtr first;
  TermPtr second;
};
struct TermWhile {
  ExprPtr cond;
  TermPtr body;
};
// Target only: the observer layer that reports internal leak events.
struct TermObs {
  TermPtr body;
};
// Target only: a sandboxed assignment. Holding the assignment inline makes
// "wraps exactly one assignment" true by construction.
struct TermSandbox {
  TermAssign assign;
};

struct Term {
  std::variant<TermSkip, TermAssign, TermSeq, TermWhile, TermObs, TermSandbox> node;
};

TermPtr skip();
TermPtr assign(std::string v, ExprPtr e);
TermPtr seq(TermPtr a, TermPtr b);
TermPtr while_loop(ExprPtr cond, TermPtr body);
TermPtr obs(TermPtr body);
TermPtr sandbox(std::string v, ExprPtr e);

bool term_equal(const TermPtr& a, const TermPtr& b);
std::size_t term_hash(const TermPtr& t);
std::size_t term_nodes(const TermPtr& t);

// Rejects ill-formed ASTs: undeclared variables, literals above vmax, and
// observer/sandbox nodes under Lang::Source. Throws std::invalid_argument.
void validate_expr(const ExprPtr& e, const Universe& u);
void validate_term(const TermPtr& t, Lang lang, const Universe& u);

// Contexts are chains of observer layers around a single hole, so the layer
// count is a faithful representation. Source admits only the bare hole.
struct Ctx {
  Lang lang = Lang::Source;
  uint32_t obs_layers = 0;

  bool operator==(const Ctx&) const = default;
};

// Replaces the hole with p; each observer layer becomes an observer node.
TermPtr plug(const Ctx& c, const TermPtr& p);

// Functors for structural hashing in unordered containers.
struct TermPtrHash {
  std::size_t operator()(const TermPtr& t) const { return term_hash(t); }
};
struct TermPtrEq {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return term_equal(a, b); }
};

} // namespace sclab
