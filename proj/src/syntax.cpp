#include "sclab/syntax.hpp"

#include <functional>

namespace sclab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

} // namespace

std::string lang_name(Lang l) { return l == Lang::Source ? "source" : "target"; }

ExprPtr lit(uint32_t v) { return std::make_shared<Expr>(Expr{ExprLit{v}}); }
ExprPtr var(std::string name) { return std::make_shared<Expr>(Expr{ExprVar{std::move(name)}}); }
ExprPtr bin(BinOp op, ExprPtr l, ExprPtr r) {
  return std::make_shared<Expr>(Expr{ExprBin{op, std::move(l), std::move(r)}});
}
ExprPtr un(UnOp op, ExprPtr e) { return std::make_shared<Expr>(Expr{ExprUn{op, std::move(e)}}); }

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const ExprLit& x) { return x.value == std::get<ExprLit>(b->node).value; },
          [&](const ExprVar& x) { return x.name == std::get<ExprVar>(b->node).name; },
          [&](const ExprBin& x) {
            const auto& y = std::get<ExprBin>(b->node);
            return x.op == y.op && expr_equal(x.lhs, y.lhs) && expr_equal(x.rhs, y.rhs);
          },
          [&](const ExprUn& x) {
            const auto& y = std::get<ExprUn>(b->node);
            return x.op == y.op && expr_equal(x.operand, y.operand);
          },
      },
      a->node);
}

std::size_t expr_hash(const ExprPtr& e) {
  if (!e) return 0;
  return std::visit(
      overloaded{
          [](const ExprLit& x) { return hash_mix(1, x.value); },
          [](const ExprVar& x) { return hash_mix(2, std::hash<std::string>{}(x.name)); },
          [](const ExprBin& x) {
            return hash_mix(hash_mix(hash_mix(3, static_cast<std::size_t>(x.op)),
                                     expr_hash(x.lhs)),
                            expr_hash(x.rhs));
          },
          [](const ExprUn& x) {
            return hash_mix(hash_mix(4, static_cast<std::size_t>(x.op)), expr_hash(x.operand));
          },
      },
      e->node);
}

std::size_t expr_nodes(const ExprPtr& e) {
  return std::visit(overloaded{
                        [](const ExprLit&) -> std::size_t { return 1; },
                        [](const ExprVar&) -> std::size_t { return 1; },
                        [](const ExprBin& x) { return 1 + expr_nodes(x.lhs) + expr_nodes(x.rhs); },
                        [](const ExprUn& x) { return 1 + expr_nodes(x.operand); },
                    },
                    e->node);
}

uint32_t eval_expr(const ExprPtr& e, const Store& s, const Universe& u) {
  const uint64_t mod = static_cast<uint64_t>(u.vmax) + 1;
  return std::visit(
      overloaded{
          [&](const ExprLit& x) -> uint32_t { return x.value; },
          [&](const ExprVar& x) -> uint32_t { return s.get(u.var_index(x.name)); },
          [&](const ExprBin& x) -> uint32_t {
            const uint64_t l = eval_expr(x.lhs, s, u);
            const uint64_t r = eval_expr(x.rhs, s, u);
            switch (x.op) {
              case BinOp::Add: return static_cast<uint32_t>((l + r) % mod);
              case BinOp::Monus: return static_cast<uint32_t>(l > r ? l - r : 0);
              case BinOp::Mul: return static_cast<uint32_t>((l * r) % mod);
            }
            return 0;
          },
          [&](const ExprUn& x) -> uint32_t {
            const uint32_t v = eval_expr(x.operand, s, u);
            return v == 0 ? 1 : 0;
          },
      },
      e->node);
}

bool reads_high(const ExprPtr& e, const Universe& u) {
  return std::visit(overloaded{
                        [](const ExprLit&) { return false; },
                        [&](const ExprVar& x) { return u.is_high(u.var_index(x.name)); },
                        [&](const ExprBin& x) {
                          return reads_high(x.lhs, u) || reads_high(x.rhs, u);
                        },
                        [&](const ExprUn& x) { return reads_high(x.operand, u); },
                    },
                    e->node);
}

TermPtr skip() {
  static const TermPtr k = std::make_shared<Term>(Term{TermSkip{}});
  return k;
}
TermPtr assign(std::string v, ExprPtr e) {
  return std::make_shared<Term>(Term{TermAssign{std::move(v), std::move(e)}});
}
TermPtr seq(TermPtr a, TermPtr b) {
  return std::make_shared<Term>(Term{TermSeq{std::move(a), std::move(b)}});
}
TermPtr while_loop(ExprPtr cond, TermPtr body) {
  return std::make_shared<Term>(Term{TermWhile{std::move(cond), std::move(body)}});
}
TermPtr obs(TermPtr body) { return std::make_shared<Term>(Term{TermObs{std::move(body)}}); }
TermPtr sandbox(std::string v, ExprPtr e) {
  return std::make_shared<Term>(Term{TermSandbox{TermAssign{std::move(v), std::move(e)}}});
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [](const TermSkip&) { return true; },
          [&](const TermAssign& x) {
            const auto& y = std::get<TermAssign>(b->node);
            return x.var == y.var && expr_equal(x.expr, y.expr);
          },
          [&](const TermSeq& x) {
            const auto& y = std::get<TermSeq>(b->node);
            return term_equal(x.first, y.first) && term_equal(x.second, y.second);
          },
          [&](const TermWhile& x) {
            const auto& y = std::get<TermWhile>(b->node);
            return expr_equal(x.cond, y.cond) && term_equal(x.body, y.body);
          },
          [&](const TermObs& x) { return term_equal(x.body, std::get<TermObs>(b->node).body); },
          [&](const TermSandbox& x) {
            const auto& y = std::get<TermSandbox>(b->node);
            return x.assign.var == y.assign.var && expr_equal(x.assign.expr, y.assign.expr);
          },
      },
      a->node);
}

std::size_t term_hash(const TermPtr& t) {
  if (!t) return 0;
  return std::visit(
      overloaded{
          [](const TermSkip&) -> std::size_t { return 11; },
          [](const TermAssign& x) {
            return hash_mix(hash_mix(12, std::hash<std::string>{}(x.var)), expr_hash(x.expr));
          },
          [](const TermSeq& x) {
            return hash_mix(hash_mix(13, term_hash(x.first)), term_hash(x.second));
          },
          [](const TermWhile& x) {
            return hash_mix(hash_mix(14, expr_hash(x.cond)), term_hash(x.body));
          },
          [](const TermObs& x) { return hash_mix(15, term_hash(x.body)); },
          [](const TermSandbox& x) {
            return hash_mix(hash_mix(16, std::hash<std::string>{}(x.assign.var)),
                            expr_hash(x.assign.expr));
          },
      },
      t->node);
}

std::size_t term_nodes(const TermPtr& t) {
  return std::visit(
      overloaded{
          [](const TermSkip&) -> std::size_t { return 1; },
          [](const TermAssign& x) { return 1 + expr_nodes(x.expr); },
          [](const TermSeq& x) { return 1 + term_nodes(x.first) + term_nodes(x.second); },
          [](const TermWhile& x) { return 1 + expr_nodes(x.cond) + term_nodes(x.body); },
          [](const TermObs& x) { return 1 + term_nodes(x.body); },
          [](const TermSandbox& x) { return 2 + expr_nodes(x.assign.expr); },
      },
      t->node);
}

void validate_expr(const ExprPtr& e, const Universe& u) {
  std::visit(overloaded{
                 [&](const ExprLit& x) {
                   if (x.value > u.vmax)
                     throw std::invalid_argument("literal " + std::to_string(x.value) +
                                                 " exceeds vmax");
                 },
                 [&](const ExprVar& x) {
                   if (!u.has_var(x.name))
                     throw std::invalid_argument("undeclared variable '" + x.name + "'");
                 },
                 [&](const ExprBin& x) {
                   validate_expr(x.lhs, u);
                   validate_expr(x.rhs, u);
                 },
                 [&](const ExprUn& x) { validate_expr(x.operand, u); },
             },
             e->node);
}

void validate_term(const TermPtr& t, Lang lang, const Universe& u) {
  std::visit(overloaded{
                 [](const TermSkip&) {},
                 [&](const TermAssign& x) {
                   if (!u.has_var(x.var))
                     throw std::invalid_argument("undeclared variable '" + x.var + "'");
                   validate_expr(x.expr, u);
                 },
                 [&](const TermSeq& x) {
                   validate_term(x.first, lang, u);
                   validate_term(x.second, lang, u);
                 },
                 [&](const TermWhile& x) {
                   validate_expr(x.cond, u);
                   validate_term(x.body, lang, u);
                 },
                 [&](const TermObs& x) {
                   if (lang == Lang::Source)
                     throw std::invalid_argument("observer node is not part of the source language");
                   validate_term(x.body, lang, u);
                 },
                 [&](const TermSandbox& x) {
                   if (lang == Lang::Source)
                     throw std::invalid_argument("sandbox node is not part of the source language");
                   if (!u.has_var(x.assign.var))
                     throw std::invalid_argument("undeclared variable '" + x.assign.var + "'");
                   validate_expr(x.assign.expr, u);
                 },
             },
             t->node);
}

TermPtr plug(const Ctx& c, const TermPtr& p) {
  TermPtr out = p;
  for (uint32_t i = 0; i < c.obs_layers; ++i) out = obs(out);
  return out;
}

} // namespace sclab
