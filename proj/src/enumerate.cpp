#include "sclab/enumerate.hpp"

#include <algorithm>

namespace sclab {

namespace {

std::vector<uint32_t> dedup_pool(const Universe& u) {
  std::vector<uint32_t> pool;
  for (uint32_t lit : u.literal_pool) {
    if (std::find(pool.begin(), pool.end(), lit) == pool.end()) pool.push_back(lit);
  }
  return pool;
}

void guard(std::size_t n, const Universe& u, const char* what) {
  if (n > u.enumeration_cap)
    throw CapExceeded(std::string(what) + " enumeration exceeds the configured cap");
}

// Expressions grouped by node count: atoms have one node, a unary
// application two, a binary application three.
std::vector<std::vector<ExprPtr>> exprs_by_size(const Universe& u) {
  std::vector<std::vector<ExprPtr>> by_size(4);
  for (uint32_t v : dedup_pool(u)) by_size[1].push_back(lit(v));
  for (const auto& vr : u.vars) by_size[1].push_back(var(vr.name));
  for (const auto& atom : by_size[1]) by_size[2].push_back(un(UnOp::Not, atom));
  for (BinOp op : {BinOp::Add, BinOp::Monus, BinOp::Mul}) {
    for (const auto& l : by_size[1])
      for (const auto& r : by_size[1]) by_size[3].push_back(bin(op, l, r));
  }
  return by_size;
}

} // namespace

std::vector<ExprPtr> enumerate_exprs(const Universe& u) {
  u.validate();
  auto by_size = exprs_by_size(u);
  std::vector<ExprPtr> out;
  for (const auto& group : by_size)
    for (const auto& e : group) {
      out.push_back(e);
      guard(out.size(), u, "expression");
    }
  return out;
}

std::vector<TermPtr> enumerate_terms(const Universe& u, Lang lang) {
  u.validate();
  const auto exprs = exprs_by_size(u);
  const std::size_t max_expr = 3;

  // by_size[k] lists every well-formed term with exactly k AST nodes, in a
  // fixed constructor-major order.
  std::vector<std::vector<TermPtr>> by_size(u.term_depth + 1);
  std::size_t total = 0;
  auto emit = [&](std::size_t k, TermPtr t) {
    by_size[k].push_back(std::move(t));
    guard(++total, u, "term");
  };

  for (std::size_t k = 1; k <= u.term_depth; ++k) {
    if (k == 1) emit(k, skip());
    // v := e with 1 + |e| nodes
    if (k >= 2 && k - 1 <= max_expr) {
      for (const auto& vr : u.vars)
        for (const auto& e : exprs[k - 1]) emit(k, assign(vr.name, e));
    }
    // p ; q with 1 + |p| + |q| nodes
    for (std::size_t left = 1; k >= 2 && left + 1 < k; ++left) {
      const std::size_t right = k - 1 - left;
      for (const auto& p : by_size[left])
        for (const auto& q : by_size[right]) emit(k, seq(p, q));
    }
    // while e { p } with 1 + |e| + |p| nodes
    for (std::size_t es = 1; k >= 3 && es <= std::min(max_expr, k - 2); ++es) {
      const std::size_t body = k - 1 - es;
      for (const auto& e : exprs[es])
        for (const auto& p : by_size[body]) emit(k, while_loop(e, p));
    }
    if (lang == Lang::Target) {
      // obs( p ) with 1 + |p| nodes
      if (k >= 2) {
        for (const auto& p : by_size[k - 1]) emit(k, obs(p));
      }
      // sandbox{ v := e } with 2 + |e| nodes
      if (k >= 3 && k - 2 <= max_expr) {
        for (const auto& vr : u.vars)
          for (const auto& e : exprs[k - 2]) emit(k, sandbox(vr.name, e));
      }
    }
  }

  std::vector<TermPtr> out;
  out.reserve(total);
  for (const auto& group : by_size)
    for (const auto& t : group) out.push_back(t);
  return out;
}

std::vector<Ctx> enumerate_ctxs(const Universe& u, Lang lang) {
  u.validate();
  std::vector<Ctx> out;
  const uint32_t depth = lang == Lang::Source ? 0 : u.ctx_depth;
  for (uint32_t k = 0; k <= depth; ++k) {
    out.push_back(Ctx{lang, k});
    guard(out.size(), u, "context");
  }
  return out;
}

} // namespace sclab
