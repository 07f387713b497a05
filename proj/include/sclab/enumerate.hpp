#pragma once

#include <vector>

#include "sclab/syntax.hpp"

namespace sclab {

// Bounded, duplicate-free, order-stable enumerations. These realize the
// "for all programs / contexts / stores" quantifiers at desk scale.
//
// Expressions are the literal pool and the variables, plus one layer of
// operators over those atoms. Terms carry at most `term_depth` AST nodes in
// total (statement nodes plus expression nodes); contexts are observer
// chains of length at most `ctx_depth`. Store enumeration lives in
// StoreSpace. All enumerators throw CapExceeded when the result would
// exceed `enumeration_cap`.
std::vector<ExprPtr> enumerate_exprs(const Universe& u);
std::vector<TermPtr> enumerate_terms(const Universe& u, Lang lang);
std::vector<Ctx> enumerate_ctxs(const Universe& u, Lang lang);

} // namespace sclab
