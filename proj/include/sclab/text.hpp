#pragma once

#include <stdexcept>
#include <string>

#include "sclab/syntax.hpp"

namespace sclab {

// Syntax error with the byte offset of the offending token.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at offset " + std::to_string(position) + ")"),
        pos(position) {}
  std::size_t pos;
};

// Concrete grammar:
//   term:  skip | v := e | p ; q (right-assoc) | while e { p }
//          | obs( p ) | sandbox{ v := e } | ( p )
//   ctx:   hole | obs( ctx )
//   expr:  + - (monus) * with the usual precedence, prefix not, parentheses,
//          decimal literals, declared variable names
std::string render_expr(const ExprPtr& e);
std::string render_term(const TermPtr& t);
std::string render_ctx(const Ctx& c);

ExprPtr parse_expr(const std::string& text, const Universe& u);
TermPtr parse_term(const std::string& text, Lang lang, const Universe& u);
Ctx parse_ctx(const std::string& text, Lang lang, const Universe& u);

} // namespace sclab
