#include "sclab/text.hpp"

#include <cctype>
#include <variant>

namespace sclab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Precedence levels: additive 1, multiplicative 2, unary 3, atoms 4.
int expr_prec(const ExprPtr& e) {
  return std::visit(overloaded{
                        [](const ExprLit&) { return 4; },
                        [](const ExprVar&) { return 4; },
                        [](const ExprBin& x) { return x.op == BinOp::Mul ? 2 : 1; },
                        [](const ExprUn&) { return 3; },
                    },
                    e->node);
}

void render_expr_into(const ExprPtr& e, std::string& out, int min_prec) {
  const int prec = expr_prec(e);
  const bool parens = prec < min_prec;
  if (parens) out += "(";
  std::visit(overloaded{
                 [&](const ExprLit& x) { out += std::to_string(x.value); },
                 [&](const ExprVar& x) { out += x.name; },
                 [&](const ExprBin& x) {
                   // Binary operators are left-associative, so the right
                   // operand needs strictly higher precedence.
                   render_expr_into(x.lhs, out, prec);
                   switch (x.op) {
                     case BinOp::Add: out += " + "; break;
                     case BinOp::Monus: out += " - "; break;
                     case BinOp::Mul: out += " * "; break;
                   }
                   render_expr_into(x.rhs, out, prec + 1);
                 },
                 [&](const ExprUn& x) {
                   out += "not ";
                   render_expr_into(x.operand, out, 3);
                 },
             },
             e->node);
  if (parens) out += ")";
}

void render_term_into(const TermPtr& t, std::string& out) {
  std::visit(overloaded{
                 [&](const TermSkip&) { out += "skip"; },
                 [&](const TermAssign& x) {
                   out += x.var;
                   out += " := ";
                   render_expr_into(x.expr, out, 0);
                 },
                 [&](const TermSeq& x) {
                   // Sequencing is right-associative in the grammar, so a
                   // left-nested sequence keeps its shape via parentheses.
                   const bool left_parens = std::holds_alternative<TermSeq>(x.first->node);
                   if (left_parens) out += "(";
                   render_term_into(x.first, out);
                   if (left_parens) out += ")";
                   out += " ; ";
                   render_term_into(x.second, out);
                 },
                 [&](const TermWhile& x) {
                   out += "while ";
                   render_expr_into(x.cond, out, 0);
                   out += " { ";
                   render_term_into(x.body, out);
                   out += " }";
                 },
                 [&](const TermObs& x) {
                   out += "obs(";
                   render_term_into(x.body, out);
                   out += ")";
                 },
                 [&](const TermSandbox& x) {
                   out += "sandbox{ ";
                   out += x.assign.var;
                   out += " := ";
                   render_expr_into(x.assign.expr, out, 0);
                   out += " }";
                 },
             },
             t->node);
}

enum class Tok : uint8_t {
  End,
  Ident,
  Number,
  Assign,    // :=
  Semi,      // ;
  Plus,
  Minus,
  Star,
  LParen,
  RParen,
  LBrace,
  RBrace,
  KwSkip,
  KwWhile,
  KwObs,
  KwSandbox,
  KwHole,
  KwNot,
};

struct Token {
  Tok kind;
  std::string text;
  uint32_t number = 0;
  std::size_t pos = 0;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

  Token expect(Tok kind, const std::string& what) {
    if (cur_.kind != kind) throw ParseError("expected " + what, cur_.pos);
    return take();
  }

private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    cur_ = Token{Tok::End, "", 0, pos_};
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      cur_.text = text_.substr(start, pos_ - start);
      if (cur_.text == "skip") cur_.kind = Tok::KwSkip;
      else if (cur_.text == "while") cur_.kind = Tok::KwWhile;
      else if (cur_.text == "obs") cur_.kind = Tok::KwObs;
      else if (cur_.text == "sandbox") cur_.kind = Tok::KwSandbox;
      else if (cur_.text == "hole") cur_.kind = Tok::KwHole;
      else if (cur_.text == "not") cur_.kind = Tok::KwNot;
      else cur_.kind = Tok::Ident;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      cur_.text = text_.substr(start, pos_ - start);
      cur_.kind = Tok::Number;
      try {
        cur_.number = static_cast<uint32_t>(std::stoul(cur_.text));
      } catch (const std::exception&) {
        throw ParseError("numeric literal out of range", start);
      }
      return;
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
    };
    if (two(':', '=')) {
      cur_.kind = Tok::Assign;
      pos_ += 2;
      return;
    }
    switch (c) {
      case ';': cur_.kind = Tok::Semi; break;
      case '+': cur_.kind = Tok::Plus; break;
      case '-': cur_.kind = Tok::Minus; break;
      case '*': cur_.kind = Tok::Star; break;
      case '(': cur_.kind = Tok::LParen; break;
      case ')': cur_.kind = Tok::RParen; break;
      case '{': cur_.kind = Tok::LBrace; break;
      case '}': cur_.kind = Tok::RBrace; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  Token cur_;
};

class Parser {
public:
  Parser(const std::string& text, Lang lang, const Universe& u)
      : lex_(text), lang_(lang), u_(u) {}

  ExprPtr expr() { return additive(); }

  TermPtr term() {
    TermPtr first = atom_term();
    if (lex_.peek().kind == Tok::Semi) {
      lex_.take();
      return seq(std::move(first), term());
    }
    return first;
  }

  Ctx ctx() {
    uint32_t layers = 0;
    std::vector<std::size_t> open;
    while (lex_.peek().kind == Tok::KwObs) {
      const Token t = lex_.take();
      if (lang_ == Lang::Source)
        throw ParseError("observer context is not part of the source language", t.pos);
      lex_.expect(Tok::LParen, "'('");
      ++layers;
      open.push_back(t.pos);
    }
    lex_.expect(Tok::KwHole, "'hole'");
    for (std::size_t i = 0; i < layers; ++i) lex_.expect(Tok::RParen, "')'");
    if (layers > u_.ctx_depth)
      throw ParseError("context exceeds ctx_depth", open.empty() ? 0 : open.front());
    return Ctx{lang_, layers};
  }

  void finish() {
    if (lex_.peek().kind != Tok::End) throw ParseError("trailing input", lex_.peek().pos);
  }

private:
  TermPtr atom_term() {
    const Token t = lex_.peek();
    switch (t.kind) {
      case Tok::KwSkip:
        lex_.take();
        return skip();
      case Tok::Ident: {
        lex_.take();
        check_var(t);
        lex_.expect(Tok::Assign, "':='");
        return assign(t.text, expr());
      }
      case Tok::KwWhile: {
        lex_.take();
        ExprPtr cond = expr();
        lex_.expect(Tok::LBrace, "'{'");
        TermPtr body = term();
        lex_.expect(Tok::RBrace, "'}'");
        return while_loop(std::move(cond), std::move(body));
      }
      case Tok::KwObs: {
        lex_.take();
        if (lang_ == Lang::Source)
          throw ParseError("observer node is not part of the source language", t.pos);
        lex_.expect(Tok::LParen, "'('");
        TermPtr body = term();
        lex_.expect(Tok::RParen, "')'");
        return obs(std::move(body));
      }
      case Tok::KwSandbox: {
        lex_.take();
        if (lang_ == Lang::Source)
          throw ParseError("sandbox node is not part of the source language", t.pos);
        lex_.expect(Tok::LBrace, "'{'");
        const Token v = lex_.expect(Tok::Ident, "variable name");
        check_var(v);
        lex_.expect(Tok::Assign, "':='");
        ExprPtr e = expr();
        lex_.expect(Tok::RBrace, "'}'");
        return sandbox(v.text, std::move(e));
      }
      case Tok::LParen: {
        lex_.take();
        TermPtr inner = term();
        lex_.expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        throw ParseError("expected a statement", t.pos);
    }
  }

  ExprPtr additive() {
    ExprPtr e = multiplicative();
    while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
      const BinOp op = lex_.take().kind == Tok::Plus ? BinOp::Add : BinOp::Monus;
      e = bin(op, std::move(e), multiplicative());
    }
    return e;
  }

  ExprPtr multiplicative() {
    ExprPtr e = unary();
    while (lex_.peek().kind == Tok::Star) {
      lex_.take();
      e = bin(BinOp::Mul, std::move(e), unary());
    }
    return e;
  }

  ExprPtr unary() {
    if (lex_.peek().kind == Tok::KwNot) {
      lex_.take();
      return un(UnOp::Not, unary());
    }
    return primary();
  }

  ExprPtr primary() {
    const Token t = lex_.peek();
    switch (t.kind) {
      case Tok::Number:
        lex_.take();
        if (t.number > u_.vmax) throw ParseError("literal exceeds vmax", t.pos);
        return lit(t.number);
      case Tok::Ident:
        lex_.take();
        check_var(t);
        return var(t.text);
      case Tok::LParen: {
        lex_.take();
        ExprPtr e = expr();
        lex_.expect(Tok::RParen, "')'");
        return e;
      }
      default:
        throw ParseError("expected an expression", t.pos);
    }
  }

  void check_var(const Token& t) const {
    if (!u_.has_var(t.text)) throw ParseError("undeclared variable '" + t.text + "'", t.pos);
  }

  Lexer lex_;
  Lang lang_;
  const Universe& u_;
};

} // namespace

std::string render_expr(const ExprPtr& e) {
  std::string out;
  render_expr_into(e, out, 0);
  return out;
}

std::string render_term(const TermPtr& t) {
  std::string out;
  render_term_into(t, out);
  return out;
}

std::string render_ctx(const Ctx& c) {
  std::string out;
  for (uint32_t i = 0; i < c.obs_layers; ++i) out += "obs(";
  out += "hole";
  for (uint32_t i = 0; i < c.obs_layers; ++i) out += ")";
  return out;
}

ExprPtr parse_expr(const std::string& text, const Universe& u) {
  Parser p(text, Lang::Source, u);
  ExprPtr e = p.expr();
  p.finish();
  return e;
}

TermPtr parse_term(const std::string& text, Lang lang, const Universe& u) {
  Parser p(text, lang, u);
  TermPtr t = p.term();
  p.finish();
  return t;
}

Ctx parse_ctx(const std::string& text, Lang lang, const Universe& u) {
  Parser p(text, lang, u);
  Ctx c = p.ctx();
  p.finish();
  return c;
}

} // namespace sclab
