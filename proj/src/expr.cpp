#include "bitime/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace bitime::vfield {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  double number = 0.0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(c) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      Token t{Tok::Number, start, std::string(s.substr(start, i - start))};
      const auto* first = t.text.data();
      const auto* last = first + t.text.size();
      auto [ptr, ec] = std::from_chars(first, last, t.number);
      if (ec != std::errc() || ptr != last) throw ParseError("malformed number '" + t.text + "'", start);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, start, std::string(s.substr(start, i - start))});
      continue;
    }
    // U+2212 MINUS SIGN, as pasted from typeset formulas.
    if (c == 0xE2 && i + 2 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0x88 &&
        static_cast<unsigned char>(s[i + 2]) == 0x92) {
      out.push_back({Tok::Minus, start, "-"});
      i += 3;
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      default: throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", start);
    }
    out.push_back({k, start, std::string(1, static_cast<char>(c))});
    ++i;
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::size_t dim, std::vector<Expr::Node>& nodes)
      : toks_(std::move(toks)), dim_(dim), nodes_(nodes) {}

  int parse() {
    int root = expr();
    if (peek().kind != Tok::End) throw ParseError("unexpected token '" + peek().text + "'", peek().pos);
    return root;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) throw ParseError(std::string("expected ") + what, peek().pos);
  }

  int add(Expr::Node n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int expr() {
    int lhs = term();
    for (;;) {
      if (accept(Tok::Plus)) {
        lhs = add({Expr::Op::Add, 0.0, -1, lhs, term()});
      } else if (accept(Tok::Minus)) {
        lhs = add({Expr::Op::Sub, 0.0, -1, lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  int term() {
    int lhs = unary();
    for (;;) {
      if (accept(Tok::Star)) {
        lhs = add({Expr::Op::Mul, 0.0, -1, lhs, unary()});
      } else if (accept(Tok::Slash)) {
        lhs = add({Expr::Op::Div, 0.0, -1, lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  int unary() {
    if (accept(Tok::Minus)) return add({Expr::Op::Neg, 0.0, -1, unary(), -1});
    if (accept(Tok::Plus)) return unary();
    return power();
  }

  int power() {
    int base = primary();
    if (accept(Tok::Caret)) return add({Expr::Op::Pow, 0.0, -1, base, unary()});
    return base;
  }

  int primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        advance();
        return add({Expr::Op::Const, t.number});
      case Tok::LParen: {
        advance();
        int e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident:
        return identifier();
      case Tok::End:
        throw ParseError("unexpected end of input", t.pos);
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.pos);
    }
  }

  int identifier() {
    const Token t = advance();
    if (t.text.size() >= 2 && t.text[0] == 'x' &&
        t.text.find_first_not_of("0123456789", 1) == std::string::npos) {
      if (t.text[1] == '0') throw ParseError("variable index must start at 1 in '" + t.text + "'", t.pos);
      const unsigned long idx = std::stoul(t.text.substr(1));
      if (idx < 1 || idx > dim_) {
        throw ParseError("variable '" + t.text + "' out of range for dimension " + std::to_string(dim_), t.pos);
      }
      return add({Expr::Op::Var, 0.0, static_cast<int>(idx - 1)});
    }
    struct Fn {
      const char* name;
      Expr::Op op;
      int arity;
    };
    static constexpr Fn kFns[] = {{"sin", Expr::Op::Sin, 1},  {"cos", Expr::Op::Cos, 1},
                                  {"exp", Expr::Op::Exp, 1},  {"abs", Expr::Op::Abs, 1},
                                  {"sqrt", Expr::Op::Sqrt, 1}, {"min", Expr::Op::Min, 2},
                                  {"max", Expr::Op::Max, 2}};
    for (const auto& fn : kFns) {
      if (t.text != fn.name) continue;
      expect(Tok::LParen, "'(' after function name");
      int a = expr();
      int b = -1;
      if (fn.arity == 2) {
        expect(Tok::Comma, "','");
        b = expr();
      }
      expect(Tok::RParen, "')'");
      return add({fn.op, 0.0, -1, a, b});
    }
    throw ParseError("unknown identifier '" + t.text + "'", t.pos);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t dim_;
  std::vector<Expr::Node>& nodes_;
};

}  // namespace

Expr parse_expr(std::string_view text, std::size_t dim) {
  if (dim == 0) throw InvalidArgument("parse_expr: dimension must be at least 1");
  Expr e;
  e.dim_ = dim;
  e.text_ = std::string(text);
  auto toks = tokenize(text);
  if (toks.size() == 1) throw ParseError("empty expression", 0);
  Parser p(std::move(toks), dim, e.nodes_);
  e.root_ = p.parse();
  return e;
}

double Expr::eval(const Vector& x) const {
  if (root_ < 0) throw InvalidArgument("evaluating an empty expression");
  const double v = eval_node(root_, x);
  if (!std::isfinite(v)) throw DomainError("expression '" + text_ + "' is not finite at the given point");
  return v;
}

double Expr::eval_node(int i, const Vector& x) const {
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return x[n.index];
    case Op::Neg: return -eval_node(n.lhs, x);
    case Op::Add: return eval_node(n.lhs, x) + eval_node(n.rhs, x);
    case Op::Sub: return eval_node(n.lhs, x) - eval_node(n.rhs, x);
    case Op::Mul: return eval_node(n.lhs, x) * eval_node(n.rhs, x);
    case Op::Div: {
      const double d = eval_node(n.rhs, x);
      if (d == 0.0) throw DomainError("division by zero in '" + text_ + "'");
      return eval_node(n.lhs, x) / d;
    }
    case Op::Pow: {
      const double v = std::pow(eval_node(n.lhs, x), eval_node(n.rhs, x));
      if (!std::isfinite(v)) throw DomainError("pow out of domain in '" + text_ + "'");
      return v;
    }
    case Op::Sin: return std::sin(eval_node(n.lhs, x));
    case Op::Cos: return std::cos(eval_node(n.lhs, x));
    case Op::Exp: return std::exp(eval_node(n.lhs, x));
    case Op::Abs: return std::abs(eval_node(n.lhs, x));
    case Op::Sqrt: {
      const double a = eval_node(n.lhs, x);
      if (a < 0.0) throw DomainError("sqrt of negative value in '" + text_ + "'");
      return std::sqrt(a);
    }
    case Op::Min: return std::min(eval_node(n.lhs, x), eval_node(n.rhs, x));
    case Op::Max: return std::max(eval_node(n.lhs, x), eval_node(n.rhs, x));
  }
  return 0.0;
}

bool Expr::is_constant() const {
  for (const auto& n : nodes_) {
    if (n.op == Op::Var) return false;
  }
  return root_ >= 0;
}

Expr Expr::negate(const Expr& e) {
  Expr out = e;
  out.nodes_.push_back({Op::Neg, 0.0, -1, e.root_, -1});
  out.root_ = static_cast<int>(out.nodes_.size()) - 1;
  out.text_ = "-(" + e.text_ + ")";
  return out;
}

Expr Expr::constant(double v, std::size_t dim) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return parse_expr(v < 0 ? "(" + os.str() + ")" : os.str(), dim);
}

}  // namespace bitime::vfield
