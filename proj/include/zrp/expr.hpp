#pragma once

// A small arithmetic grammar for user-defined weights:
//   + - * / ^  parentheses, number literals, variables k1 and k2 (plus any
//   names supplied through a parameter map), and the functions
//   factorial(x), pochhammer(a,n), exp(x), log(x).
// Evaluation is carried out on signed log magnitudes so factorials and
// Pochhammer symbols stay usable far beyond double overflow.

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "zrp/errors.hpp"
#include "zrp/logspace.hpp"

namespace zrp::expr {

// value = sign * exp(lg); sign in {-1, 0, +1}.  Values that still fit a
// double are carried exactly alongside the log so that integer arithmetic
// (site occupations, small parameters) does not pick up exp/log roundoff.
struct LogVal {
  double lg = neg_inf;
  int sign = 0;
  bool has_exact = false;
  double exact = 0.0;

  static LogVal from_double(double v) {
    if (v == 0) return {neg_inf, 0, true, 0.0};
    return {std::log(std::abs(v)), v > 0 ? 1 : -1, true, v};
  }
  double to_double() const {
    if (has_exact) return exact;
    if (sign == 0) return 0.0;
    double m = std::exp(lg);
    return sign > 0 ? m : -m;
  }
};

namespace detail_lv {

inline LogVal from_exact_or(double v, LogVal fallback) {
  if (std::isfinite(v) && std::abs(v) < 1e300 &&
      (v == 0.0 || std::abs(v) > 1e-300))
    return LogVal::from_double(v);
  fallback.has_exact = false;
  return fallback;
}

}  // namespace detail_lv

inline LogVal lv_add(LogVal a, LogVal b) {
  LogVal out;
  if (a.sign == 0) out = b;
  else if (b.sign == 0) out = a;
  else if (a.sign == b.sign) out = {log_add(a.lg, b.lg), a.sign, false, 0.0};
  else if (a.lg == b.lg) out = {neg_inf, 0, true, 0.0};
  else
    out = a.lg > b.lg ? LogVal{log_sub(a.lg, b.lg), a.sign, false, 0.0}
                      : LogVal{log_sub(b.lg, a.lg), b.sign, false, 0.0};
  if (a.has_exact && b.has_exact)
    return detail_lv::from_exact_or(a.exact + b.exact, out);
  return out;
}

inline LogVal lv_mul(LogVal a, LogVal b) {
  LogVal out;
  if (a.sign == 0 || b.sign == 0) out = {neg_inf, 0, true, 0.0};
  else out = {a.lg + b.lg, a.sign * b.sign, false, 0.0};
  if (a.has_exact && b.has_exact)
    return detail_lv::from_exact_or(a.exact * b.exact, out);
  return out;
}

inline LogVal lv_div(LogVal a, LogVal b) {
  if (b.sign == 0) throw ParseError("division by zero in weight expression");
  LogVal out;
  if (a.sign == 0) out = {neg_inf, 0, true, 0.0};
  else out = {a.lg - b.lg, a.sign * b.sign, false, 0.0};
  if (a.has_exact && b.has_exact)
    return detail_lv::from_exact_or(a.exact / b.exact, out);
  return out;
}

struct Node;
using NodePtr = std::unique_ptr<Node>;

struct Node {
  enum Kind { Number, Var, Add, Sub, Mul, Div, Pow, Neg, Call } kind;
  double number = 0;
  std::string name;  // Var / Call
  std::vector<NodePtr> args;
};

namespace detail {

struct Lexer {
  std::string src;
  std::size_t pos = 0;

  void skip() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }
  bool eof() {
    skip();
    return pos >= src.size();
  }
  char peek() {
    skip();
    return pos < src.size() ? src[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "' at position " +
                       std::to_string(pos) + " in weight expression");
  }
};

class Parser {
 public:
  explicit Parser(const std::string& s) : lex_{s, 0} {}

  NodePtr parse() {
    NodePtr e = expression();
    if (!lex_.eof())
      throw ParseError("trailing input at position " +
                       std::to_string(lex_.pos));
    return e;
  }

 private:
  Lexer lex_;

  NodePtr expression() {
    NodePtr lhs = term();
    while (true) {
      if (lex_.accept('+')) {
        lhs = binary(Node::Add, std::move(lhs), term());
      } else if (lex_.accept('-')) {
        lhs = binary(Node::Sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (true) {
      if (lex_.accept('*')) {
        lhs = binary(Node::Mul, std::move(lhs), factor());
      } else if (lex_.accept('/')) {
        lhs = binary(Node::Div, std::move(lhs), factor());
      } else {
        return lhs;
      }
    }
  }

  // right-associative power binds tighter than unary minus
  NodePtr factor() {
    if (lex_.accept('-')) {
      auto n = std::make_unique<Node>();
      n->kind = Node::Neg;
      n->args.push_back(factor());
      return n;
    }
    NodePtr base = atom();
    if (lex_.accept('^')) {
      return binary(Node::Pow, std::move(base), factor());
    }
    return base;
  }

  NodePtr atom() {
    char c = lex_.peek();
    if (c == '(') {
      lex_.expect('(');
      NodePtr e = expression();
      lex_.expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
    throw ParseError("unexpected character '" + std::string(1, c) +
                     "' at position " + std::to_string(lex_.pos));
  }

  NodePtr number() {
    std::size_t start = lex_.pos;
    auto& s = lex_.src;
    auto& p = lex_.pos;
    while (p < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[p])) || s[p] == '.' ||
            s[p] == 'e' || s[p] == 'E' ||
            ((s[p] == '+' || s[p] == '-') && p > start &&
             (s[p - 1] == 'e' || s[p - 1] == 'E'))))
      ++p;
    auto n = std::make_unique<Node>();
    n->kind = Node::Number;
    n->number = std::stod(s.substr(start, p - start));
    return n;
  }

  NodePtr ident() {
    auto& s = lex_.src;
    auto& p = lex_.pos;
    std::size_t start = p;
    while (p < s.size() && (std::isalnum(static_cast<unsigned char>(s[p])) ||
                            s[p] == '_'))
      ++p;
    std::string name = s.substr(start, p - start);
    if (lex_.peek() == '(') {
      lex_.expect('(');
      auto n = std::make_unique<Node>();
      n->kind = Node::Call;
      n->name = name;
      if (lex_.peek() != ')') {
        n->args.push_back(expression());
        while (lex_.accept(',')) n->args.push_back(expression());
      }
      lex_.expect(')');
      return n;
    }
    auto n = std::make_unique<Node>();
    n->kind = Node::Var;
    n->name = name;
    return n;
  }

  static NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_unique<Node>();
    n->kind = k;
    n->args.push_back(std::move(a));
    n->args.push_back(std::move(b));
    return n;
  }
};

}  // namespace detail

class Expression {
 public:
  explicit Expression(const std::string& src,
                      std::map<std::string, double> params = {})
      : root_(detail::Parser(src).parse()), params_(std::move(params)) {}

  // log of the (positive) expression value at (k1, k2)
  double log_eval(double k1, double k2) const {
    LogVal v = eval(*root_, k1, k2);
    if (v.sign <= 0)
      throw InvalidParam("weight expression is not positive at k=(" +
                         std::to_string(long(k1)) + "," +
                         std::to_string(long(k2)) + ")");
    return v.lg;
  }

 private:
  NodePtr root_;
  std::map<std::string, double> params_;

  LogVal eval(const Node& n, double k1, double k2) const {
    switch (n.kind) {
      case Node::Number:
        return LogVal::from_double(n.number);
      case Node::Var: {
        if (n.name == "k1") return LogVal::from_double(k1);
        if (n.name == "k2") return LogVal::from_double(k2);
        auto it = params_.find(n.name);
        if (it == params_.end())
          throw ParseError("unknown name '" + n.name + "' in weight expression");
        return LogVal::from_double(it->second);
      }
      case Node::Add:
        return lv_add(eval(*n.args[0], k1, k2), eval(*n.args[1], k1, k2));
      case Node::Sub:
        return lv_add(eval(*n.args[0], k1, k2),
                      lv_mul(LogVal::from_double(-1.0),
                             eval(*n.args[1], k1, k2)));
      case Node::Mul:
        return lv_mul(eval(*n.args[0], k1, k2), eval(*n.args[1], k1, k2));
      case Node::Div:
        return lv_div(eval(*n.args[0], k1, k2), eval(*n.args[1], k1, k2));
      case Node::Neg:
        return lv_mul(LogVal::from_double(-1.0), eval(*n.args[0], k1, k2));
      case Node::Pow: {
        LogVal base = eval(*n.args[0], k1, k2);
        double expo = eval(*n.args[1], k1, k2).to_double();
        if (base.sign == 0)
          return LogVal::from_double(expo == 0 ? 1.0 : 0.0);
        if (base.sign < 0)
          throw ParseError("power of a negative base in weight expression");
        LogVal out{expo * base.lg, 1, false, 0.0};
        if (base.has_exact)
          return detail_lv::from_exact_or(std::pow(base.exact, expo), out);
        return out;
      }
      case Node::Call:
        return call(n, k1, k2);
    }
    throw ParseError("corrupt expression tree");
  }

  LogVal call(const Node& n, double k1, double k2) const {
    auto arity = [&](std::size_t want) {
      if (n.args.size() != want)
        throw ParseError(n.name + " takes " + std::to_string(want) +
                         " argument(s)");
    };
    if (n.name == "factorial") {
      arity(1);
      double x = eval(*n.args[0], k1, k2).to_double();
      if (x < 0) throw ParseError("factorial of a negative value");
      return {log_factorial(x), 1};
    }
    if (n.name == "pochhammer") {
      arity(2);
      double a = eval(*n.args[0], k1, k2).to_double();
      double m = eval(*n.args[1], k1, k2).to_double();
      if (a <= 0 || m < 0)
        throw ParseError("pochhammer(a,n) needs a > 0, n >= 0");
      return {log_pochhammer(a, m), 1};
    }
    if (n.name == "exp") {
      arity(1);
      return {eval(*n.args[0], k1, k2).to_double(), 1};
    }
    if (n.name == "log") {
      arity(1);
      LogVal v = eval(*n.args[0], k1, k2);
      if (v.sign <= 0) throw ParseError("log of a nonpositive value");
      return LogVal::from_double(v.lg);
    }
    throw ParseError("unknown function '" + n.name + "'");
  }
};

}  // namespace zrp::expr
