#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "curved/core.hpp"

// Minimal arithmetic expressions in u and v: numbers, + - * / ^, parentheses,
// unary minus and the functions sin, cos, exp, log. '^' is right associative
// and binds tighter than unary minus, so -u^2 = -(u^2).

namespace curved::expr {

class Expression {
 public:
  double operator()(double u, double v) const {
    std::vector<double> stack;
    stack.reserve(code_.size());
    for (const Op& op : code_) {
      switch (op.kind) {
        case Kind::Number: stack.push_back(op.value); break;
        case Kind::U: stack.push_back(u); break;
        case Kind::V: stack.push_back(v); break;
        case Kind::Neg: stack.back() = -stack.back(); break;
        case Kind::Sin: stack.back() = std::sin(stack.back()); break;
        case Kind::Cos: stack.back() = std::cos(stack.back()); break;
        case Kind::Exp: stack.back() = std::exp(stack.back()); break;
        case Kind::Log: stack.back() = std::log(stack.back()); break;
        default: {
          const double b = stack.back();
          stack.pop_back();
          double& a = stack.back();
          if (op.kind == Kind::Add) a += b;
          else if (op.kind == Kind::Sub) a -= b;
          else if (op.kind == Kind::Mul) a *= b;
          else if (op.kind == Kind::Div) a /= b;
          else a = std::pow(a, b);
        }
      }
    }
    return stack.back();
  }

  const std::string& source() const { return source_; }

  static Expression parse(const std::string& text) {
    Expression e;
    e.source_ = text;
    Parser p{text, 0, e.code_};
    p.expression();
    p.skip();
    if (p.pos != text.size()) p.fail("unexpected character");
    return e;
  }

 private:
  enum class Kind { Number, U, V, Neg, Sin, Cos, Exp, Log, Add, Sub, Mul, Div, Pow };
  struct Op {
    Kind kind;
    double value = 0;
  };

  struct Parser {
    const std::string& s;
    std::size_t pos;
    std::vector<Op>& out;

    [[noreturn]] void fail(const char* what) const {
      throw DomainError(std::string("expression: ") + what + " at position " + std::to_string(pos) + " in \"" + s +
                        "\"");
    }
    void skip() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool accept(char c) {
      skip();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    void expression() {
      term();
      for (;;) {
        if (accept('+')) {
          term();
          out.push_back({Kind::Add});
        } else if (accept('-')) {
          term();
          out.push_back({Kind::Sub});
        } else {
          return;
        }
      }
    }
    void term() {
      unary();
      for (;;) {
        if (accept('*')) {
          unary();
          out.push_back({Kind::Mul});
        } else if (accept('/')) {
          unary();
          out.push_back({Kind::Div});
        } else {
          return;
        }
      }
    }
    void unary() {
      if (accept('-')) {
        unary();
        out.push_back({Kind::Neg});
      } else if (accept('+')) {
        unary();
      } else {
        power();
      }
    }
    void power() {
      primary();
      if (accept('^')) {
        unary();  // right associative; allows 2^-1
        out.push_back({Kind::Pow});
      }
    }
    void primary() {
      skip();
      if (pos >= s.size()) fail("unexpected end");
      if (accept('(')) {
        expression();
        if (!accept(')')) fail("missing ')'");
        return;
      }
      const char c = s[pos];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        const char* begin = s.c_str() + pos;
        char* end = nullptr;
        const double value = std::strtod(begin, &end);
        if (end == begin) fail("bad number");
        pos += static_cast<std::size_t>(end - begin);
        out.push_back({Kind::Number, value});
        return;
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t end = pos;
        while (end < s.size() && std::isalpha(static_cast<unsigned char>(s[end]))) ++end;
        const std::string name = s.substr(pos, end - pos);
        pos = end;
        if (name == "u") {
          out.push_back({Kind::U});
          return;
        }
        if (name == "v") {
          out.push_back({Kind::V});
          return;
        }
        Kind k;
        if (name == "sin") k = Kind::Sin;
        else if (name == "cos") k = Kind::Cos;
        else if (name == "exp") k = Kind::Exp;
        else if (name == "log") k = Kind::Log;
        else fail("unknown identifier");
        if (!accept('(')) fail("function needs '('");
        expression();
        if (!accept(')')) fail("missing ')'");
        out.push_back({k});
        return;
      }
      fail("unexpected character");
    }
  };

  std::string source_;
  std::vector<Op> code_;
};

}  // namespace curved::expr
