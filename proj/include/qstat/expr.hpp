#pragma once

// Arithmetic expressions over named chart coordinates.
//
// Grammar (loosest to tightest binding):
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := primary ('^' exponent)?          right associative
//   primary := number | name | name '(' sum ')' | '(' sum ')'
// Exponents must be constant (no coordinate references). Names resolve to a
// coordinate, a function (sin cos exp log sqrt) or a constant (pi e).

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "qstat/jet.hpp"

namespace qstat {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(std::string name, std::size_t offset)
      : ParseError("unknown identifier '" + name + "'", offset), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// Raised when an expression cannot be evaluated at a point (division by
// zero, log of a non-positive number, ...). Carries the offending node.
class EvalDomainError : public std::domain_error {
 public:
  EvalDomainError(const std::string& what, std::string node)
      : std::domain_error(what + " in '" + node + "'"), node_(std::move(node)) {}
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

enum class Func { sin, cos, exp, log, sqrt };
enum class BinaryOp { add, sub, mul, div };

namespace ast {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Literal {
  double value;
};
struct NamedConstant {
  std::string name;
  double value;
};
struct Variable {
  std::size_t index;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Power {
  NodePtr base;
  double exponent;
};
struct Call {
  Func func;
  NodePtr arg;
};

struct Node {
  std::variant<Literal, NamedConstant, Variable, Negate, Binary, Power, Call> data;
};

template <class T>
NodePtr make(T t) {
  return std::make_shared<const Node>(Node{std::move(t)});
}

inline bool is_integral(double x) {
  return std::isfinite(x) && x == std::round(x) && std::fabs(x) < 1e15;
}

inline const char* func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::exp: return "exp";
    case Func::log: return "log";
    case Func::sqrt: return "sqrt";
  }
  return "?";
}

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Fully parenthesised so that printing and re-parsing preserves the tree.
inline std::string print(const NodePtr& n, std::span<const std::string> coords) {
  return std::visit(
      [&](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Literal>) {
          const std::string s = format_number(d.value);
          return d.value < 0 ? "(" + s + ")" : s;
        } else if constexpr (std::is_same_v<T, NamedConstant>) {
          return d.name;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return coords[d.index];
        } else if constexpr (std::is_same_v<T, Negate>) {
          return "(-" + print(d.operand, coords) + ")";
        } else if constexpr (std::is_same_v<T, Binary>) {
          static constexpr const char* ops[] = {"+", "-", "*", "/"};
          return "(" + print(d.lhs, coords) + ops[static_cast<int>(d.op)] + print(d.rhs, coords) + ")";
        } else if constexpr (std::is_same_v<T, Power>) {
          return "(" + print(d.base, coords) + "^(" + format_number(d.exponent) + "))";
        } else {
          return std::string(func_name(d.func)) + "(" + print(d.arg, coords) + ")";
        }
      },
      n->data);
}

inline bool has_variables(const NodePtr& n) {
  return std::visit(
      [](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Variable>) return true;
        else if constexpr (std::is_same_v<T, Negate>) return has_variables(d.operand);
        else if constexpr (std::is_same_v<T, Binary>) return has_variables(d.lhs) || has_variables(d.rhs);
        else if constexpr (std::is_same_v<T, Power>) return has_variables(d.base);
        else if constexpr (std::is_same_v<T, Call>) return has_variables(d.arg);
        else return false;
      },
      n->data);
}

inline Jet eval(const NodePtr& n, std::span<const Jet> vars, std::span<const std::string> coords) {
  auto fail = [&](const char* what) -> EvalDomainError { return {what, print(n, coords)}; };
  return std::visit(
      [&](const auto& d) -> Jet {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return Jet(d.value);
        } else if constexpr (std::is_same_v<T, NamedConstant>) {
          return Jet(d.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return vars[d.index];
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -eval(d.operand, vars, coords);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const Jet a = eval(d.lhs, vars, coords);
          const Jet b = eval(d.rhs, vars, coords);
          switch (d.op) {
            case BinaryOp::add: return a + b;
            case BinaryOp::sub: return a - b;
            case BinaryOp::mul: return a * b;
            case BinaryOp::div:
              if (b.value() == 0.0) throw fail("division by zero");
              return a / b;
          }
          return a;
        } else if constexpr (std::is_same_v<T, Power>) {
          const Jet b = eval(d.base, vars, coords);
          if (is_integral(d.exponent)) {
            if (b.value() == 0.0 && d.exponent < 0) throw fail("zero raised to a negative power");
            return pow_int(b, static_cast<long>(d.exponent));
          }
          if (!(b.value() > 0.0)) throw fail("non-integer power of non-positive base");
          return pow_real(b, d.exponent);
        } else {
          const Jet a = eval(d.arg, vars, coords);
          switch (d.func) {
            case Func::sin: return sin(a);
            case Func::cos: return cos(a);
            case Func::exp: return exp(a);
            case Func::log:
              if (!(a.value() > 0.0)) throw fail("log of non-positive value");
              return log(a);
            case Func::sqrt:
              if (!(a.value() > 0.0)) throw fail("sqrt of non-positive value");
              return sqrt(a);
          }
          return a;
        }
      },
      n->data);
}

inline NodePtr substitute(const NodePtr& n, std::span<const std::optional<NodePtr>> images,
                          std::span<const std::string> coords) {
  return std::visit(
      [&](const auto& d) -> NodePtr {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Variable>) {
          if (!images[d.index]) {
            throw std::invalid_argument("substitute: no mapping for variable '" + coords[d.index] + "'");
          }
          return *images[d.index];
        } else if constexpr (std::is_same_v<T, Negate>) {
          return make(Negate{substitute(d.operand, images, coords)});
        } else if constexpr (std::is_same_v<T, Binary>) {
          return make(Binary{d.op, substitute(d.lhs, images, coords), substitute(d.rhs, images, coords)});
        } else if constexpr (std::is_same_v<T, Power>) {
          return make(Power{substitute(d.base, images, coords), d.exponent});
        } else if constexpr (std::is_same_v<T, Call>) {
          return make(Call{d.func, substitute(d.arg, images, coords)});
        } else {
          return n;
        }
      },
      n->data);
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords) : text_(text), coords_(coords) {}

  NodePtr parse() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    NodePtr n = sum();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return n;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept('+')) lhs = make(Binary{BinaryOp::add, lhs, product()});
      else if (accept('-')) lhs = make(Binary{BinaryOp::sub, lhs, product()});
      else return lhs;
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Binary{BinaryOp::mul, lhs, unary()});
      else if (accept('/')) lhs = make(Binary{BinaryOp::div, lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Negate{unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    skip_space();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t at = pos_;
    NodePtr exponent = unary();  // right associative through unary -> power
    if (has_variables(exponent)) throw ParseError("exponent must be constant", at);
    const double e = eval(exponent, {}, coords_).value();
    return make(Power{base, e});
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    const std::string rest(text_.substr(pos_));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
    pos_ += used;
    return make(Literal{v});
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] == name) return make(Variable{i});
    }
    static const std::map<std::string, Func> funcs = {{"sin", Func::sin}, {"cos", Func::cos},
                                                       {"exp", Func::exp}, {"log", Func::log},
                                                       {"sqrt", Func::sqrt}};
    if (auto it = funcs.find(name); it != funcs.end()) {
      expect('(');
      NodePtr arg = sum();
      expect(')');
      return make(Call{it->second, arg});
    }
    if (name == "pi") return make(NamedConstant{"pi", std::numbers::pi});
    if (name == "e") return make(NamedConstant{"e", std::numbers::e});
    throw UnknownIdentifier(name, start);
  }

  std::string_view text_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;
};

}  // namespace ast

// An immutable expression together with the coordinate list it is written in.
class Expr {
 public:
  Expr() : Expr(0.0, {}) {}
  Expr(double constant, std::vector<std::string> coords)
      : root_(ast::make(ast::Literal{constant})),
        coords_(std::make_shared<const std::vector<std::string>>(std::move(coords))) {}
  Expr(ast::NodePtr root, std::shared_ptr<const std::vector<std::string>> coords)
      : root_(std::move(root)), coords_(std::move(coords)) {}

  static Expr parse(std::string_view text, std::vector<std::string> coords) {
    if (coords.empty()) throw std::invalid_argument("parse: coordinate list is empty");
    std::unordered_set<std::string> seen;
    for (const auto& c : coords) {
      if (!seen.insert(c).second) throw std::invalid_argument("parse: duplicate coordinate '" + c + "'");
    }
    auto shared = std::make_shared<const std::vector<std::string>>(std::move(coords));
    ast::Parser p(text, *shared);
    return Expr(p.parse(), shared);
  }

  static Expr variable(std::size_t index, std::vector<std::string> coords) {
    if (index >= coords.size()) throw std::out_of_range("Expr::variable: index out of range");
    return Expr(ast::make(ast::Variable{index}),
                std::make_shared<const std::vector<std::string>>(std::move(coords)));
  }

  const ast::NodePtr& root() const { return root_; }
  const std::vector<std::string>& coords() const { return *coords_; }
  std::size_t arity() const { return coords_->size(); }

  std::string to_string() const { return ast::print(root_, *coords_); }

  // Value, gradient and Hessian at a point.
  Jet eval_jet2(std::span<const double> point) const {
    check_point(point);
    std::vector<Jet> vars;
    vars.reserve(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) vars.push_back(Jet::variable(point[i], point.size(), i));
    return eval_jets(vars);
  }

  // Evaluation with caller-supplied jets for the variables (chain rule).
  Jet eval_jets(std::span<const Jet> vars) const {
    if (vars.size() != coords_->size()) throw std::invalid_argument("Expr: wrong number of variable jets");
    Jet r = ast::eval(root_, vars, *coords_);
    return r;
  }

  double eval(std::span<const double> point) const {
    check_point(point);
    std::vector<Jet> vars(point.begin(), point.end());
    return ast::eval(root_, vars, *coords_).value();
  }

  // Replaces every variable by the mapped expression, all written over new_coords.
  Expr substitute(const std::map<std::string, Expr>& images, const std::vector<std::string>& new_coords) const {
    auto shared = std::make_shared<const std::vector<std::string>>(new_coords);
    std::vector<std::optional<ast::NodePtr>> mapped(coords_->size());
    for (std::size_t i = 0; i < coords_->size(); ++i) {
      auto it = images.find((*coords_)[i]);
      if (it == images.end()) continue;
      if (it->second.coords() != new_coords) {
        throw std::invalid_argument("substitute: image of '" + (*coords_)[i] +
                                    "' is not written over the new coordinates");
      }
      mapped[i] = it->second.root();
    }
    return Expr(ast::substitute(root_, mapped, *coords_), shared);
  }

  bool is_constant() const { return !ast::has_variables(root_); }

 private:
  void check_point(std::span<const double> point) const {
    if (point.size() != coords_->size()) {
      throw std::invalid_argument("Expr: point has " + std::to_string(point.size()) + " entries, expected " +
                                  std::to_string(coords_->size()));
    }
  }

  ast::NodePtr root_;
  std::shared_ptr<const std::vector<std::string>> coords_;
};

// Helpers for assembling expressions programmatically.
namespace exprs {

inline Expr binary(BinaryOp op, const Expr& a, const Expr& b) {
  if (a.coords() != b.coords()) throw std::invalid_argument("exprs: operands use different coordinates");
  return Expr(ast::make(ast::Binary{op, a.root(), b.root()}),
              std::make_shared<const std::vector<std::string>>(a.coords()));
}

inline Expr add(const Expr& a, const Expr& b) { return binary(BinaryOp::add, a, b); }
inline Expr mul(const Expr& a, const Expr& b) { return binary(BinaryOp::mul, a, b); }
inline Expr neg(const Expr& a) {
  return Expr(ast::make(ast::Negate{a.root()}), std::make_shared<const std::vector<std::string>>(a.coords()));
}

}  // namespace exprs

inline Expr parse(std::string_view text, std::vector<std::string> coords) {
  return Expr::parse(text, std::move(coords));
}

}  // namespace qstat
