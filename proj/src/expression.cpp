#include "csf/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "csf/errors.hpp"

namespace csf {

struct Expression::Node {
  enum class Kind { Number, Variable, Unary, Binary, Call } kind = Kind::Number;
  double value = 0.0;
  std::string name;
  char op = 0;
  std::function<double(double)> fn;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(const std::map<std::string, double>& vars) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::Variable: {
        auto it = vars.find(name);
        if (it == vars.end()) throw ConfigError("expression: unbound variable '" + name + "'");
        return it->second;
      }
      case Kind::Unary: return -args[0]->eval(vars);
      case Kind::Call: return fn(args[0]->eval(vars));
      case Kind::Binary: {
        const double a = args[0]->eval(vars), b = args[1]->eval(vars);
        switch (op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          case '/': return a / b;
          case '^': return std::pow(a, b);
        }
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->args = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+'))
        lhs = binary('+', lhs, term());
      else if (eat('-'))
        lhs = binary('-', lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*'))
        lhs = binary('*', lhs, unary());
      else if (eat('/'))
        lhs = binary('/', lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (eat('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Unary;
      n->args = {unary()};
      return n;
    }
    if (eat('+')) return unary();
    return power();
  }

  // Right associative; binds tighter than unary minus on its left operand.
  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return binary('^', base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (eat('(')) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Call;
        n->name = id;
        n->fn = function(id);
        n->args = {expr()};
        if (!eat(')')) fail("expected ')'");
        return n;
      }
      if (is_function(id)) fail("function '" + id + "' needs an argument");
      auto n = std::make_shared<Node>();
      if (id == "pi") {
        n->value = std::numbers::pi;
      } else if (id == "e") {
        n->value = std::numbers::e;
      } else {
        n->kind = Node::Kind::Variable;
        n->name = id;
      }
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  using Fn = double (*)(double);

  static const std::map<std::string, Fn>& functions() {
    static const std::map<std::string, Fn> table = {
        {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
        {"tan", [](double x) { return std::tan(x); }},   {"exp", [](double x) { return std::exp(x); }},
        {"log", [](double x) { return std::log(x); }},   {"sqrt", [](double x) { return std::sqrt(x); }},
        {"abs", [](double x) { return std::fabs(x); }},  {"sinh", [](double x) { return std::sinh(x); }},
        {"cosh", [](double x) { return std::cosh(x); }}, {"tanh", [](double x) { return std::tanh(x); }},
    };
    return table;
  }

  static bool is_function(const std::string& id) { return functions().count(id) > 0; }

  std::function<double(double)> function(const std::string& id) const {
    auto it = functions().find(id);
    if (it == functions().end()) fail("unknown function '" + id + "'");
    return it->second;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text).parse()) {}

double Expression::operator()(const std::map<std::string, double>& vars) const {
  if (!root_) throw ConfigError("empty expression");
  return root_->eval(vars);
}

double Expression::at(double z, double length) const { return (*this)({{"z", z}, {"L", length}}); }

double Expression::derivative_at(double z, double length) const {
  const double h = 1e-3 * length;
  auto d = [&](double step) { return (at(z + step, length) - at(z - step, length)) / (2.0 * step); };
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

}  // namespace csf
