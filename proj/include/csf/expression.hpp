#pragma once

#include <map>
#include <memory>
#include <string>

namespace csf {

/// Arithmetic expression in named variables, e.g. "0.2*sin(2*pi*z)".
/// Supports + - * / ^, unary minus, parentheses, the constants pi and e, and
/// sin cos tan exp log sqrt abs sinh cosh tanh.
class Expression {
 public:
  Expression() = default;
  explicit Expression(const std::string& text);

  double operator()(const std::map<std::string, double>& vars) const;
  /// Convenience for expressions in z (L also bound).
  double at(double z, double length) const;
  /// Central-difference derivative in z with Richardson extrapolation.
  double derivative_at(double z, double length) const;

  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace csf
