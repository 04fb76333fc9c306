#pragma once

// Real-valued expression language for weights, symbols and level sets.
//
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?
//   atom  := number | ident | ident '(' expr ')' | '(' expr ')'
//
// '^' is right-associative and binds tighter than unary minus, so
// 2^3^2 = 512 and -2^2 = -4. Variables: x, y, r, theta (in (-pi, pi]) and
// the constant pi. Functions: abs exp log sin cos sqrt re im chi_pos, where
// chi_pos(t) = 1 for t > 0 and 0 otherwise (ties go to 0). re and im are the
// identity and zero on the real line.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bergman/common.hpp"

namespace bergman::dsl {

class ParseError : public ParameterError {
 public:
  ParseError(const std::string& message, std::size_t offset);
  /// Byte offset into the source where parsing failed.
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

enum class NodeKind { Constant, Variable, Negate, Binary, Call };

struct Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;  ///< Constant
  std::string name;    ///< Variable or Call
  char op = 0;         ///< Binary: one of + - * / ^
  std::vector<std::shared_ptr<const Node>> args;
};

/// Immutable expression tree; cheap to copy.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  bool empty() const { return !root_; }

  /// Evaluates at z. Throws DomainError for |z| >= 1 and for domain
  /// violations, quoting the offending subexpression.
  double operator()(Complex z) const;

 private:
  std::shared_ptr<const Node> root_;
};

Expr parse(std::string_view src);

double eval(const Expr& e, Complex z);

/// Fully parenthesized normal form; parse(print(e)) == e.
std::string print(const Expr& e);

bool operator==(const Expr& a, const Expr& b);

}  // namespace bergman::dsl
