#include "bergman/symbol_dsl.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

namespace bergman::dsl {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : ParameterError("syntax error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

namespace {

using NodePtr = std::shared_ptr<const Node>;

const std::set<std::string, std::less<>> kVariables{"x", "y", "r", "theta", "pi"};
const std::set<std::string, std::less<>> kFunctions{"abs", "exp", "log", "sin", "cos",
                                                     "sqrt", "re", "im", "chi_pos"};

NodePtr make_binary(char op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Binary;
  n->op = op;
  n->args = {std::move(a), std::move(b)};
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    skip_space();
    if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr left = term();
    for (;;) {
      if (accept('+')) {
        left = make_binary('+', left, term());
      } else if (accept('-')) {
        left = make_binary('-', left, term());
      } else {
        return left;
      }
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    for (;;) {
      if (accept('*')) {
        left = make_binary('*', left, unary());
      } else if (accept('/')) {
        left = make_binary('/', left, unary());
      } else {
        return left;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Negate;
      n->args = {unary()};
      return n;
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make_binary('^', base, unary());
    return base;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        digits();
      } else {
        pos_ = save;  // 'e' belongs to whatever follows
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    if (text == ".") {
      pos_ = start;
      fail("malformed number");
    }
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->value = std::strtod(text.c_str(), nullptr);
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(src_.substr(start, pos_ - start));
    auto n = std::make_shared<Node>();
    n->name = name;
    if (kFunctions.count(name)) {
      if (!accept('(')) fail("expected '(' after function " + name);
      n->kind = NodeKind::Call;
      n->args = {expr()};
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (kVariables.count(name)) {
      n->kind = NodeKind::Variable;
      return n;
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Constant:
      out += format_number(n.value);
      return;
    case NodeKind::Variable:
      out += n.name;
      return;
    case NodeKind::Negate:
      out += "(-";
      print_node(*n.args[0], out);
      out += ')';
      return;
    case NodeKind::Binary:
      out += '(';
      print_node(*n.args[0], out);
      out += ' ';
      out += n.op;
      out += ' ';
      print_node(*n.args[1], out);
      out += ')';
      return;
    case NodeKind::Call:
      out += n.name;
      out += '(';
      print_node(*n.args[0], out);
      out += ')';
      return;
  }
}

struct Point {
  double x, y, r, theta;
};

[[noreturn]] void domain_fail(const Node& n, const std::string& why) {
  std::string text;
  print_node(n, text);
  throw DomainError("dsl: " + why + " in " + text);
}

double eval_node(const Node& n, const Point& p) {
  switch (n.kind) {
    case NodeKind::Constant:
      return n.value;
    case NodeKind::Variable:
      if (n.name == "x") return p.x;
      if (n.name == "y") return p.y;
      if (n.name == "r") return p.r;
      if (n.name == "theta") return p.theta;
      return kPi;
    case NodeKind::Negate:
      return -eval_node(*n.args[0], p);
    case NodeKind::Binary: {
      const double a = eval_node(*n.args[0], p);
      const double b = eval_node(*n.args[1], p);
      double v = 0.0;
      switch (n.op) {
        case '+': v = a + b; break;
        case '-': v = a - b; break;
        case '*': v = a * b; break;
        case '/':
          if (b == 0.0) domain_fail(n, "division by zero");
          v = a / b;
          break;
        default:
          if (a == 0.0 && b < 0.0) domain_fail(n, "zero to a negative power");
          v = std::pow(a, b);
          if (std::isnan(v)) domain_fail(n, "negative base with non-integer exponent");
      }
      if (!std::isfinite(v)) domain_fail(n, "non-finite result");
      return v;
    }
    case NodeKind::Call: {
      const double a = eval_node(*n.args[0], p);
      const std::string& f = n.name;
      double v = 0.0;
      if (f == "abs") {
        v = std::abs(a);
      } else if (f == "exp") {
        v = std::exp(a);
      } else if (f == "log") {
        if (!(a > 0.0)) domain_fail(n, "log of a nonpositive value");
        v = std::log(a);
      } else if (f == "sin") {
        v = std::sin(a);
      } else if (f == "cos") {
        v = std::cos(a);
      } else if (f == "sqrt") {
        if (a < 0.0) domain_fail(n, "sqrt of a negative value");
        v = std::sqrt(a);
      } else if (f == "re") {
        v = a;
      } else if (f == "im") {
        v = 0.0;
      } else {
        v = a > 0.0 ? 1.0 : 0.0;
      }
      if (!std::isfinite(v)) domain_fail(n, "non-finite result");
      return v;
    }
  }
  return 0.0;
}

bool equal_nodes(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case NodeKind::Constant:
      if (a.value != b.value) return false;
      break;
    case NodeKind::Variable:
    case NodeKind::Call:
      if (a.name != b.name) return false;
      break;
    case NodeKind::Binary:
      if (a.op != b.op) return false;
      break;
    case NodeKind::Negate:
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!equal_nodes(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

}  // namespace

Expr parse(std::string_view src) {
  Parser p(src);
  return Expr(p.parse_all());
}

double Expr::operator()(Complex z) const { return eval(*this, z); }

double eval(const Expr& e, Complex z) {
  if (e.empty()) throw ParameterError("dsl: empty expression");
  require_in_disk(z, "dsl eval");
  double theta = std::arg(z);
  if (theta <= -kPi) theta = kPi;
  return eval_node(e.root(), Point{z.real(), z.imag(), std::abs(z), theta});
}

std::string print(const Expr& e) {
  std::string out;
  if (!e.empty()) print_node(e.root(), out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  return equal_nodes(a.root(), b.root());
}

}  // namespace bergman::dsl
