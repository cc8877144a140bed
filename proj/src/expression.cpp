#include "sdeproj/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "sdeproj/errors.hpp"

namespace sdeproj {

namespace {

struct Node {
  enum class Op {
    constant, variable, add, sub, mul, div, pow, neg,
    sin, cos, tan, exp, log, sqrt, abs, tanh, sinh, cosh, atan,
  };
  Op op;
  double value = 0.0;
  std::unique_ptr<Node> left, right;

  double eval(double x) const {
    switch (op) {
      case Op::constant: return value;
      case Op::variable: return x;
      case Op::add: return left->eval(x) + right->eval(x);
      case Op::sub: return left->eval(x) - right->eval(x);
      case Op::mul: return left->eval(x) * right->eval(x);
      case Op::div: return left->eval(x) / right->eval(x);
      case Op::pow: return std::pow(left->eval(x), right->eval(x));
      case Op::neg: return -left->eval(x);
      case Op::sin: return std::sin(left->eval(x));
      case Op::cos: return std::cos(left->eval(x));
      case Op::tan: return std::tan(left->eval(x));
      case Op::exp: return std::exp(left->eval(x));
      case Op::log: return std::log(left->eval(x));
      case Op::sqrt: return std::sqrt(left->eval(x));
      case Op::abs: return std::abs(left->eval(x));
      case Op::tanh: return std::tanh(left->eval(x));
      case Op::sinh: return std::sinh(left->eval(x));
      case Op::cosh: return std::cosh(left->eval(x));
      case Op::atan: return std::atan(left->eval(x));
    }
    return 0.0;
  }
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make(Node::Op op, NodePtr left = nullptr, NodePtr right = nullptr) {
  auto node = std::make_unique<Node>();
  node->op = op;
  node->left = std::move(left);
  node->right = std::move(right);
  return node;
}

NodePtr make_const(double v) {
  auto node = make(Node::Op::constant);
  node->value = v;
  return node;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    auto node = expr();
    skip_ws();
    require(pos_ >= text_.size(), ErrorCode::config,
            "unexpected trailing input at position " + std::to_string(pos_) +
                " in expression '" + text_ + "'");
    return node;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void error_here(const std::string& what) {
    fail(ErrorCode::config, what + " at position " + std::to_string(pos_) +
                                " in expression '" + text_ + "'");
  }

  NodePtr expr() {
    auto node = term();
    for (;;) {
      if (consume('+')) {
        node = make(Node::Op::add, std::move(node), term());
      } else if (consume('-')) {
        node = make(Node::Op::sub, std::move(node), term());
      } else {
        return node;
      }
    }
  }

  NodePtr term() {
    auto node = factor();
    for (;;) {
      if (consume('*')) {
        node = make(Node::Op::mul, std::move(node), factor());
      } else if (consume('/')) {
        node = make(Node::Op::div, std::move(node), factor());
      } else {
        return node;
      }
    }
  }

  NodePtr factor() {
    auto base = unary();
    if (consume('^')) {
      // right-associative
      return make(Node::Op::pow, std::move(base), factor());
    }
    return base;
  }

  NodePtr unary() {
    if (consume('-')) return make(Node::Op::neg, unary());
    if (consume('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) error_here("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) error_here("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make_const(v);
    }
    if (c == '(') {
      ++pos_;
      auto node = expr();
      if (!consume(')')) error_here("missing ')'");
      return node;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      const std::string word = text_.substr(start, pos_ - start);
      if (word == "x") return make(Node::Op::variable);
      if (word == "pi") return make_const(std::numbers::pi);
      if (word == "e") return make_const(std::numbers::e);
      static const std::pair<const char*, Node::Op> functions[] = {
          {"sin", Node::Op::sin},   {"cos", Node::Op::cos},
          {"tan", Node::Op::tan},   {"exp", Node::Op::exp},
          {"log", Node::Op::log},   {"sqrt", Node::Op::sqrt},
          {"abs", Node::Op::abs},   {"tanh", Node::Op::tanh},
          {"sinh", Node::Op::sinh}, {"cosh", Node::Op::cosh},
          {"atan", Node::Op::atan},
      };
      for (const auto& [name, op] : functions) {
        if (word == name) {
          if (!consume('(')) error_here("expected '(' after function name");
          auto arg = expr();
          if (!consume(')')) error_here("missing ')'");
          return make(op, std::move(arg));
        }
      }
      pos_ = start;
      error_here("unknown identifier '" + word + "'");
    }
    error_here(std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::function<double(double)> compile_expression(const std::string& text) {
  Parser parser(text);
  std::shared_ptr<Node> root{parser.parse().release()};
  return [root](double x) { return root->eval(x); };
}

}  // namespace sdeproj
