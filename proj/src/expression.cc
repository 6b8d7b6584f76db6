/******************************************************************************
 * Copyright 2026 The DADS Toolkit Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "dads/expression.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace dads {
namespace {

enum Func { kExp, kLog, kSin, kCos, kSqrt, kRelu };

constexpr const char* kFuncNames[] = {"exp", "log", "sin", "cos", "sqrt",
                                      "relu"};

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

template <typename T>
T ApplyFunc(int id, const T& a) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  switch (id) {
    case kExp:
      return exp(a);
    case kLog:
      return log(a);
    case kSin:
      return sin(a);
    case kCos:
      return cos(a);
    case kSqrt:
      return sqrt(a);
    default:
      return relu_plus(a);
  }
}

template <typename T, typename MakeConst>
T EvalNodes(const std::vector<Expression::Node>& nodes, int i,
            std::span<const T> vars, const MakeConst& constant) {
  const auto& n = nodes[i];
  switch (n.kind) {
    case Expression::Node::kConst:
      return constant(n.value);
    case Expression::Node::kVar:
      return vars[n.index];
    case Expression::Node::kNeg:
      return -EvalNodes(nodes, n.lhs, vars, constant);
    case Expression::Node::kAdd:
      return EvalNodes(nodes, n.lhs, vars, constant) +
             EvalNodes(nodes, n.rhs, vars, constant);
    case Expression::Node::kSub:
      return EvalNodes(nodes, n.lhs, vars, constant) -
             EvalNodes(nodes, n.rhs, vars, constant);
    case Expression::Node::kMul:
      return EvalNodes(nodes, n.lhs, vars, constant) *
             EvalNodes(nodes, n.rhs, vars, constant);
    case Expression::Node::kDiv:
      return EvalNodes(nodes, n.lhs, vars, constant) /
             EvalNodes(nodes, n.rhs, vars, constant);
    case Expression::Node::kPow:
      return pow_int(EvalNodes(nodes, n.lhs, vars, constant), n.index);
    case Expression::Node::kFunc:
      return ApplyFunc(n.index, EvalNodes(nodes, n.lhs, vars, constant));
  }
  throw std::logic_error("corrupt expression tree");
}

}  // namespace

// Recursive-descent parser:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' ['-'] integer)?
//   atom   := number | identifier | func '(' expr ')' | '(' expr ')'
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text,
                   const std::vector<std::string>& variables, Expression* out)
      : text_(text), vars_(variables), out_(out) {}

  void Run() {
    out_->root_ = ParseExpr();
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected character '" +
                                   std::string(1, text_[pos_]) + "'");
  }

 private:
  [[noreturn]] void Fail(const std::string& message) {
    throw ExpressionError(
        "expression \"" + std::string(text_) + "\", column " +
            std::to_string(pos_ + 1) + ": " + message,
        static_cast<int>(pos_ + 1));
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool Accept(char c) {
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int Add(Expression::Node node) {
    out_->nodes_.push_back(node);
    return static_cast<int>(out_->nodes_.size()) - 1;
  }

  int Binary(Expression::Node::Kind kind, int lhs, int rhs) {
    Expression::Node n{kind};
    n.lhs = lhs;
    n.rhs = rhs;
    return Add(n);
  }

  int ParseExpr() {
    int lhs = ParseTerm();
    for (;;) {
      if (Accept('+')) {
        lhs = Binary(Expression::Node::kAdd, lhs, ParseTerm());
      } else if (Accept('-')) {
        lhs = Binary(Expression::Node::kSub, lhs, ParseTerm());
      } else {
        return lhs;
      }
    }
  }

  int ParseTerm() {
    int lhs = ParseUnary();
    for (;;) {
      if (Accept('*')) {
        lhs = Binary(Expression::Node::kMul, lhs, ParseUnary());
      } else if (Accept('/')) {
        lhs = Binary(Expression::Node::kDiv, lhs, ParseUnary());
      } else {
        return lhs;
      }
    }
  }

  int ParseUnary() {
    if (Accept('-')) {
      Expression::Node n{Expression::Node::kNeg};
      n.lhs = ParseUnary();
      return Add(n);
    }
    if (Accept('+')) return ParseUnary();
    return ParsePower();
  }

  int ParsePower() {
    int base = ParseAtom();
    if (!Accept('^')) return base;
    SkipSpace();
    bool negative = false;
    if (Accept('-')) negative = true;
    bool paren = Accept('(');
    if (paren && Accept('-')) negative = !negative;
    SkipSpace();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) Fail("exponent must be an integer literal");
    int p = std::atoi(std::string(text_.substr(start, pos_ - start)).c_str());
    if (paren && !Accept(')')) Fail("expected ')' after exponent");
    Expression::Node n{Expression::Node::kPow};
    n.lhs = base;
    n.index = negative ? -p : p;
    return Add(n);
  }

  int ParseAtom() {
    SkipSpace();
    if (pos_ >= text_.size()) Fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      int inner = ParseExpr();
      if (!Accept(')')) Fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(text_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) Fail("malformed number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      Expression::Node n{Expression::Node::kConst};
      n.value = v;
      return Add(n);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name) {
          Expression::Node n{Expression::Node::kVar};
          n.index = static_cast<int>(i);
          return Add(n);
        }
      }
      if (name == "pi") {
        Expression::Node n{Expression::Node::kConst};
        n.value = std::numbers::pi;
        return Add(n);
      }
      for (int f = 0; f < 6; ++f) {
        if (name == kFuncNames[f]) {
          if (!Accept('(')) Fail("expected '(' after " + name);
          Expression::Node n{Expression::Node::kFunc};
          n.index = f;
          n.lhs = ParseExpr();
          if (!Accept(')')) Fail("expected ')' closing " + name);
          return Add(n);
        }
      }
      pos_ = start;
      Fail("unknown identifier '" + name + "'");
    }
    Fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  Expression* out_;
  std::size_t pos_ = 0;
};

Expression Expression::Parse(std::string_view text,
                             const std::vector<std::string>& variables) {
  Expression e;
  e.text_ = Trim(text);
  e.n_vars_ = static_cast<int>(variables.size());
  ExpressionParser parser(e.text_, variables, &e);
  parser.Run();
  return e;
}

double Expression::Evaluate(std::span<const double> vars) const {
  if (static_cast<int>(vars.size()) != n_vars_) {
    throw std::invalid_argument("expression \"" + text_ + "\": expected " +
                                std::to_string(n_vars_) + " variables");
  }
  return EvalNodes<double>(nodes_, root_, vars, [](double v) { return v; });
}

Jet Expression::Evaluate(std::span<const Jet> vars, const Jet& like) const {
  if (static_cast<int>(vars.size()) != n_vars_) {
    throw std::invalid_argument("expression \"" + text_ + "\": expected " +
                                std::to_string(n_vars_) + " variables");
  }
  return EvalNodes<Jet>(nodes_, root_, vars,
                        [&like](double v) { return ConstantLike(like, v); });
}

std::vector<std::string> SplitTopLevel(std::string_view text, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')') --depth;
    if (text[i] == sep && depth == 0) {
      parts.push_back(Trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.push_back(Trim(text.substr(start)));
  return parts;
}

double EvaluateNumber(std::string_view text) {
  return Expression::Parse(text).Evaluate(std::span<const double>{});
}

std::vector<double> EvaluateNumberList(std::string_view text) {
  std::vector<double> out;
  if (Trim(text).empty()) return out;
  for (const auto& piece : SplitTopLevel(text)) {
    out.push_back(EvaluateNumber(piece));
  }
  return out;
}

SmoothMap ExpressionMap(std::string_view text,
                        const std::vector<std::string>& variables,
                        int max_order, std::string name) {
  std::vector<Expression> parts;
  for (const auto& piece : SplitTopLevel(text)) {
    parts.push_back(Expression::Parse(piece, variables));
  }
  const int arity = std::max<int>(1, static_cast<int>(variables.size()));
  const int n_vars = static_cast<int>(variables.size());
  if (name.empty()) name = Trim(text);
  return SmoothMap(
      arity, static_cast<int>(parts.size()), max_order,
      [parts, n_vars](const JetVec& in) {
        JetVec out;
        out.reserve(parts.size());
        std::span<const Jet> vars(in.data(), n_vars);
        for (const auto& p : parts) out.push_back(p.Evaluate(vars, in[0]));
        return out;
      },
      std::move(name));
}

}  // namespace dads
