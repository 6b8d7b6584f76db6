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

/**
 * @file expression.h
 * @brief Small arithmetic expression language for scenario files.
 *
 * Grammar: sums and products of numbers, named variables, `pi`, unary minus,
 * integer powers (`x^4`, `x^-2`), parentheses and the functions exp, log,
 * sin, cos, sqrt and relu (positive part).  Expressions evaluate on doubles
 * or on jets, so a parsed formula can back a SmoothMap.
 */

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dads/jet.h"
#include "dads/smooth_map.h"

namespace dads {

class ExpressionError : public std::runtime_error {
 public:
  ExpressionError(const std::string& message, int column)
      : std::runtime_error(message), column_(column) {}
  /// 1-based column of the offending character in the expression text.
  int column() const { return column_; }

 private:
  int column_;
};

class Expression {
 public:
  /// Parses `text`; identifiers must appear in `variables`.
  static Expression Parse(std::string_view text,
                          const std::vector<std::string>& variables = {});

  const std::string& text() const { return text_; }
  int n_vars() const { return n_vars_; }

  double Evaluate(std::span<const double> vars) const;
  Jet Evaluate(std::span<const Jet> vars, const Jet& like) const;

  struct Node {
    enum Kind { kConst, kVar, kNeg, kAdd, kSub, kMul, kDiv, kPow, kFunc };
    Kind kind;
    double value = 0.0;
    int index = 0;  // variable index, power or function id
    int lhs = -1;
    int rhs = -1;
  };

 private:
  friend class ExpressionParser;
  std::string text_;
  int n_vars_ = 0;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Splits on top-level commas (outside parentheses) and trims each piece.
std::vector<std::string> SplitTopLevel(std::string_view text, char sep = ',');

/// Evaluates a closed numeric expression such as "-log(10)" or "2*pi".
double EvaluateNumber(std::string_view text);

/// Evaluates a comma separated list of closed numeric expressions.
std::vector<double> EvaluateNumberList(std::string_view text);

/// SmoothMap whose outputs are the comma separated expressions in `text`.
SmoothMap ExpressionMap(std::string_view text,
                        const std::vector<std::string>& variables,
                        int max_order = 16, std::string name = "");

}  // namespace dads
