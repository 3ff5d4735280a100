#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "temprisk/error.hpp"

namespace temprisk {

enum class ExprKind { Constant, Component, Negate, Abs, Norm2, Add, Sub, Mul, Div, Min, Max };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind;
  double value = 0.0;  // Constant
  int index = 0;       // Component, 0-based
  std::vector<ExprPtr> args;
};

/// One instruction of the postfix form used for fast evaluation.
struct ExprInstr {
  ExprKind op;
  int arg = 0;  // component index, or operand count for Norm2
  double value = 0.0;
};

/**
 * Real-valued predicate function h: R^n -> R over signal components.
 *
 * Immutable. Built either by the parser or with the free helper functions
 * and arithmetic operators below. Evaluation runs a compiled postfix program.
 */
class PredicateExpr {
 public:
  explicit PredicateExpr(ExprPtr root);

  const ExprNode& root() const { return *root_; }
  const ExprPtr& node() const { return root_; }

  /// Highest 0-based component index referenced, or -1 for none.
  int max_component() const { return max_component_; }

  template <typename Scalar>
  Scalar eval(std::span<const Scalar> x) const;

  /// Canonical text; parse_predicate(str()) reproduces this expression.
  std::string str() const;

  bool operator==(const PredicateExpr& o) const;

 private:
  ExprPtr root_;
  std::vector<ExprInstr> program_;
  int max_component_ = -1;
  int stack_depth_ = 0;
};

PredicateExpr constant(double v);
/// Component reference with a 0-based index.
PredicateExpr component(int index);
PredicateExpr abs(const PredicateExpr& a);
PredicateExpr norm2(const std::vector<PredicateExpr>& args);
PredicateExpr min(const PredicateExpr& a, const PredicateExpr& b);
PredicateExpr max(const PredicateExpr& a, const PredicateExpr& b);
PredicateExpr operator-(const PredicateExpr& a);
PredicateExpr operator+(const PredicateExpr& a, const PredicateExpr& b);
PredicateExpr operator-(const PredicateExpr& a, const PredicateExpr& b);
PredicateExpr operator*(const PredicateExpr& a, const PredicateExpr& b);
PredicateExpr operator/(const PredicateExpr& a, const PredicateExpr& b);

/// Structural equality of expression trees.
bool same_expr(const ExprNode& a, const ExprNode& b);

template <typename Scalar>
Scalar PredicateExpr::eval(std::span<const Scalar> x) const {
  if (max_component_ >= static_cast<int>(x.size())) {
    throw ShapeError("predicate references x[" + std::to_string(max_component_ + 1) +
                     "] but the signal has " + std::to_string(x.size()) + " components");
  }
  constexpr int kInline = 32;
  std::array<Scalar, kInline> inline_stack;
  std::vector<Scalar> heap_stack;
  Scalar* stack = inline_stack.data();
  if (stack_depth_ > kInline) {
    heap_stack.resize(static_cast<std::size_t>(stack_depth_));
    stack = heap_stack.data();
  }
  int top = 0;
  using std::abs;
  using std::max;
  using std::min;
  using std::sqrt;
  for (const ExprInstr& in : program_) {
    switch (in.op) {
      case ExprKind::Constant: stack[top++] = Scalar(in.value); break;
      case ExprKind::Component: stack[top++] = x[static_cast<std::size_t>(in.arg)]; break;
      case ExprKind::Negate: stack[top - 1] = -stack[top - 1]; break;
      case ExprKind::Abs: stack[top - 1] = abs(stack[top - 1]); break;
      case ExprKind::Norm2: {
        Scalar acc(0);
        for (int k = 0; k < in.arg; ++k) {
          const Scalar v = stack[top - 1 - k];
          acc += v * v;
        }
        top -= in.arg;
        stack[top++] = sqrt(acc);
        break;
      }
      case ExprKind::Add: --top; stack[top - 1] = stack[top - 1] + stack[top]; break;
      case ExprKind::Sub: --top; stack[top - 1] = stack[top - 1] - stack[top]; break;
      case ExprKind::Mul: --top; stack[top - 1] = stack[top - 1] * stack[top]; break;
      case ExprKind::Div: --top; stack[top - 1] = stack[top - 1] / stack[top]; break;
      case ExprKind::Min: --top; stack[top - 1] = min(stack[top - 1], stack[top]); break;
      case ExprKind::Max: --top; stack[top - 1] = max(stack[top - 1], stack[top]); break;
    }
  }
  return stack[0];
}

}  // namespace temprisk
