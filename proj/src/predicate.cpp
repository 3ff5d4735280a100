#include "temprisk/predicate.hpp"

#include <algorithm>
#include <charconv>

namespace temprisk {

namespace {

ExprPtr make(ExprKind kind, std::vector<ExprPtr> args) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

// Returns the stack height after emitting node; tracks the peak in depth.
int compile(const ExprNode& n, std::vector<ExprInstr>& out, int height, int& depth, int& max_comp) {
  switch (n.kind) {
    case ExprKind::Constant:
      out.push_back({n.kind, 0, n.value});
      ++height;
      break;
    case ExprKind::Component:
      out.push_back({n.kind, n.index, 0.0});
      max_comp = std::max(max_comp, n.index);
      ++height;
      break;
    default: {
      int h = height;
      for (const auto& a : n.args) h = compile(*a, out, h, depth, max_comp);
      out.push_back({n.kind, static_cast<int>(n.args.size()), 0.0});
      height = h - static_cast<int>(n.args.size()) + 1;
      break;
    }
  }
  depth = std::max(depth, height);
  return height;
}

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Negate: return 3;
    case ExprKind::Constant: return n.value < 0 ? 3 : 4;
    default: return 4;
  }
}

std::string number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void print(const ExprNode& n, std::string& out);

void print_wrapped(const ExprNode& n, bool parens, std::string& out) {
  if (parens) out += '(';
  print(n, out);
  if (parens) out += ')';
}

void print_call(const char* name, const ExprNode& n, std::string& out) {
  out += name;
  out += '(';
  for (std::size_t i = 0; i < n.args.size(); ++i) {
    if (i) out += ", ";
    print(*n.args[i], out);
  }
  out += ')';
}

void print(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case ExprKind::Constant: out += number(n.value); break;
    case ExprKind::Component: out += "x[" + std::to_string(n.index + 1) + "]"; break;
    case ExprKind::Negate:
      // "-2" reads back as a literal, so a negated literal keeps its parens.
      out += '-';
      print_wrapped(*n.args[0], precedence(*n.args[0]) < 3 || n.args[0]->kind == ExprKind::Constant, out);
      break;
    case ExprKind::Abs: print_call("abs", n, out); break;
    case ExprKind::Norm2: print_call("norm2", n, out); break;
    case ExprKind::Min: print_call("min", n, out); break;
    case ExprKind::Max: print_call("max", n, out); break;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
      static constexpr const char* ops[] = {" + ", " - ", " * ", " / "};
      const int p = precedence(n);
      print_wrapped(*n.args[0], precedence(*n.args[0]) < p, out);
      out += ops[static_cast<int>(n.kind) - static_cast<int>(ExprKind::Add)];
      print_wrapped(*n.args[1], precedence(*n.args[1]) <= p, out);
      break;
    }
  }
}

}  // namespace

PredicateExpr::PredicateExpr(ExprPtr root) : root_(std::move(root)) {
  if (!root_) throw ValidationError("empty predicate expression");
  compile(*root_, program_, 0, stack_depth_, max_component_);
}

std::string PredicateExpr::str() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool same_expr(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  if (a.kind == ExprKind::Constant && a.value != b.value) return false;
  if (a.kind == ExprKind::Component && a.index != b.index) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!same_expr(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

bool PredicateExpr::operator==(const PredicateExpr& o) const { return same_expr(*root_, *o.root_); }

PredicateExpr constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Constant;
  n->value = v;
  return PredicateExpr(n);
}

PredicateExpr component(int index) {
  if (index < 0) throw ValidationError("component index must be non-negative");
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Component;
  n->index = index;
  return PredicateExpr(n);
}

PredicateExpr abs(const PredicateExpr& a) { return PredicateExpr(make(ExprKind::Abs, {a.node()})); }

PredicateExpr norm2(const std::vector<PredicateExpr>& args) {
  if (args.empty()) throw ValidationError("norm2 needs at least one argument");
  std::vector<ExprPtr> nodes;
  for (const auto& a : args) nodes.push_back(a.node());
  return PredicateExpr(make(ExprKind::Norm2, std::move(nodes)));
}

PredicateExpr min(const PredicateExpr& a, const PredicateExpr& b) {
  return PredicateExpr(make(ExprKind::Min, {a.node(), b.node()}));
}
PredicateExpr max(const PredicateExpr& a, const PredicateExpr& b) {
  return PredicateExpr(make(ExprKind::Max, {a.node(), b.node()}));
}
PredicateExpr operator-(const PredicateExpr& a) {
  return PredicateExpr(make(ExprKind::Negate, {a.node()}));
}
PredicateExpr operator+(const PredicateExpr& a, const PredicateExpr& b) {
  return PredicateExpr(make(ExprKind::Add, {a.node(), b.node()}));
}
PredicateExpr operator-(const PredicateExpr& a, const PredicateExpr& b) {
  return PredicateExpr(make(ExprKind::Sub, {a.node(), b.node()}));
}
PredicateExpr operator*(const PredicateExpr& a, const PredicateExpr& b) {
  return PredicateExpr(make(ExprKind::Mul, {a.node(), b.node()}));
}
PredicateExpr operator/(const PredicateExpr& a, const PredicateExpr& b) {
  return PredicateExpr(make(ExprKind::Div, {a.node(), b.node()}));
}

}  // namespace temprisk
