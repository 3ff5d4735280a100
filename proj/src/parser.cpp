#include "temprisk/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace temprisk {

namespace {

enum class Tok {
  Number,
  Ident,
  LBracket,
  RBracket,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Plus,
  Minus,
  Star,
  Slash,
  Amp,
  Pipe,
  Bang,
  Ge,
  Le,
  Gt,
  Lt,
  Colon,
  Equals,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

std::vector<Token> lex(std::string_view src, std::size_t first_line = 1) {
  std::vector<Token> out;
  std::size_t line = first_line;
  std::size_t col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, std::string(src.substr(i, len)), 0.0, line, col});
    i += len;
    col += len;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      double v = 0.0;
      auto res = std::from_chars(src.data() + i, src.data() + j, v);
      if (res.ec != std::errc() || res.ptr != src.data() + j) {
        throw SyntaxError("malformed number '" + std::string(src.substr(i, j - i)) + "'", line, col);
      }
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), v, line, col});
      col += j - i;
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      push(Tok::Ident, j - i);
      continue;
    }
    const char n = i + 1 < src.size() ? src[i + 1] : '\0';
    switch (c) {
      case '[': push(Tok::LBracket, 1); break;
      case ']': push(Tok::RBracket, 1); break;
      case '(': push(Tok::LParen, 1); break;
      case ')': push(Tok::RParen, 1); break;
      case '{': push(Tok::LBrace, 1); break;
      case '}': push(Tok::RBrace, 1); break;
      case ',': push(Tok::Comma, 1); break;
      case '+': push(Tok::Plus, 1); break;
      case '-': push(Tok::Minus, 1); break;
      case '*': push(Tok::Star, 1); break;
      case '/': push(Tok::Slash, 1); break;
      case '&': push(Tok::Amp, 1); break;
      case '|': push(Tok::Pipe, 1); break;
      case '!': push(Tok::Bang, 1); break;
      case ':': push(Tok::Colon, 1); break;
      case '=': push(Tok::Equals, 1); break;
      case '>': n == '=' ? push(Tok::Ge, 2) : push(Tok::Gt, 1); break;
      case '<': n == '=' ? push(Tok::Le, 2) : push(Tok::Lt, 1); break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
    }
  }
  out.push_back({Tok::End, "", 0.0, line, col});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, double dt, const PredicateTable* names,
         std::vector<IntervalConversion>* conversions)
      : toks_(std::move(toks)), dt_(dt), names_(names), conversions_(conversions) {}

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(std::string_view s) const { return at(Tok::Ident) && peek().text == s; }

  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, peek().line, peek().column);
  }

  const Token& expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what + ", found " + describe(peek()));
    return next();
  }

  void expect_end() {
    if (!at(Tok::End)) fail("unexpected " + describe(peek()));
  }

  // ---- predicate expressions ----

  PredicateExpr expr() {
    PredicateExpr lhs = term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      const bool plus = next().kind == Tok::Plus;
      PredicateExpr rhs = term();
      lhs = plus ? lhs + rhs : lhs - rhs;
    }
    return lhs;
  }

  PredicateExpr term() {
    PredicateExpr lhs = unary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      const bool mul = next().kind == Tok::Star;
      PredicateExpr rhs = unary();
      lhs = mul ? lhs * rhs : lhs / rhs;
    }
    return lhs;
  }

  PredicateExpr unary() {
    if (at(Tok::Minus)) {
      next();
      if (at(Tok::Number)) return constant(-next().number);
      return -unary();
    }
    return primary();
  }

  std::vector<PredicateExpr> call_args() {
    expect(Tok::LParen, "'('");
    std::vector<PredicateExpr> args{expr()};
    while (at(Tok::Comma)) {
      next();
      args.push_back(expr());
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  PredicateExpr primary() {
    if (at(Tok::Number)) return constant(next().number);
    if (at(Tok::LParen)) {
      next();
      PredicateExpr e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (!at(Tok::Ident)) fail("expected an expression, found " + describe(peek()));
    const Token id = peek();
    if (id.text == "x") {
      next();
      expect(Tok::LBracket, "'['");
      const Token& num = expect(Tok::Number, "component index");
      if (num.number < 1 || num.number != std::floor(num.number) || num.number > 1e6) {
        throw SyntaxError("component index must be a positive integer", num.line, num.column);
      }
      expect(Tok::RBracket, "']'");
      return component(static_cast<int>(num.number) - 1);
    }
    auto arity = [&](std::size_t got, std::size_t want) {
      if (got != want) {
        throw SyntaxError(id.text + " takes " + std::to_string(want) + " argument(s)", id.line,
                          id.column);
      }
    };
    if (id.text == "abs") {
      next();
      auto a = call_args();
      arity(a.size(), 1);
      return temprisk::abs(a[0]);
    }
    if (id.text == "norm2") {
      next();
      return norm2(call_args());
    }
    if (id.text == "min" || id.text == "max") {
      next();
      auto a = call_args();
      arity(a.size(), 2);
      return id.text == "min" ? temprisk::min(a[0], a[1]) : temprisk::max(a[0], a[1]);
    }
    throw SyntaxError("unknown identifier '" + id.text + "'", id.line, id.column);
  }

  // ---- formulas ----

  StlFormula formula() {
    StlFormula lhs = conjunction();
    while (at(Tok::Pipe)) {
      next();
      lhs = stl::disj(lhs, conjunction());
    }
    return lhs;
  }

  StlFormula conjunction() {
    StlFormula lhs = binary_temporal();
    while (at(Tok::Amp)) {
      next();
      lhs = stl::conj(lhs, binary_temporal());
    }
    return lhs;
  }

  StlFormula binary_temporal() {
    StlFormula lhs = unary_formula();
    if (at_ident("U") || at_ident("S")) {
      const bool future = next().text == "U";
      const StepInterval i = interval();
      StlFormula rhs = unary_formula();
      return future ? stl::until(lhs, i, rhs) : stl::since(lhs, i, rhs);
    }
    return lhs;
  }

  StlFormula unary_formula() {
    if (at(Tok::Bang)) {
      next();
      return stl::negate(unary_formula());
    }
    if (at_ident("F") || at_ident("G") || at_ident("P") || at_ident("H")) {
      const std::string op = next().text;
      const StepInterval i = interval();
      StlFormula a = unary_formula();
      if (op == "F") return stl::eventually(i, a);
      if (op == "G") return stl::always(i, a);
      if (op == "P") return stl::once(i, a);
      return stl::historically(i, a);
    }
    return atom();
  }

  StlFormula atom() {
    if (at(Tok::LParen)) {
      next();
      StlFormula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at_ident("TRUE")) {
      next();
      return stl::top();
    }
    if (at_ident("pred")) {
      next();
      expect(Tok::LBrace, "'{'");
      PredicateExpr lhs = expr();
      if (at(Tok::Ge) || at(Tok::Gt) || at(Tok::Le) || at(Tok::Lt)) {
        const bool ge = at(Tok::Ge) || at(Tok::Gt);
        next();
        PredicateExpr rhs = expr();
        const bool zero = rhs.root().kind == ExprKind::Constant && rhs.root().value == 0.0;
        if (ge) {
          lhs = zero ? lhs : lhs - rhs;
        } else {
          lhs = rhs - lhs;
        }
      }
      expect(Tok::RBrace, "'}'");
      return stl::pred(lhs);
    }
    if (at(Tok::Ident)) {
      const Token id = next();
      if (names_) {
        auto it = names_->find(id.text);
        if (it != names_->end()) return stl::pred(it->second, id.text);
      }
      throw SyntaxError("unknown identifier '" + id.text + "'", id.line, id.column);
    }
    fail("expected a formula, found " + describe(peek()));
  }

  double signed_number() {
    bool neg = false;
    if (at(Tok::Minus)) {
      next();
      neg = true;
    }
    const double v = expect(Tok::Number, "number").number;
    return neg ? -v : v;
  }

  StepInterval interval() {
    const Token open = expect(Tok::LBracket, "'['");
    const double a = signed_number();
    expect(Tok::Comma, "','");
    const double b = signed_number();
    expect(Tok::RBracket, "']'");
    if (a < 0 || b < 0) {
      throw ValidationError("interval [" + fmt(a) + "," + fmt(b) + "] at " +
                            std::to_string(open.line) + ":" + std::to_string(open.column) +
                            " has a negative bound");
    }
    if (b < a) {
      throw ValidationError("interval [" + fmt(a) + "," + fmt(b) + "] at " +
                            std::to_string(open.line) + ":" + std::to_string(open.column) +
                            " is reversed");
    }
    const StepInterval steps{std::llround(a / dt_), std::llround(b / dt_)};
    if (conversions_) conversions_->push_back({a, b, steps});
    return steps;
  }

  static std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  }

  // ---- constraint files ----

  ConstraintSpec constraint_file() {
    std::vector<ConstraintPiece> pieces;
    double def = 1.0;
    bool have_default = false;
    while (!at(Tok::End)) {
      if (at_ident("on")) {
        next();
        expect(Tok::LBracket, "'['");
        const Step lo = integer();
        expect(Tok::Comma, "','");
        const Step hi = integer();
        expect(Tok::RBracket, "']'");
        expect(Tok::Colon, "':'");
        if (hi < lo) throw ValidationError("constraint window [" + std::to_string(lo) + "," +
                                           std::to_string(hi) + "] is reversed");
        pieces.push_back({{lo, hi}, false, line_expr()});
      } else if (at_ident("always")) {
        next();
        expect(Tok::Colon, "':'");
        pieces.push_back({{0, 0}, true, line_expr()});
      } else if (at_ident("default")) {
        if (have_default) fail("duplicate default");
        next();
        expect(Tok::Colon, "':'");
        def = signed_number();
        have_default = true;
      } else {
        fail("expected 'on', 'always' or 'default', found " + describe(peek()));
      }
    }
    return ConstraintSpec(std::move(pieces), def);
  }

  // Expression that must end at the end of its line.
  PredicateExpr line_expr() {
    const std::size_t line = peek().line;
    PredicateExpr e = expr();
    if (!at(Tok::End) && peek().line == line) fail("unexpected " + describe(peek()));
    return e;
  }

  Step integer() {
    const double v = signed_number();
    if (v != std::floor(v)) fail("expected an integer step index");
    return static_cast<Step>(v);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  double dt_;
  const PredicateTable* names_;
  std::vector<IntervalConversion>* conversions_;
};

int formula_precedence(const FormulaNode& n) {
  switch (n.kind) {
    case FormulaKind::Or: return 1;
    case FormulaKind::And: return 2;
    case FormulaKind::UntilF:
    case FormulaKind::UntilP: return 3;
    case FormulaKind::Not:
    case FormulaKind::EvF:
    case FormulaKind::EvP:
    case FormulaKind::AlwF:
    case FormulaKind::AlwP: return 4;
    default: return 5;
  }
}

std::string time_value(Step steps, double dt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", static_cast<double>(steps) * dt);
  return buf;
}

void print_formula(const FormulaNode& n, double dt, std::string& out);

void print_sub(const FormulaNode& n, bool parens, double dt, std::string& out) {
  if (parens) out += '(';
  print_formula(n, dt, out);
  if (parens) out += ')';
}

void print_formula(const FormulaNode& n, double dt, std::string& out) {
  auto interval = [&] {
    return "[" + time_value(n.interval.lo, dt) + "," + time_value(n.interval.hi, dt) + "]";
  };
  const int p = formula_precedence(n);
  switch (n.kind) {
    case FormulaKind::True: out += "TRUE"; break;
    case FormulaKind::Pred:
      out += n.name.empty() ? "pred{" + n.predicate->str() + "}" : n.name;
      break;
    case FormulaKind::Not:
      out += '!';
      print_sub(*n.children[0], formula_precedence(*n.children[0]) < 4, dt, out);
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
      print_sub(*n.children[0], formula_precedence(*n.children[0]) < p, dt, out);
      out += n.kind == FormulaKind::And ? " & " : " | ";
      print_sub(*n.children[1], formula_precedence(*n.children[1]) <= p, dt, out);
      break;
    case FormulaKind::UntilF:
    case FormulaKind::UntilP:
      print_sub(*n.children[0], formula_precedence(*n.children[0]) <= p, dt, out);
      out += n.kind == FormulaKind::UntilF ? " U" : " S";
      out += interval() + " ";
      print_sub(*n.children[1], formula_precedence(*n.children[1]) <= p, dt, out);
      break;
    case FormulaKind::EvF:
    case FormulaKind::EvP:
    case FormulaKind::AlwF:
    case FormulaKind::AlwP: {
      static constexpr char ops[] = {'F', 'P', 'G', 'H'};
      out += ops[static_cast<int>(n.kind) - static_cast<int>(FormulaKind::EvF)];
      out += interval() + " ";
      print_sub(*n.children[0], formula_precedence(*n.children[0]) < 4, dt, out);
      break;
    }
  }
}

std::string strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return std::string(line.substr(0, hash));
}

}  // namespace

PredicateExpr parse_predicate(std::string_view text) {
  Parser p(lex(text), 1.0, nullptr, nullptr);
  PredicateExpr e = p.expr();
  p.expect_end();
  return e;
}

StlFormula parse_formula(std::string_view text, double dt, const PredicateTable& names,
                         std::vector<IntervalConversion>* conversions) {
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  Parser p(lex(text), dt, &names, conversions);
  StlFormula f = p.formula();
  p.expect_end();
  validate(f);
  return f;
}

FormulaFile parse_formula_file(std::string_view text, double dt,
                               std::vector<IntervalConversion>* conversions) {
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  PredicateTable defs;
  std::vector<std::string> order;
  std::string body;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string code = strip_comment(line);
    const auto first = code.find_first_not_of(" \t\r");
    if (first != std::string::npos && code.compare(first, 4, "def ") == 0) {
      auto toks = lex(code, lineno);
      Parser p(std::move(toks), dt, nullptr, nullptr);
      p.next();  // def
      const Token name = p.expect(Tok::Ident, "predicate name");
      p.expect(Tok::Equals, "'='");
      PredicateExpr e = p.expr();
      p.expect_end();
      if (!defs.emplace(name.text, e).second) {
        throw SyntaxError("duplicate definition '" + name.text + "'", name.line, name.column);
      }
      order.push_back(name.text);
      body += '\n';
    } else {
      body += code + '\n';
    }
  }
  Parser p(lex(body), dt, &defs, conversions);
  StlFormula f = p.formula();
  p.expect_end();
  validate(f);
  return {std::move(defs), std::move(order), std::move(f)};
}

ConstraintSpec parse_constraint(std::string_view text) {
  Parser p(lex(text), 1.0, nullptr, nullptr);
  return p.constraint_file();
}

bool looks_like_constraint(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const std::string code = strip_comment(line);
    const auto first = code.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const std::string_view s(code.c_str() + first);
    return s.starts_with("on ") || s.starts_with("on[") || s.starts_with("always") ||
           s.starts_with("default");
  }
  return false;
}

std::string to_string(const StlFormula& f, double dt) {
  std::string out;
  print_formula(f.root(), dt, out);
  return out;
}

std::string to_string(const FormulaFile& f, double dt) {
  std::string out;
  for (const auto& name : f.order) {
    out += "def " + name + " = " + f.definitions.at(name).str() + "\n";
  }
  return out + to_string(f.formula, dt) + "\n";
}

std::string to_string(const ConstraintSpec& c) {
  std::string out;
  for (const auto& piece : c.pieces()) {
    if (piece.unbounded) {
      out += "always: ";
    } else {
      out += "on [" + std::to_string(piece.window.lo) + "," + std::to_string(piece.window.hi) +
             "]: ";
    }
    out += piece.expr.str() + "\n";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", c.default_value());
  return out + "default: " + buf + "\n";
}

}  // namespace temprisk
