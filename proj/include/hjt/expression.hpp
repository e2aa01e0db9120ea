#pragma once

// A small arithmetic language for entering fields by hand:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?          (right associative)
//   atom   := number | name | name '(' expr ')' | '(' expr ')'
// Names are state variables (q1.., v1.., p1.., t), declared parameters, or the
// functions sqrt sin cos exp log abs. Evaluation is generic over the dual types.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hjt/dual.hpp"
#include "hjt/error.hpp"
#include "hjt/field.hpp"
#include "hjt/report.hpp"

namespace hjt {

enum class ExprOp { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprOp op = ExprOp::Num;
  double value = 0.0;
  std::string name;  // variable or function
  std::vector<Expr> args;
};

inline const std::set<std::string>& expression_functions() {
  static const std::set<std::string> f{"abs", "cos", "exp", "log", "sin", "sqrt"};
  return f;
}

/// Which identifiers an expression may use. Without an explicit variable list,
/// any q<k>, v<k>, p<k> (k >= 1) and t is accepted.
struct Symbols {
  std::set<std::string> params;
  std::optional<std::set<std::string>> variables;

  static bool state_like(std::string_view s) {
    if (s == "t") return true;
    if (s.size() < 2 || (s[0] != 'q' && s[0] != 'v' && s[0] != 'p') || s[1] == '0') return false;
    for (std::size_t i = 1; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  }

  bool known(const std::string& s) const {
    if (params.count(s)) return true;
    return variables ? variables->count(s) > 0 : state_like(s);
  }
};

namespace detail {

inline Expr make_node(ExprOp op, std::vector<Expr> args, double value = 0.0, std::string name = {}) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->value = value;
  n->name = std::move(name);
  n->args = std::move(args);
  return n;
}

class ExprParser {
 public:
  ExprParser(std::string_view text, const Symbols& sym, int line) : s_(text), sym_(sym), line_(line) {}

  Expr parse() {
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    Expr e = expr();
    skip();
    if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

 private:
  std::string_view s_;
  const Symbols& sym_;
  int line_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(line_, static_cast<int>(pos_) + 1, what);
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

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (eat('+')) lhs = make_node(ExprOp::Add, {lhs, term()});
      else if (eat('-')) lhs = make_node(ExprOp::Sub, {lhs, term()});
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (eat('*')) lhs = make_node(ExprOp::Mul, {lhs, unary()});
      else if (eat('/')) lhs = make_node(ExprOp::Div, {lhs, unary()});
      else return lhs;
    }
  }

  Expr unary() {
    if (eat('-')) return make_node(ExprOp::Neg, {unary()});
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (eat('^')) return make_node(ExprOp::Pow, {base, unary()});
    return base;
  }

  Expr atom() {
    skip();
    if (pos_ >= s_.size()) fail("expected operand");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail(std::string("unexpected '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t k = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, ++k;
      return k;
    };
    std::size_t nd = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      nd += digits();
    }
    if (nd == 0) fail("malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    std::string lit(s_.substr(start, pos_ - start));
    return make_node(ExprOp::Num, {}, std::strtod(lit.c_str(), nullptr));
  }

  Expr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string id(s_.substr(start, pos_ - start));
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      if (!expression_functions().count(id))
        throw Error(ErrorKind::UnknownIdentifier,
                    "line " + std::to_string(line_) + ", col " + std::to_string(start + 1) + ": function " + id);
      ++pos_;
      Expr arg = expr();
      if (!eat(')')) fail("expected ')'");
      return make_node(ExprOp::Call, {arg}, 0.0, id);
    }
    if (!sym_.known(id))
      throw Error(ErrorKind::UnknownIdentifier,
                  "line " + std::to_string(line_) + ", col " + std::to_string(start + 1) + ": " + id);
    return make_node(ExprOp::Var, {}, 0.0, id);
  }
};

inline int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::Add:
    case ExprOp::Sub: return 1;
    case ExprOp::Mul:
    case ExprOp::Div: return 2;
    case ExprOp::Neg: return 3;
    case ExprOp::Pow: return 4;
    default: return 5;
  }
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // shortest text that reads back to the same double
  for (int digits = 1; digits < 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) {
      s = buf;
      break;
    }
  }
  return s;
}

inline void print_into(const Expr& e, std::string& out);

inline void print_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print_into(e, out);
  if (wrap) out += ')';
}

inline void print_into(const Expr& e, std::string& out) {
  const int p = precedence(e->op);
  switch (e->op) {
    case ExprOp::Num: out += format_number(e->value); return;
    case ExprOp::Var: out += e->name; return;
    case ExprOp::Call:
      out += e->name + "(";
      print_into(e->args[0], out);
      out += ")";
      return;
    case ExprOp::Neg:
      out += '-';
      print_wrapped(e->args[0], precedence(e->args[0]->op) < p, out);
      return;
    case ExprOp::Pow:
      print_wrapped(e->args[0], precedence(e->args[0]->op) <= p, out);
      out += '^';
      print_wrapped(e->args[1], precedence(e->args[1]->op) < 3, out);
      return;
    default: {
      static const std::map<ExprOp, const char*> sym{
          {ExprOp::Add, " + "}, {ExprOp::Sub, " - "}, {ExprOp::Mul, " * "}, {ExprOp::Div, " / "}};
      print_wrapped(e->args[0], precedence(e->args[0]->op) < p, out);
      out += sym.at(e->op);
      print_wrapped(e->args[1], precedence(e->args[1]->op) <= p, out);
    }
  }
}

}  // namespace detail

inline Expr parse_expression(std::string_view text, const Symbols& sym = {}, int line = 1) {
  return detail::ExprParser(text, sym, line).parse();
}

/// Canonical text: minimal parentheses, shortest round-tripping literals.
inline std::string print_expression(const Expr& e) {
  std::string out;
  detail::print_into(e, out);
  return out;
}

inline bool same_expression(const Expr& a, const Expr& b) {
  if (a->op != b->op || a->name != b->name || a->args.size() != b->args.size()) return false;
  if (a->op == ExprOp::Num && a->value != b->value) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!same_expression(a->args[i], b->args[i])) return false;
  return true;
}

inline void collect_names(const Expr& e, std::set<std::string>& out) {
  if (e->op == ExprOp::Var) out.insert(e->name);
  for (const auto& a : e->args) collect_names(a, out);
}

/// An expression with names resolved to input slots or parameter values.
class CompiledExpr {
 public:
  CompiledExpr() = default;

  CompiledExpr(const Expr& e, const std::map<std::string, std::size_t>& slots, const Params& params)
      : root_(resolve(e, slots, params)) {}

  template <class T>
  T eval(std::span<const T> x) const {
    return eval_node<T>(*root_, x);
  }

 private:
  struct Node {
    ExprOp op;
    double value = 0.0;
    std::size_t slot = 0;
    std::string fn;
    std::vector<Node> args;
  };
  std::shared_ptr<const Node> root_;

  static std::shared_ptr<const Node> resolve(const Expr& e, const std::map<std::string, std::size_t>& slots,
                                             const Params& params) {
    return std::make_shared<const Node>(resolve_node(e, slots, params));
  }

  static Node resolve_node(const Expr& e, const std::map<std::string, std::size_t>& slots, const Params& params) {
    Node n{e->op, e->value, 0, e->name, {}};
    if (e->op == ExprOp::Var) {
      if (auto it = slots.find(e->name); it != slots.end()) {
        n.slot = it->second;
      } else if (auto pt = params.find(e->name); pt != params.end()) {
        n.op = ExprOp::Num;
        n.value = pt->second;
      } else {
        throw Error(ErrorKind::UnknownIdentifier, e->name + " is neither a variable of the field nor a parameter");
      }
    }
    for (const auto& a : e->args) n.args.push_back(resolve_node(a, slots, params));
    return n;
  }

  template <class T>
  static T eval_node(const Node& n, std::span<const T> x) {
    switch (n.op) {
      case ExprOp::Num: return T(n.value);
      case ExprOp::Var: return x[n.slot];
      case ExprOp::Neg: return -eval_node<T>(n.args[0], x);
      case ExprOp::Add: return eval_node<T>(n.args[0], x) + eval_node<T>(n.args[1], x);
      case ExprOp::Sub: return eval_node<T>(n.args[0], x) - eval_node<T>(n.args[1], x);
      case ExprOp::Mul: return eval_node<T>(n.args[0], x) * eval_node<T>(n.args[1], x);
      case ExprOp::Div: return eval_node<T>(n.args[0], x) / eval_node<T>(n.args[1], x);
      case ExprOp::Pow: {
        const Node& ex = n.args[1];
        if (ex.op == ExprOp::Num && ex.value == std::floor(ex.value) && std::abs(ex.value) < 1e6)
          return ipow(eval_node<T>(n.args[0], x), static_cast<long>(ex.value));
        return exp(eval_node<T>(ex, x) * log(eval_node<T>(n.args[0], x)));
      }
      case ExprOp::Call: {
        T a = eval_node<T>(n.args[0], x);
        if (n.fn == "sqrt") return sqrt(a);
        if (n.fn == "sin") return sin(a);
        if (n.fn == "cos") return cos(a);
        if (n.fn == "exp") return exp(a);
        if (n.fn == "log") return log(a);
        return abs(a);
      }
    }
    return T(0.0);
  }
};

/// Slot layout "q1..qn" or "q1..qn, v1..vn" (prefixes chosen by the caller).
inline std::map<std::string, std::size_t> state_slots(std::size_t n, std::initializer_list<char> prefixes) {
  std::map<std::string, std::size_t> out;
  std::size_t k = 0;
  for (char c : prefixes)
    for (std::size_t i = 1; i <= n; ++i) out[std::string(1, c) + std::to_string(i)] = k++;
  return out;
}

inline ScalarField expression_field(const Expr& e, const std::map<std::string, std::size_t>& slots,
                                    const Params& params, std::string name = "expr") {
  CompiledExpr c(e, slots, params);
  return ScalarField(
      slots.size(), [c](auto x) { return c.template eval<elem_t<decltype(x)>>(x); },
      [c](std::span<const double> x) { return std::isfinite(c.eval<double>(x)); }, std::move(name));
}

/// Candidate file: `param k` declarations and one `w<i> = expr` (vector field)
/// or `a<i> = expr` (1-form) line per component. '#' starts a comment.
struct CandidateSource {
  SectionKind kind = SectionKind::vector;
  std::set<std::string> params;
  std::vector<Expr> components;
};

inline CandidateSource parse_candidate_source(std::string_view text) {
  CandidateSource out;
  std::map<std::size_t, Expr> comps;
  std::optional<char> prefix;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    std::size_t b = 0;
    while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    if (b == line.size()) continue;
    std::string_view body = line.substr(b);
    if (body.rfind("param", 0) == 0 && body.size() > 5 && std::isspace(static_cast<unsigned char>(body[5]))) {
      std::size_t i = 5;
      while (i < body.size()) {
        while (i < body.size() && (std::isspace(static_cast<unsigned char>(body[i])) || body[i] == ',')) ++i;
        std::size_t j = i;
        while (j < body.size() && (std::isalnum(static_cast<unsigned char>(body[j])) || body[j] == '_')) ++j;
        if (j == i && i < body.size())
          throw SyntaxError(line_no, static_cast<int>(b + i) + 1, "bad parameter name");
        if (j > i) out.params.insert(std::string(body.substr(i, j - i)));
        i = j;
      }
      continue;
    }
    std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) throw SyntaxError(line_no, static_cast<int>(b) + 1, "expected `w<i> = ...`");
    std::string lhs(body.substr(0, eq));
    while (!lhs.empty() && std::isspace(static_cast<unsigned char>(lhs.back()))) lhs.pop_back();
    if (lhs.size() < 2 || (lhs[0] != 'w' && lhs[0] != 'a') || !Symbols::state_like("q" + lhs.substr(1)))
      throw SyntaxError(line_no, static_cast<int>(b) + 1, "component name must be w<i> or a<i>");
    if (prefix && *prefix != lhs[0])
      throw SyntaxError(line_no, static_cast<int>(b) + 1, "mixes vector (w) and 1-form (a) components");
    prefix = lhs[0];
    std::size_t idx = std::stoul(lhs.substr(1));
    if (comps.count(idx)) throw SyntaxError(line_no, static_cast<int>(b) + 1, "duplicate component " + lhs);
    Symbols sym{out.params, {}};
    // column numbers stay relative to the whole line
    std::string padded(b + eq + 1, ' ');
    padded += std::string(body.substr(eq + 1));
    comps[idx] = parse_expression(padded, sym, line_no);
  }
  if (comps.empty()) throw SyntaxError(line_no, 1, "no components");
  if (comps.rbegin()->first != comps.size())
    throw SyntaxError(line_no, 1, "components must be numbered 1.." + std::to_string(comps.size()));
  out.kind = *prefix == 'w' ? SectionKind::vector : SectionKind::oneform;
  for (auto& [i, e] : comps) out.components.push_back(e);
  return out;
}

/// Section on R^n from component expressions in q1..qn.
inline SectionField expression_section(const CandidateSource& src, const Params& params, std::string name) {
  const std::size_t n = src.components.size();
  for (const auto& p : src.params)
    if (!params.count(p)) throw Error(ErrorKind::Usage, name + ": parameter " + p + " has no value");
  auto slots = state_slots(n, {'q'});
  std::vector<CompiledExpr> comps;
  for (const auto& e : src.components) comps.emplace_back(e, slots, params);
  auto f = [comps](auto q) {
    using T = elem_t<decltype(q)>;
    std::vector<T> out;
    out.reserve(comps.size());
    for (const auto& c : comps) out.push_back(c.template eval<T>(q));
    return out;
  };
  Guard g = [comps](std::span<const double> q) {
    for (const auto& c : comps)
      if (!std::isfinite(c.eval<double>(q))) return false;
    return true;
  };
  return SectionField::make(n, src.kind, f, g, std::move(name));
}

}  // namespace hjt
