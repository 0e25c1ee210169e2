#include "hm/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace hm {
namespace {

using Op = Expr::Op;
using Node = Expr::Node;
using NodePtr = Expr::NodePtr;

NodePtr make_const(cplx v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

NodePtr make_var(std::size_t idx) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->var = idx;
  return n;
}

NodePtr make_raw(Op op, NodePtr lhs, NodePtr rhs = nullptr, unsigned exponent = 0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->exponent = exponent;
  return n;
}

bool is_const(const NodePtr& n) { return n->op == Op::Const; }
bool is_value(const NodePtr& n, cplx v) { return is_const(n) && n->value == v; }

// Folding builders. Division by a literal zero is left unfolded so that
// evaluation reports it.
NodePtr fold_neg(const NodePtr& a) {
  if (is_const(a)) return make_const(-a->value);
  if (a->op == Op::Neg) return a->lhs;
  return make_raw(Op::Neg, a);
}

NodePtr fold_add(const NodePtr& a, const NodePtr& b) {
  if (is_const(a) && is_const(b)) return make_const(a->value + b->value);
  if (is_value(a, 0.0)) return b;
  if (is_value(b, 0.0)) return a;
  return make_raw(Op::Add, a, b);
}

NodePtr fold_sub(const NodePtr& a, const NodePtr& b) {
  if (is_const(a) && is_const(b)) return make_const(a->value - b->value);
  if (is_value(b, 0.0)) return a;
  if (is_value(a, 0.0)) return fold_neg(b);
  return make_raw(Op::Sub, a, b);
}

NodePtr fold_mul(const NodePtr& a, const NodePtr& b) {
  if (is_const(a) && is_const(b)) return make_const(a->value * b->value);
  if (is_value(a, 0.0) || is_value(b, 0.0)) return make_const(0.0);
  if (is_value(a, 1.0)) return b;
  if (is_value(b, 1.0)) return a;
  if (is_value(a, -1.0)) return fold_neg(b);
  if (is_value(b, -1.0)) return fold_neg(a);
  return make_raw(Op::Mul, a, b);
}

NodePtr fold_div(const NodePtr& a, const NodePtr& b) {
  if (is_value(b, 0.0)) return make_raw(Op::Div, a, b);
  if (is_const(a) && is_const(b)) return make_const(a->value / b->value);
  if (is_value(a, 0.0)) return make_const(0.0);
  if (is_value(b, 1.0)) return a;
  return make_raw(Op::Div, a, b);
}

NodePtr fold_pow(const NodePtr& a, unsigned n) {
  if (n == 0) return make_const(1.0);
  if (n == 1) return a;
  if (is_const(a)) return make_const(ipow(a->value, n));
  return make_raw(Op::Pow, a, nullptr, n);
}

NodePtr fold_exp(const NodePtr& a) {
  if (is_const(a)) return make_const(std::exp(a->value));
  return make_raw(Op::Exp, a);
}

NodePtr diff_node(const NodePtr& n, std::size_t v) {
  switch (n->op) {
    case Op::Const:
      return make_const(0.0);
    case Op::Var:
      return make_const(n->var == v ? 1.0 : 0.0);
    case Op::Neg:
      return fold_neg(diff_node(n->lhs, v));
    case Op::Add:
      return fold_add(diff_node(n->lhs, v), diff_node(n->rhs, v));
    case Op::Sub:
      return fold_sub(diff_node(n->lhs, v), diff_node(n->rhs, v));
    case Op::Mul:
      return fold_add(fold_mul(diff_node(n->lhs, v), n->rhs), fold_mul(n->lhs, diff_node(n->rhs, v)));
    case Op::Div: {
      NodePtr da = diff_node(n->lhs, v);
      NodePtr db = diff_node(n->rhs, v);
      if (is_value(db, 0.0)) return fold_div(da, n->rhs);
      return fold_div(fold_sub(fold_mul(da, n->rhs), fold_mul(n->lhs, db)), fold_pow(n->rhs, 2));
    }
    case Op::Pow: {
      NodePtr da = diff_node(n->lhs, v);
      if (is_value(da, 0.0)) return make_const(0.0);
      NodePtr coeff = fold_mul(make_const(static_cast<double>(n->exponent)), fold_pow(n->lhs, n->exponent - 1));
      return fold_mul(coeff, da);
    }
    case Op::Exp:
      return fold_mul(n, diff_node(n->lhs, v));
  }
  return make_const(0.0);
}

bool node_depends(const Node& n, std::size_t v) {
  switch (n.op) {
    case Op::Const:
      return false;
    case Op::Var:
      return n.var == v;
    default:
      return (n.lhs && node_depends(*n.lhs, v)) || (n.rhs && node_depends(*n.rhs, v));
  }
}

std::string wrap(const std::string& s) { return "(" + s + ")"; }

std::string number_string(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make_raw(Op::Add, lhs, term());
      else if (accept('-'))
        lhs = make_raw(Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*'))
        lhs = make_raw(Op::Mul, lhs, factor());
      else if (accept('/'))
        lhs = make_raw(Op::Div, lhs, factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    NodePtr b = base();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      unsigned long n = std::strtoul(std::string(s_.substr(start, pos_ - start)).c_str(), nullptr, 10);
      if (n > 4096) fail("exponent too large");
      b = make_raw(Op::Pow, b, nullptr, static_cast<unsigned>(n));
    }
    return b;
  }

  NodePtr base() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      return make_raw(Op::Neg, factor());
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string_view name = s_.substr(start, pos_ - start);
      if (name == "i") return make_const(cplx{0.0, 1.0});
      if (name == "exp") {
        expect('(');
        NodePtr e = expr();
        expect(')');
        return make_raw(Op::Exp, e);
      }
      auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end()) {
        pos_ = start;
        throw Error(ErrorKind::UnknownVariable,
                    "'" + std::string(name) + "' at offset " + std::to_string(start) + " is not declared");
      }
      return make_var(static_cast<std::size_t>(it - vars_.begin()));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        digits();
      else
        pos_ = save;
    }
    const std::string text(s_.substr(start, pos_ - start));
    if (text == ".") fail("malformed number");
    return make_const(std::strtod(text.c_str(), nullptr));
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

void check_vars(const std::vector<std::string>& vars) {
  for (const auto& v : vars) {
    if (v.empty() || !std::isalpha(static_cast<unsigned char>(v[0])) ||
        !std::all_of(v.begin(), v.end(), [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)); }))
      throw Error(ErrorKind::Syntax, "invalid variable name '" + v + "'");
    if (v == "i" || v == "exp") throw Error(ErrorKind::Syntax, "'" + v + "' is reserved");
  }
}

}  // namespace

Expr::Expr() : root_(make_const(0.0)), vars_(std::make_shared<const std::vector<std::string>>()) {}

Expr Expr::parse(std::string_view text, std::vector<std::string> vars) {
  check_vars(vars);
  auto list = std::make_shared<const std::vector<std::string>>(std::move(vars));
  Parser p(text, *list);
  return Expr(p.parse(), list);
}

Expr Expr::constant(cplx value, std::vector<std::string> vars) {
  check_vars(vars);
  return Expr(make_const(value), std::make_shared<const std::vector<std::string>>(std::move(vars)));
}

Expr Expr::variable(std::string_view name, std::vector<std::string> vars) {
  check_vars(vars);
  auto list = std::make_shared<const std::vector<std::string>>(std::move(vars));
  Expr probe(make_const(0.0), list);
  return Expr(make_var(probe.var_index(name)), list);
}

std::size_t Expr::var_index(std::string_view name) const {
  auto it = std::find(vars_->begin(), vars_->end(), name);
  if (it == vars_->end()) throw Error(ErrorKind::UnknownVariable, "'" + std::string(name) + "' is not declared");
  return static_cast<std::size_t>(it - vars_->begin());
}

bool Expr::declares(std::string_view name) const {
  return std::find(vars_->begin(), vars_->end(), name) != vars_->end();
}

Expr Expr::diff(std::string_view var) const { return diff(var_index(var)); }

Expr Expr::diff(std::size_t var) const {
  if (var >= vars_->size()) throw Error(ErrorKind::UnknownVariable, "variable index out of range");
  return Expr(diff_node(root_, var), vars_);
}

cplx Expr::eval(std::span<const cplx> values) const {
  return evaluate<cplx>(values, [](cplx c) { return c; });
}

namespace {
std::vector<cplx> bind(const std::vector<std::string>& vars, const std::map<std::string, cplx>& point) {
  std::vector<cplx> values(vars.size());
  for (std::size_t k = 0; k < vars.size(); ++k) {
    auto it = point.find(vars[k]);
    if (it == point.end()) throw Error(ErrorKind::Eval, "variable '" + vars[k] + "' is not bound");
    values[k] = it->second;
  }
  return values;
}
}  // namespace

cplx Expr::eval(const std::map<std::string, cplx>& point) const {
  const auto values = bind(*vars_, point);
  return eval(values);
}

Jet Expr::eval_jet(std::span<const cplx> values, int order) const {
  const std::size_t n = vars_->size();
  if (values.size() < n) throw Error(ErrorKind::Eval, "not every variable is bound");
  std::vector<Jet> seeds;
  seeds.reserve(n);
  for (std::size_t k = 0; k < n; ++k) seeds.push_back(Jet::variable(values[k], k, n, order));
  return evaluate<Jet>(seeds, [n, order](cplx c) { return Jet(c, n, order); });
}

Jet Expr::eval_jet(const std::map<std::string, cplx>& point, int order) const {
  const auto values = bind(*vars_, point);
  return eval_jet(values, order);
}

bool Expr::depends_on(std::size_t var) const { return node_depends(*root_, var); }

std::string Expr::node_string(const Node& n, const std::vector<std::string>& vars) {
  switch (n.op) {
    case Op::Const: {
      const double re = n.value.real();
      const double im = n.value.imag();
      if (im == 0.0) return re < 0 || std::signbit(re) ? "(" + number_string(re) + ")" : number_string(re);
      if (re == 0.0) return "(" + number_string(im) + "*i)";
      return "(" + number_string(re) + (im < 0 ? "-" : "+") + number_string(std::abs(im)) + "*i)";
    }
    case Op::Var:
      return vars[n.var];
    case Op::Neg:
      return "(-" + node_string(*n.lhs, vars) + ")";
    case Op::Add:
      return "(" + node_string(*n.lhs, vars) + " + " + node_string(*n.rhs, vars) + ")";
    case Op::Sub:
      return "(" + node_string(*n.lhs, vars) + " - " + node_string(*n.rhs, vars) + ")";
    case Op::Mul:
      return node_string(*n.lhs, vars) + "*" + node_string(*n.rhs, vars);
    case Op::Div:
      return node_string(*n.lhs, vars) + "/" + wrap(node_string(*n.rhs, vars));
    case Op::Pow:
      return wrap(node_string(*n.lhs, vars)) + "^" + std::to_string(n.exponent);
    case Op::Exp:
      return "exp(" + node_string(*n.lhs, vars) + ")";
  }
  return "?";
}

std::string Expr::to_string() const { return node_string(*root_, *vars_); }

Expr operator+(const Expr& a, const Expr& b) { return Expr(fold_add(a.root_, b.root_), a.vars_); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(fold_sub(a.root_, b.root_), a.vars_); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(fold_mul(a.root_, b.root_), a.vars_); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(fold_div(a.root_, b.root_), a.vars_); }
Expr operator-(const Expr& a) { return Expr(fold_neg(a.root_), a.vars_); }
Expr pow(const Expr& base, unsigned n) { return Expr(fold_pow(base.root_, n), base.vars_); }
Expr exp(const Expr& arg) { return Expr(fold_exp(arg.root_), arg.vars_); }

std::vector<std::string> numbered_vars(std::string_view prefix, std::size_t count) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) out.push_back(std::string(prefix) + std::to_string(k));
  return out;
}

}  // namespace hm
