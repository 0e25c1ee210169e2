#pragma once

#include <complex>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hm/error.hpp"
#include "hm/jet.hpp"

namespace hm {

inline cplx exp_of(cplx a) { return std::exp(a); }
inline cplx pow_of(cplx a, unsigned n) { return ipow(a, n); }
inline bool vanishes(cplx a) { return a == cplx{}; }

/// Immutable expression tree of a holomorphic function of named complex
/// variables. Supports literals, variables, + - * /, non-negative integer
/// powers and exp. Copies share structure.
///
/// Grammar (whitespace ignored):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' uint)?
///   base   := number | 'i' | ident | '(' expr ')' | 'exp' '(' expr ')' | '-' factor
///
/// `i` is the imaginary unit and `exp` is reserved, so neither may be declared
/// as a variable.
class Expr {
 public:
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Exp };

  struct Node {
    Op op = Op::Const;
    cplx value{};
    std::size_t var = 0;
    unsigned exponent = 0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };
  using NodePtr = std::shared_ptr<const Node>;

  /// The zero expression over no variables.
  Expr();

  static Expr parse(std::string_view text, std::vector<std::string> vars);
  static Expr constant(cplx value, std::vector<std::string> vars);
  static Expr variable(std::string_view name, std::vector<std::string> vars);

  const std::vector<std::string>& vars() const { return *vars_; }
  std::size_t var_index(std::string_view name) const;
  bool declares(std::string_view name) const;

  /// Symbolic partial derivative, with constant folding so that an
  /// expression independent of the variable differentiates to literal zero.
  Expr diff(std::string_view var) const;
  Expr diff(std::size_t var) const;

  cplx eval(std::span<const cplx> values) const;
  cplx eval(const std::map<std::string, cplx>& point) const;

  /// Forward-mode jet with respect to every declared variable, in declaration
  /// order. This path never consults diff().
  Jet eval_jet(std::span<const cplx> values, int order) const;
  Jet eval_jet(const std::map<std::string, cplx>& point, int order) const;

  /// Evaluates over an arbitrary algebra T: inputs[k] is the value bound to
  /// the k-th declared variable and lift(c) embeds a literal.
  template <class T, class Lift>
  T evaluate(std::span<const T> inputs, Lift&& lift) const {
    if (inputs.size() < vars_->size()) throw Error(ErrorKind::Eval, "not every variable is bound");
    return evaluate_node<T>(*root_, inputs, lift);
  }

  std::string to_string() const;
  bool is_zero() const { return root_->op == Op::Const && root_->value == cplx{}; }
  bool is_constant() const { return root_->op == Op::Const; }
  bool depends_on(std::size_t var) const;
  const Node& root() const { return *root_; }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, unsigned n);
  friend Expr exp(const Expr& arg);

 private:
  using VarList = std::shared_ptr<const std::vector<std::string>>;
  Expr(NodePtr root, VarList vars) : root_(std::move(root)), vars_(std::move(vars)) {}

  static std::string node_string(const Node& n, const std::vector<std::string>& vars);

  template <class T, class Lift>
  T evaluate_node(const Node& n, std::span<const T> in, Lift& lift) const {
    switch (n.op) {
      case Op::Const:
        return lift(n.value);
      case Op::Var:
        return in[n.var];
      case Op::Neg:
        return -evaluate_node<T>(*n.lhs, in, lift);
      case Op::Add:
        return evaluate_node<T>(*n.lhs, in, lift) + evaluate_node<T>(*n.rhs, in, lift);
      case Op::Sub:
        return evaluate_node<T>(*n.lhs, in, lift) - evaluate_node<T>(*n.rhs, in, lift);
      case Op::Mul:
        return evaluate_node<T>(*n.lhs, in, lift) * evaluate_node<T>(*n.rhs, in, lift);
      case Op::Div: {
        T num = evaluate_node<T>(*n.lhs, in, lift);
        T den = evaluate_node<T>(*n.rhs, in, lift);
        if (vanishes(den))
          throw Error(ErrorKind::DivisionByZero, "denominator " + node_string(*n.rhs, *vars_) + " vanishes");
        return num / den;
      }
      case Op::Pow:
        return pow_of(evaluate_node<T>(*n.lhs, in, lift), n.exponent);
      case Op::Exp:
        return exp_of(evaluate_node<T>(*n.lhs, in, lift));
    }
    throw Error(ErrorKind::Eval, "corrupt expression node");
  }

  NodePtr root_;
  VarList vars_;
};

/// Standard variable lists: {prefix1, ..., prefixN}.
std::vector<std::string> numbered_vars(std::string_view prefix, std::size_t count);

}  // namespace hm
