#pragma once

// Small arithmetic DSL used to describe matrix entries b(j,k), diagonal
// symbols a(j) and mu-sequence closed forms mu(n).
//
//   expr    := sum
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | var | func '(' args ')' | '(' expr ')'
//
// Variables: j, k, n, t. Functions: log exp sqrt abs (1 arg), min max (2 args).

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace sglab {

struct Bindings {
  double j = 0.0;
  double k = 0.0;
  double n = 0.0;
  double t = 0.0;
};

class Expression {
 public:
  enum class Kind { number, variable, negate, add, sub, mul, div, pow, call };

  struct Node {
    Kind kind;
    double value = 0.0;  // number
    char var = 0;        // variable
    std::string func;    // call
    std::vector<std::shared_ptr<const Node>> args;
  };

  Expression() = default;
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  // Throws Error{Errc::syntax} with a character position.
  static Expression parse(std::string_view src);

  // Throws Error{Errc::domain} on log/sqrt of out-of-range arguments,
  // division by zero and non-finite results.
  double eval(const Bindings& b) const;
  // log |eval(b)|, -inf for an exact zero. Products, quotients, powers and exp
  // are combined in the log domain, so tiny or huge values do not under/overflow.
  double log_abs(const Bindings& b) const;

  // Canonical fully parenthesised form; parse(print()) reproduces the tree.
  std::string print() const;

  bool uses(char var) const;
  bool empty() const { return root_ == nullptr; }
  const Node& root() const { return *root_; }

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  std::shared_ptr<const Node> root_;
};

}  // namespace sglab
