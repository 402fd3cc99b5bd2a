#include "sglab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <cstdlib>

#include "sglab/error.hpp"

namespace sglab {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::config: return "configuration error";
    case Errc::syntax: return "syntax error";
    case Errc::domain: return "domain error";
    case Errc::tail_not_certifiable: return "tail not certifiable";
    case Errc::precision_limit: return "precision limit";
    case Errc::image_envelope: return "image envelope failure";
    case Errc::no_domination: return "no domination";
    case Errc::outside_disc: return "outside certified disc";
    case Errc::increase_n: return "increase N";
    case Errc::inapplicable: return "construction inapplicable";
    case Errc::budget_exhausted: return "error budget exhausted";
    case Errc::beyond_horizon: return "beyond certified horizon";
  }
  return "unknown";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::certified: return "certified";
    case Status::refuted: return "refuted";
    case Status::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = Expression::Kind;

NodePtr make(Kind kind, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

int arity(const std::string& f) {
  if (f == "log" || f == "exp" || f == "sqrt" || f == "abs") return 1;
  if (f == "min" || f == "max") return 2;
  return -1;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    auto e = sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::syntax, msg + " at position " + std::to_string(pos_), pos_);
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr sum() {
    auto lhs = product();
    for (;;) {
      if (accept('+'))
        lhs = make(Kind::add, {lhs, product()});
      else if (accept('-'))
        lhs = make(Kind::sub, {lhs, product()});
      else
        return lhs;
    }
  }

  NodePtr product() {
    auto lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Kind::mul, {lhs, unary()});
      else if (accept('/'))
        lhs = make(Kind::div, {lhs, unary()});
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::negate, {unary()});
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make(Kind::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = sum();
      expect(')');
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (name.size() == 1 && (name == "j" || name == "k" || name == "n" || name == "t")) {
      auto n = std::make_shared<Node>();
      n->kind = Kind::variable;
      n->var = name[0];
      return n;
    }
    int ar = arity(name);
    if (ar < 0) {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    expect('(');
    std::vector<NodePtr> args;
    args.push_back(sum());
    while (accept(',')) args.push_back(sum());
    expect(')');
    if (static_cast<int>(args.size()) != ar)
      fail(name + " expects " + std::to_string(ar) + " argument(s)");
    auto n = std::make_shared<Node>();
    n->kind = Kind::call;
    n->func = name;
    n->args = std::move(args);
    return n;
  }
};

constexpr double kNegInfinity = -std::numeric_limits<double>::infinity();

[[noreturn]] void domain_fail(const std::string& msg) { throw Error(Errc::domain, msg); }

double eval_node(const Node& n, const Bindings& b) {
  switch (n.kind) {
    case Kind::number: return n.value;
    case Kind::variable:
      switch (n.var) {
        case 'j': return b.j;
        case 'k': return b.k;
        case 'n': return b.n;
        default: return b.t;
      }
    case Kind::negate: return -eval_node(*n.args[0], b);
    case Kind::add: return eval_node(*n.args[0], b) + eval_node(*n.args[1], b);
    case Kind::sub: return eval_node(*n.args[0], b) - eval_node(*n.args[1], b);
    case Kind::mul: return eval_node(*n.args[0], b) * eval_node(*n.args[1], b);
    case Kind::div: {
      double d = eval_node(*n.args[1], b);
      if (d == 0.0) domain_fail("division by zero");
      return eval_node(*n.args[0], b) / d;
    }
    case Kind::pow: {
      double x = eval_node(*n.args[0], b);
      double y = eval_node(*n.args[1], b);
      if (x < 0.0 && y != std::floor(y)) domain_fail("negative base with fractional exponent");
      if (x == 0.0 && y < 0.0) domain_fail("zero to a negative power");
      return std::pow(x, y);
    }
    case Kind::call: {
      double a = eval_node(*n.args[0], b);
      if (n.func == "log") {
        if (a <= 0.0) domain_fail("log of non-positive argument");
        return std::log(a);
      }
      if (n.func == "exp") return std::exp(a);
      if (n.func == "sqrt") {
        if (a < 0.0) domain_fail("sqrt of negative argument");
        return std::sqrt(a);
      }
      if (n.func == "abs") return std::fabs(a);
      double c = eval_node(*n.args[1], b);
      return n.func == "min" ? std::min(a, c) : std::max(a, c);
    }
  }
  return 0.0;
}

double log_abs_of(double v) { return v == 0.0 ? kNegInfinity : std::log(std::fabs(v)); }

double log_abs_node(const Node& n, const Bindings& b) {
  switch (n.kind) {
    case Kind::negate: return log_abs_node(*n.args[0], b);
    case Kind::mul: {
      double la = log_abs_node(*n.args[0], b), lb = log_abs_node(*n.args[1], b);
      return la == kNegInfinity || lb == kNegInfinity ? kNegInfinity : la + lb;
    }
    case Kind::div: {
      double lb = log_abs_node(*n.args[1], b);
      if (lb == kNegInfinity) domain_fail("division by zero");
      double la = log_abs_node(*n.args[0], b);
      return la == kNegInfinity ? la : la - lb;
    }
    case Kind::pow: {
      double y = eval_node(*n.args[1], b);
      double la = log_abs_node(*n.args[0], b);
      if (la == kNegInfinity) {
        if (y < 0.0) domain_fail("zero to a negative power");
        return y == 0.0 ? 0.0 : kNegInfinity;
      }
      if (y != std::floor(y) && eval_node(*n.args[0], b) < 0.0) domain_fail("negative base with fractional exponent");
      return y == 0.0 ? 0.0 : la * y;
    }
    case Kind::call:
      if (n.func == "exp") return eval_node(*n.args[0], b);
      if (n.func == "abs") return log_abs_node(*n.args[0], b);
      if (n.func == "sqrt") {
        if (eval_node(*n.args[0], b) < 0.0) domain_fail("sqrt of negative argument");
        return 0.5 * log_abs_node(*n.args[0], b);
      }
      return log_abs_of(eval_node(n, b));
    default: return log_abs_of(eval_node(n, b));
  }
}

void print_node(const Node& n, std::string& out) {
  auto bin = [&](const char* op) {
    out += '(';
    print_node(*n.args[0], out);
    out += op;
    print_node(*n.args[1], out);
    out += ')';
  };
  switch (n.kind) {
    case Kind::number: {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, n.value);
      (void)ec;
      out.append(buf, ptr);
      return;
    }
    case Kind::variable: out += n.var; return;
    case Kind::negate:
      out += "(-";
      print_node(*n.args[0], out);
      out += ')';
      return;
    case Kind::add: bin(" + "); return;
    case Kind::sub: bin(" - "); return;
    case Kind::mul: bin(" * "); return;
    case Kind::div: bin(" / "); return;
    case Kind::pow: bin("^"); return;
    case Kind::call:
      out += n.func;
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print_node(*n.args[i], out);
      }
      out += ')';
      return;
  }
}

bool uses_node(const Node& n, char var) {
  if (n.kind == Kind::variable) return n.var == var;
  for (const auto& a : n.args)
    if (uses_node(*a, var)) return true;
  return false;
}

bool equal_node(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  if (a.kind == Kind::number && a.value != b.value) return false;
  if (a.kind == Kind::variable && a.var != b.var) return false;
  if (a.kind == Kind::call && a.func != b.func) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal_node(*a.args[i], *b.args[i])) return false;
  return true;
}

}  // namespace

Expression Expression::parse(std::string_view src) { return Expression(Parser(src).parse()); }

double Expression::log_abs(const Bindings& b) const {
  if (!root_) throw Error(Errc::config, "empty expression");
  double v = log_abs_node(*root_, b);
  if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) domain_fail("non-finite result");
  return v;
}

double Expression::eval(const Bindings& b) const {
  if (!root_) throw Error(Errc::config, "empty expression");
  double v = eval_node(*root_, b);
  if (!std::isfinite(v)) domain_fail("non-finite result");
  return v;
}

std::string Expression::print() const {
  std::string out;
  if (root_) print_node(*root_, out);
  return out;
}

bool Expression::uses(char var) const { return root_ && uses_node(*root_, var); }

bool operator==(const Expression& a, const Expression& b) {
  if (!a.root_ || !b.root_) return a.root_ == b.root_;
  return equal_node(*a.root_, *b.root_);
}

}  // namespace sglab
