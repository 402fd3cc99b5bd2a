#include "sglab/seqspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sglab {

const char* to_string(KotheFamily f) {
  switch (f) {
    case KotheFamily::omega: return "omega";
    case KotheFamily::s: return "s";
    case KotheFamily::custom: return "custom";
  }
  return "custom";
}

KotheMatrix KotheMatrix::omega() {
  KotheMatrix m;
  m.family_ = KotheFamily::omega;
  m.label_ = "omega";
  m.rule_ = [](double j, double k) { return j <= k ? 1.0 : 0.0; };
  return m;
}

KotheMatrix KotheMatrix::s() {
  KotheMatrix m;
  m.family_ = KotheFamily::s;
  m.label_ = "s";
  m.rule_ = [](double j, double k) { return std::pow(j, k); };
  return m;
}

KotheMatrix KotheMatrix::custom(const Expression& b_expr, std::optional<Expression> growth_exponent,
                                std::optional<Expression> support) {
  KotheMatrix m;
  m.family_ = KotheFamily::custom;
  m.label_ = b_expr.print();
  m.rule_ = [b_expr](double j, double k) { return b_expr.eval({.j = j, .k = k}); };
  m.log_rule_ = [b_expr](double j, double k) { return b_expr.log_abs({.j = j, .k = k}); };
  m.growth_ = std::move(growth_exponent);
  m.support_ = std::move(support);
  return m;
}

KotheMatrix KotheMatrix::custom(Rule rule, std::string label) {
  KotheMatrix m;
  m.family_ = KotheFamily::custom;
  m.label_ = std::move(label);
  m.rule_ = std::move(rule);
  return m;
}

double KotheMatrix::entry(Index j, Index k) const {
  return rule_(static_cast<double>(j), static_cast<double>(k));
}

double KotheMatrix::log_entry(double j, Index k) const {
  switch (family_) {
    case KotheFamily::omega: return j <= static_cast<double>(k) ? 0.0 : kNegInf;
    case KotheFamily::s: return static_cast<double>(k) * std::log(j);
    case KotheFamily::custom: {
      double v = rule_(j, static_cast<double>(k));
      if (v > 0.0 && std::isfinite(v) && v >= std::numeric_limits<double>::min()) return std::log(v);
      if (v < 0.0 || !log_rule_) return v == kInf ? kInf : kNegInf;
      return log_rule_(j, static_cast<double>(k));
    }
  }
  return kNegInf;
}

std::optional<Index> KotheMatrix::column_support(Index k) const {
  if (family_ == KotheFamily::omega) return k;
  if (support_) return static_cast<Index>(std::floor(support_->eval({.k = static_cast<double>(k)})));
  return std::nullopt;
}

std::optional<ColumnGrowth> KotheMatrix::column_growth(Index k) const {
  switch (family_) {
    case KotheFamily::omega: return ColumnGrowth{0.0, 0.0};
    case KotheFamily::s: return ColumnGrowth{0.0, static_cast<double>(k)};
    case KotheFamily::custom:
      if (growth_) return ColumnGrowth{0.0, growth_->eval({.k = static_cast<double>(k)})};
      return std::nullopt;
  }
  return std::nullopt;
}

SpaceDescriptor::SpaceDescriptor(KotheMatrix m, double r) : matrix(std::move(m)), order_r(r) {
  if (!(r >= 1.0)) throw Error(Errc::config, "order r must be >= 1 or inf");
}

double parse_order(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInf;
  std::size_t used = 0;
  double r = 0.0;
  try {
    r = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(Errc::config, "invalid order r '" + text + "'");
  }
  if (used != text.size() || !(r >= 1.0) || !std::isfinite(r))
    throw Error(Errc::config, "invalid order r '" + text + "'");
  return r;
}

double Envelope::log_bound(double j) const {
  if (support && j > static_cast<double>(*support)) return kNegInf;
  return log_c + j * log_rho + g * std::log(j);
}

Envelope Envelope::sum(const Envelope& a, const Envelope& b) {
  Envelope e;
  double hi = std::max(a.log_c, b.log_c);
  double lo = std::min(a.log_c, b.log_c);
  e.log_c = hi == kNegInf ? kNegInf : hi + std::log1p(std::exp(lo - hi));
  e.log_rho = std::max(a.log_rho, b.log_rho);
  e.g = std::max(a.g, b.g);
  if (a.support && b.support) e.support = std::max(*a.support, *b.support);
  return e;
}

CoefficientVector::CoefficientVector(Rule rule, Envelope env, std::string label)
    : rule_(std::move(rule)), env_(std::move(env)), label_(std::move(label)) {}

CoefficientVector CoefficientVector::unit(Index j0) {
  if (j0 < 1) throw Error(Errc::config, "unit vector index must be >= 1");
  Envelope env;
  env.support = j0;
  return {[j0](Index j) { return j == j0 ? Complex(1.0) : Complex(0.0); }, env, "e_" + std::to_string(j0)};
}

CoefficientVector CoefficientVector::ones() {
  return {[](Index) { return Complex(1.0); }, Envelope{}, "ones"};
}

CoefficientVector CoefficientVector::geometric(double rho, double scale) {
  if (!(rho > 0.0) || !(scale > 0.0)) throw Error(Errc::config, "geometric vector needs rho > 0 and scale > 0");
  Envelope env;
  env.log_c = std::log(scale);
  env.log_rho = std::log(rho);
  std::ostringstream label;
  label << "geometric(" << rho << ")";
  return {[rho, scale](Index j) { return Complex(scale * std::pow(rho, static_cast<double>(j))); }, env,
          label.str()};
}

CoefficientVector CoefficientVector::finite(std::vector<Complex> coeffs, std::string label) {
  Envelope env;
  double m = 0.0;
  for (const auto& c : coeffs) m = std::max(m, std::abs(c));
  env.log_c = m > 0.0 ? std::log(m) : kNegInf;
  env.support = static_cast<Index>(coeffs.size());
  auto data = std::make_shared<const std::vector<Complex>>(std::move(coeffs));
  return {[data](Index j) {
            return j >= 1 && j <= static_cast<Index>(data->size()) ? (*data)[static_cast<std::size_t>(j - 1)]
                                                                   : Complex(0.0);
          },
          env, std::move(label)};
}

CoefficientVector CoefficientVector::from_expr(const Expression& e, Envelope env, Index check_upto) {
  CoefficientVector v([e](Index j) { return Complex(e.eval({.j = static_cast<double>(j)})); }, env, e.print());
  v.check_envelope(check_upto);
  return v;
}

CoefficientVector CoefficientVector::zero() {
  Envelope env;
  env.log_c = kNegInf;
  env.support = 0;
  return {[](Index) { return Complex(0.0); }, env, "zero"};
}

Complex CoefficientVector::operator()(Index j) const {
  if (j < 1) return 0.0;
  if (env_.support && j > *env_.support) return 0.0;
  return rule_(j);
}

std::vector<Complex> CoefficientVector::window(Index upto) const {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(std::max<Index>(upto, 0)));
  for (Index j = 1; j <= upto; ++j) out.push_back((*this)(j));
  return out;
}

void CoefficientVector::check_envelope(Index upto) const {
  if (env_.support) upto = std::min(upto, *env_.support);
  for (Index j = 1; j <= upto; ++j) {
    double a = std::abs(rule_(j));
    if (a == 0.0) continue;
    double bound = env_.log_bound(static_cast<double>(j));
    // relative slack for rounding in the rule itself
    if (std::log(a) > bound + 1e-9 * std::max(1.0, std::fabs(bound)))
      throw Error(Errc::config, "envelope violated by '" + label_ + "' at j=" + std::to_string(j));
  }
}

CoefficientVector CoefficientVector::with_label(std::string label) const {
  CoefficientVector v = *this;
  v.label_ = std::move(label);
  return v;
}

CoefficientVector operator-(const CoefficientVector& a, const CoefficientVector& b) {
  return {[a, b](Index j) { return a(j) - b(j); }, Envelope::sum(a.envelope(), b.envelope()),
          "(" + a.label() + " - " + b.label() + ")"};
}

CoefficientVector operator+(const CoefficientVector& a, const CoefficientVector& b) {
  return {[a, b](Index j) { return a(j) + b(j); }, Envelope::sum(a.envelope(), b.envelope()),
          "(" + a.label() + " + " + b.label() + ")"};
}

CoefficientVector scaled(const CoefficientVector& a, Complex factor) {
  Envelope env = a.envelope();
  double f = std::abs(factor);
  env.log_c = f > 0.0 ? env.log_c + std::log(f) : kNegInf;
  return {[a, factor](Index j) { return factor * a(j); }, env, a.label()};
}

double kothe_entry(const KotheMatrix& b, Index j, Index k) {
  if (j < 1 || k < 1) throw Error(Errc::config, "Köthe indices start at 1");
  return b.entry(j, k);
}

ValidationReport validate_kothe(const KotheMatrix& b, Index j_max, Index k_max) {
  if (j_max < 1 || k_max < 1) throw Error(Errc::config, "validation window must be positive");
  ValidationReport rep;
  rep.j_max = j_max;
  rep.k_max = k_max;
  constexpr std::size_t kKeep = 1000;
  for (Index j = 1; j <= j_max; ++j) {
    bool positive = false;
    double prev = b.entry(j, 1);
    if (prev > 0.0) positive = true;
    for (Index k = 1; k < k_max; ++k) {
      double next = b.entry(j, k + 1);
      if (next > 0.0) positive = true;
      bool broken = prev < 0.0 || prev > next;
      if (std::isinf(prev) && std::isinf(next)) broken = b.log_entry(static_cast<double>(j), k) >
                                                         b.log_entry(static_cast<double>(j), k + 1);
      if (broken) {
        if (rep.monotonicity_violations.size() < kKeep) rep.monotonicity_violations.emplace_back(j, k);
        ++rep.total_monotonicity_violations;
      }
      prev = next;
    }
    if (!positive && b.log_entry(static_cast<double>(j), k_max) > kNegInf) positive = true;
    if (!positive) rep.zero_rows.push_back(j);
  }
  return rep;
}

ContinuousNormResult has_continuous_norm(const KotheMatrix& b, Index j_max, Index k_max) {
  if (j_max < 1 || k_max < 1) throw Error(Errc::config, "probe window must be positive");
  ContinuousNormResult res;
  res.j_max = j_max;
  res.k_max = k_max;
  for (Index k = 1; k <= k_max; ++k) {
    Index zero_at = 0;
    if (auto sup = b.column_support(k); sup && *sup < j_max) {
      zero_at = std::max<Index>(*sup + 1, 1);
    } else {
      for (Index j = 1; j <= j_max; ++j) {
        if (!(b.log_entry(static_cast<double>(j), k) > kNegInf)) {
          zero_at = j;
          break;
        }
      }
    }
    if (zero_at == 0) {
      res.status = Status::certified;
      res.k0 = k;
      res.zero_rows.clear();
      return res;
    }
    res.zero_rows.push_back(zero_at);
  }
  res.status = Status::refuted;
  return res;
}

namespace {

double weighted(const KotheMatrix& m, Index j, Index k, Complex xj) {
  double a = std::abs(xj);
  if (a == 0.0) return 0.0;
  double b = m.entry(j, k);
  if (b == 0.0) return 0.0;
  if (std::isfinite(b)) {
    double v = a * b;
    if (std::isfinite(v)) return v;
  }
  return std::exp(m.log_entry(static_cast<double>(j), k) + std::log(a));
}

struct Accumulator {
  double r;
  double acc = 0.0;  // sup or sum of r-th powers

  void add(double w) {
    if (r == kInf)
      acc = std::max(acc, w);
    else if (r == 1.0)
      acc += w;
    else
      acc += std::pow(w, r);
  }
  double value() const { return (r == kInf || r == 1.0) ? acc : std::pow(acc, 1.0 / r); }
};

}  // namespace

SeminormValue window_seminorm(const CoefficientVector& x, Index k, const SpaceDescriptor& space, Index window) {
  Accumulator acc{space.order_r};
  Index upto = window;
  if (x.envelope().support) upto = std::min(upto, *x.envelope().support);
  if (auto cs = space.matrix.column_support(k)) upto = std::min(upto, *cs);
  for (Index j = 1; j <= upto; ++j) acc.add(weighted(space.matrix, j, k, x(j)));
  SeminormValue v{acc.value(), 0.0, k};
  if (space.order_r != 1.0 && space.order_r != kInf) v.abs_error = 4.0 * 2.2e-16 * static_cast<double>(upto) * v.value;
  return v;
}

SeminormValue seminorm(const CoefficientVector& x, Index k, const SpaceDescriptor& space, double tol, Index j_cap) {
  if (k < 1) throw Error(Errc::config, "seminorm index must be >= 1");
  if (!(tol > 0.0)) throw Error(Errc::config, "tol must be positive");
  const Envelope& env = x.envelope();
  std::optional<Index> support = env.support;
  if (auto cs = space.matrix.column_support(k)) support = support ? std::min(*support, *cs) : *cs;
  if (support) {
    if (*support > 100 * j_cap) throw Error(Errc::precision_limit, "support exceeds evaluation cap");
    return window_seminorm(x, k, space, *support);
  }

  auto growth = space.matrix.column_growth(k);
  if (!growth)
    throw Error(Errc::tail_not_certifiable, "matrix column " + std::to_string(k) + " has no declared growth bound");
  const double r = space.order_r;
  const double L = env.log_c + growth->log_scale;
  const double lr = env.log_rho;
  const double G = env.g + growth->exponent;
  auto log_u = [&](double j) { return L + j * lr + G * std::log(j); };

  if (L == kNegInf) return {0.0, 0.0, k};
  bool ok = lr < 0.0 || (lr == 0.0 && (r == kInf ? G <= 0.0 : r * G < -1.0));
  if (!ok)
    throw Error(Errc::tail_not_certifiable,
                "envelope of '" + x.label() + "' does not make column " + std::to_string(k) + " summable");

  auto tail = [&](Index J) -> double {
    double Jd = static_cast<double>(J);
    if (r == kInf) {
      if (lr < 0.0 && G > 0.0) {
        double jstar = G / -lr;
        return std::exp(log_u(std::max(Jd + 1.0, jstar)));
      }
      return std::exp(log_u(Jd + 1.0));
    }
    if (lr < 0.0) {
      double theta = std::exp(r * (lr + std::max(G, 0.0) * std::log1p(1.0 / (Jd + 1.0))));
      if (theta >= 1.0) return kInf;
      return std::exp(r * log_u(Jd + 1.0)) / (1.0 - theta);
    }
    double a = -r * G;
    return std::exp(r * L + (1.0 - a) * std::log(Jd)) / (a - 1.0);
  };

  Accumulator acc{r};
  Index done = 0;
  for (Index J = std::min<Index>(64, j_cap);; J = std::min(2 * J, j_cap)) {
    for (Index j = done + 1; j <= J; ++j) acc.add(weighted(space.matrix, j, k, x(j)));
    done = J;
    double t = tail(J);
    double value = acc.value();
    double err;
    if (r == kInf)
      err = std::max(0.0, t - value);
    else if (r == 1.0)
      err = t;
    else
      err = std::pow(acc.acc + t, 1.0 / r) - value;
    if (err <= tol) return {value, err, k};
    if (J >= j_cap)
      throw Error(Errc::precision_limit, "seminorm tolerance not reached at j cap " + std::to_string(j_cap));
  }
}

CoefficientVector unit_vector(Index j0) { return CoefficientVector::unit(j0); }

}  // namespace sglab
