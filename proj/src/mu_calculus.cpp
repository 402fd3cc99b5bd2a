#include "sglab/mu_calculus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sglab {

const char* to_string(MuOrigin o) {
  switch (o) {
    case MuOrigin::scan: return "scan";
    case MuOrigin::geometric: return "geometric";
    case MuOrigin::power_form: return "power_form";
    case MuOrigin::cauchy: return "cauchy";
    case MuOrigin::expression: return "expression";
  }
  return "unknown";
}

namespace {

constexpr long kExactFactorials = 64;

const std::array<double, kExactFactorials + 1>& small_log_factorials() {
  static const auto table = [] {
    std::array<double, kExactFactorials + 1> t{};
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  return table;
}

void check_n_max(int n_max) {
  if (n_max < 1) throw Error(Errc::config, "N_max must be >= 1");
}

double log_term(double log_mu, double log_t, long n) {
  if (log_mu == kNegInf) return kNegInf;
  if (n == 0) return log_mu;
  return log_mu + static_cast<double>(n) * log_t - log_factorial(n);
}

}  // namespace

double log_factorial(long n) {
  if (n < 0) throw Error(Errc::domain, "factorial of a negative integer");
  if (n <= kExactFactorials) return small_log_factorials()[static_cast<std::size_t>(n)];
  const double x = static_cast<double>(n);
  return x * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi * x) + 1.0 / (12.0 * x) -
         1.0 / (360.0 * x * x * x);
}

LogMuSequence LogMuSequence::from_log_geometric(double log_M, double log_mu, int n_max) {
  check_n_max(n_max);
  LogMuSequence s;
  s.origin_ = MuOrigin::geometric;
  s.a_ = log_M;
  s.b_ = log_mu;
  s.log_mu_.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) s.log_mu_[static_cast<std::size_t>(n)] = s.log_mu(n);
  return s;
}

LogMuSequence LogMuSequence::from_geometric(double M, double mu, int n_max) {
  if (!(M > 0.0) || !(mu >= 0.0)) throw Error(Errc::config, "geometric mu-sequence needs M > 0 and mu >= 0");
  return from_log_geometric(std::log(M), mu > 0.0 ? std::log(mu) : kNegInf, n_max);
}

LogMuSequence LogMuSequence::power_form(double K, double d, int n_max) {
  if (!(K > 0.0) || !(d > 0.0)) throw Error(Errc::config, "power-form mu-sequence needs K > 0 and d > 0");
  check_n_max(n_max);
  LogMuSequence s;
  s.origin_ = MuOrigin::power_form;
  s.a_ = std::log(K);
  s.b_ = d;
  s.log_mu_.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) s.log_mu_[static_cast<std::size_t>(n)] = s.log_mu(n);
  return s;
}

LogMuSequence LogMuSequence::cauchy(double q, double s_radius, int n_max) {
  if (!(q > 0.0) || !(s_radius > q)) throw Error(Errc::config, "Cauchy mu-sequence needs 0 < q < s");
  check_n_max(n_max);
  LogMuSequence s;
  s.origin_ = MuOrigin::cauchy;
  s.a_ = q;
  s.b_ = s_radius;
  s.log_mu_.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) s.log_mu_[static_cast<std::size_t>(n)] = s.log_mu(n);
  return s;
}

LogMuSequence LogMuSequence::from_expr(const Expression& e, int n_max) {
  check_n_max(n_max);
  LogMuSequence s;
  s.origin_ = MuOrigin::expression;
  s.expr_ = e;
  s.log_mu_.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    double v = e.eval({.n = static_cast<double>(n)});
    if (v < 0.0) throw Error(Errc::domain, "mu_" + std::to_string(n) + " is negative");
    s.log_mu_[static_cast<std::size_t>(n)] = v > 0.0 ? std::log(v) : kNegInf;
  }
  return s;
}

LogMuSequence LogMuSequence::from_scan(std::vector<double> log_mu) {
  if (log_mu.size() < 2) throw Error(Errc::config, "scan mu-sequence needs at least n = 0, 1");
  LogMuSequence s;
  s.origin_ = MuOrigin::scan;
  s.log_mu_ = std::move(log_mu);
  return s;
}

double LogMuSequence::log_mu(long n) const {
  if (n < 0) throw Error(Errc::config, "negative mu index");
  const double x = static_cast<double>(n);
  switch (origin_) {
    case MuOrigin::geometric: return n == 0 ? a_ : a_ + x * b_;
    case MuOrigin::power_form: return n == 0 ? a_ : a_ + x * (std::log(x) - std::log(b_) - 1.0);
    case MuOrigin::cauchy: return log_factorial(n) + std::log(b_) - (x + 1.0) * std::log(b_ - a_);
    case MuOrigin::expression:
    case MuOrigin::scan:
      if (n > n_max())
        throw Error(Errc::increase_n, "mu_" + std::to_string(n) + " lies beyond the materialized window");
      return log_mu_[static_cast<std::size_t>(n)];
  }
  return kNegInf;
}

std::optional<double> LogMuSequence::analytic_radius() const {
  switch (origin_) {
    case MuOrigin::geometric: return kInf;
    case MuOrigin::power_form: return b_;
    case MuOrigin::cauchy: return b_ - a_;
    default: return std::nullopt;
  }
}

std::optional<double> LogMuSequence::tail_ratio(double t, long from) const {
  if (t == 0.0) return 0.0;
  from = std::max<long>(from, 0);
  switch (origin_) {
    case MuOrigin::geometric: return std::exp(b_) * t / static_cast<double>(from + 1);
    // mu_{n+1} / ((n+1) mu_n) = (1 + 1/n)^n / (e d) < 1/d
    case MuOrigin::power_form: return t / b_;
    case MuOrigin::cauchy: return t / (b_ - a_);
    default: break;
  }
  if (from >= n_max()) return std::nullopt;
  double rho = 0.0;
  for (long n = from; n < n_max(); ++n) {
    double lo = log_mu_[static_cast<std::size_t>(n)];
    double hi = log_mu_[static_cast<std::size_t>(n) + 1];
    if (hi == kNegInf) continue;
    if (lo == kNegInf) return std::nullopt;
    rho = std::max(rho, std::exp(hi - lo) * t / static_cast<double>(n + 1));
  }
  return rho;
}

LogMuSequence LogMuSequence::with_pair(double p, double q) const {
  LogMuSequence s = *this;
  s.p_ = p;
  s.q_ = q;
  return s;
}

std::string LogMuSequence::summary() const {
  std::ostringstream os;
  os.precision(6);
  switch (origin_) {
    case MuOrigin::geometric: os << "M*mu^n, M=" << std::exp(a_) << ", mu=" << std::exp(b_); break;
    case MuOrigin::power_form: os << "K*(n/d)^n*e^-n, K=" << std::exp(a_) << ", d=" << b_; break;
    case MuOrigin::cauchy: os << "n!*s/(s-q)^(n+1), q=" << a_ << ", s=" << b_; break;
    case MuOrigin::expression: os << "mu_n=" << expr_->print(); break;
    case MuOrigin::scan: {
      os << "scan N=" << n_max() << ", log mu_1..3=";
      for (int n = 1; n <= std::min(3, n_max()); ++n) os << (n > 1 ? "," : "") << log_mu_[static_cast<std::size_t>(n)];
      break;
    }
  }
  return os.str();
}

namespace {

// exp(-(log mu_n - log n!)/n); +inf when mu_n = 0
double root_estimate(const LogMuSequence& mu, long n) {
  double lm = mu.values()[static_cast<std::size_t>(n)];
  if (lm == kNegInf) return kInf;
  return std::exp(-(lm - log_factorial(n)) / static_cast<double>(n));
}

}  // namespace

RadiusEstimate radius(const LogMuSequence& mu) {
  const long N = mu.n_max();
  if (N < 10) throw Error(Errc::config, "radius needs a window of at least 10 terms");
  RadiusEstimate r;
  const double at_n = root_estimate(mu, N);
  const double at_tenth = root_estimate(mu, N / 10);
  r.root_test = at_n;
  auto analytic = mu.analytic_radius();
  if (at_n == kInf || at_n / at_tenth > 2.0) {
    r.value = kInf;
    r.stabilized = !analytic || *analytic == kInf;
    return r;
  }
  if (analytic) {
    r.value = *analytic;
    r.stabilized = true;
    return r;
  }
  r.value = at_n;
  r.stabilized = std::abs(at_n - at_tenth) <= 0.01 * at_n;
  return r;
}

double tail_bound(const LogMuSequence& mu, double t, long N) {
  if (t < 0.0) throw Error(Errc::config, "tail_bound needs t >= 0");
  if (N < 0) throw Error(Errc::config, "tail_bound needs N >= 0");
  if (t == 0.0) return 0.0;
  auto rho = mu.tail_ratio(t, N + 1);
  if (!rho || *rho >= 1.0)
    throw Error(Errc::increase_n, "ratio criterion fails after N=" + std::to_string(N) + "; increase N");
  double lt = log_term(mu.log_mu(N + 1), std::log(t), N + 1);
  return std::exp(lt) / (1.0 - *rho);
}

SeriesValue series_sum(const LogMuSequence& mu, double t, double tol, bool compensated) {
  if (t < 0.0) throw Error(Errc::config, "series_sum needs t >= 0");
  if (!(tol > 0.0)) throw Error(Errc::config, "tol must be positive");
  SeriesValue out;
  const double mu0 = std::exp(mu.log_mu(0));
  if (t == 0.0) {
    out.value = mu0;
    return out;
  }
  double R = 0.0;
  if (auto a = mu.analytic_radius()) {
    R = *a;
  } else {
    auto est = radius(mu);
    if (!est.stabilized)
      throw Error(Errc::outside_disc, "radius not stabilized; no certified disc for t=" + std::to_string(t));
    R = est.value;
  }
  if (t >= R)
    throw Error(Errc::outside_disc, "t=" + std::to_string(t) + " is outside the certified disc of radius " +
                                        std::to_string(R));
  const long cap = mu.has_closed_form() ? 1000000 : mu.n_max() - 1;
  const double log_t = std::log(t);
  double sum = mu0, comp = 0.0;
  for (long n = 1; n <= cap; ++n) {
    double term = std::exp(log_term(mu.log_mu(n), log_t, n));
    if (compensated) {
      double y = sum + term;
      comp += std::abs(sum) >= std::abs(term) ? (sum - y) + term : (term - y) + sum;
      sum = y;
    } else {
      sum += term;
    }
    auto rho = mu.tail_ratio(t, n + 1);
    if (!rho || *rho >= 1.0) continue;
    double tb = tail_bound(mu, t, n);
    if (tb <= tol) {
      out.value = sum + comp;
      out.tail_bound = tb;
      out.n_used = static_cast<int>(n);
      return out;
    }
  }
  throw Error(Errc::precision_limit, "tail above tol=" + std::to_string(tol) + " at N=" + std::to_string(cap));
}

}  // namespace sglab
