#pragma once

// Log-domain sequences (mu_n) and the entire-type series
//   f(t) = sum_n mu_n t^n / n!
// with root-test radii and ratio-criterion tail bounds.

#include <optional>
#include <string>
#include <vector>

#include "sglab/expr.hpp"
#include "sglab/seqspace.hpp"

namespace sglab {

inline constexpr int kDefaultNMax = 1024;

enum class MuOrigin {
  scan,        // optimal_mu window scan, no closed form beyond the window
  geometric,   // M * mu^n
  power_form,  // K * (n/d)^n * e^{-n}
  cauchy,      // n! * s / (s - q)^{n+1}
  expression,  // DSL in n
};

const char* to_string(MuOrigin o);

double log_factorial(long n);

class LogMuSequence {
 public:
  static LogMuSequence from_geometric(double M, double mu, int n_max = kDefaultNMax);
  static LogMuSequence from_log_geometric(double log_M, double log_mu, int n_max = kDefaultNMax);
  static LogMuSequence power_form(double K, double d, int n_max = kDefaultNMax);
  static LogMuSequence cauchy(double q, double s, int n_max = kDefaultNMax);
  static LogMuSequence from_expr(const Expression& e, int n_max = kDefaultNMax);
  static LogMuSequence from_scan(std::vector<double> log_mu);

  MuOrigin origin() const { return origin_; }
  int n_max() const { return static_cast<int>(log_mu_.size()) - 1; }
  const std::vector<double>& values() const { return log_mu_; }

  // log mu_n; closed-form origins extend past the window, others throw
  // Error{Errc::increase_n}.
  double log_mu(long n) const;
  bool has_closed_form() const { return origin_ != MuOrigin::scan && origin_ != MuOrigin::expression; }

  // Exact radius of sum mu_n t^n / n! for closed-form origins.
  std::optional<double> analytic_radius() const;

  // Ratio sup_{n >= from} mu_{n+1} t / ((n+1) mu_n), or nullopt when it
  // cannot be bounded (window exhausted).
  std::optional<double> tail_ratio(double t, long from) const;

  LogMuSequence with_pair(double p, double q) const;
  double p() const { return p_; }
  double q() const { return q_; }

  std::string summary() const;

 private:
  LogMuSequence() = default;

  std::vector<double> log_mu_;
  MuOrigin origin_ = MuOrigin::scan;
  double a_ = 0.0;  // geometric: log M;  power_form: log K;  cauchy: q
  double b_ = 0.0;  // geometric: log mu; power_form: d;      cauchy: s
  std::optional<Expression> expr_;
  double p_ = 0.0;
  double q_ = 0.0;
};

struct RadiusEstimate {
  double value = 0.0;  // +inf for entire series
  bool stabilized = false;
  double root_test = 0.0;  // raw root-test value at the end of the window
};

RadiusEstimate radius(const LogMuSequence& mu);

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
  int n_used = 0;
};

// Sum until the certified tail is <= tol. Errors: outside_disc, precision_limit.
SeriesValue series_sum(const LogMuSequence& mu, double t, double tol = 1e-12, bool compensated = false);

// term_{N+1} / (1 - rho) >= sum_{n > N} mu_n t^n / n!. Error: increase_n.
double tail_bound(const LogMuSequence& mu, double t, long N);

}  // namespace sglab
