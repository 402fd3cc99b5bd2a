#pragma once

// Köthe echelon spaces lambda^r(B): weight matrices, coefficient vectors with
// declared decay envelopes, and certified evaluation of the seminorms
//   ||x||_k = (sum_j |b_{j,k} x_j|^r)^{1/r}   or   sup_j b_{j,k} |x_j|.

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sglab/error.hpp"
#include "sglab/expr.hpp"

namespace sglab {

using Index = std::int64_t;
using Complex = std::complex<double>;

inline constexpr Index kDefaultJMax = 100000;
inline constexpr Index kDefaultKMax = 64;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class KotheFamily { omega, s, custom };

const char* to_string(KotheFamily f);

// Column growth bound b_{j,k} <= exp(log_scale) * j^exponent for all j >= 1.
struct ColumnGrowth {
  double log_scale = 0.0;
  double exponent = 0.0;
};

class KotheMatrix {
 public:
  using Rule = std::function<double(double j, double k)>;

  // b_{j,k} = 1 for j <= k, 0 otherwise.
  static KotheMatrix omega();
  // b_{j,k} = j^k.
  static KotheMatrix s();
  // DSL rule in j and k. Optional declarations (DSL in k) enable tail
  // certification: growth_exponent g(k) with b_{j,k} <= j^{g(k)}, and
  // support bound S(k) with b_{j,k} = 0 for j > S(k).
  static KotheMatrix custom(const Expression& b_expr, std::optional<Expression> growth_exponent = {},
                            std::optional<Expression> support = {});
  static KotheMatrix custom(Rule rule, std::string label);

  KotheFamily family() const { return family_; }
  const std::string& label() const { return label_; }

  double entry(Index j, Index k) const;
  // log b_{j,k}, -inf for a zero entry; j may be any real >= 1 for sparse
  // witness probing beyond the integer window.
  double log_entry(double j, Index k) const;

  std::optional<Index> column_support(Index k) const;
  std::optional<ColumnGrowth> column_growth(Index k) const;
  // True when log b_{j,k} = k log j exactly.
  bool power_weights() const { return family_ == KotheFamily::s; }

 private:
  KotheFamily family_ = KotheFamily::custom;
  std::string label_;
  Rule rule_;
  Rule log_rule_;
  std::optional<Expression> growth_;
  std::optional<Expression> support_;
};

struct SpaceDescriptor {
  KotheMatrix matrix;
  double order_r = 1.0;  // +inf for lambda^infinity

  SpaceDescriptor(KotheMatrix m, double r);
  bool sup_norm() const { return order_r == kInf; }
};

// Parses "1", "2", "inf", or a decimal >= 1.
double parse_order(const std::string& text);

// |x_j| <= exp(log_c + j*log_rho + g*log j) for j >= 1, and x_j = 0 for
// j > support when a support bound is declared.
struct Envelope {
  double log_c = 0.0;
  double log_rho = 0.0;
  double g = 0.0;
  std::optional<Index> support;

  double log_bound(double j) const;
  // Envelope dominating the sum of two vectors with these envelopes.
  static Envelope sum(const Envelope& a, const Envelope& b);
};

class CoefficientVector {
 public:
  using Rule = std::function<Complex(Index)>;

  CoefficientVector(Rule rule, Envelope env, std::string label);

  static CoefficientVector unit(Index j0);
  static CoefficientVector ones();
  static CoefficientVector geometric(double rho, double scale = 1.0);
  static CoefficientVector finite(std::vector<Complex> coeffs, std::string label = "finite");
  // DSL coefficient rule in j with a declared envelope; the envelope is
  // spot-checked on j <= check_upto.
  static CoefficientVector from_expr(const Expression& e, Envelope env, Index check_upto = 1000);
  static CoefficientVector zero();

  Complex operator()(Index j) const;
  const Envelope& envelope() const { return env_; }
  const std::string& label() const { return label_; }
  std::vector<Complex> window(Index upto) const;

  // Throws Error{Errc::config} naming the first j <= upto where the envelope fails.
  void check_envelope(Index upto) const;

  CoefficientVector with_label(std::string label) const;

 private:
  Rule rule_;
  Envelope env_;
  std::string label_;
};

CoefficientVector operator-(const CoefficientVector& a, const CoefficientVector& b);
CoefficientVector operator+(const CoefficientVector& a, const CoefficientVector& b);
CoefficientVector scaled(const CoefficientVector& a, Complex factor);

struct SeminormValue {
  double value = 0.0;
  double abs_error = 0.0;
  Index index = 0;

  double upper() const { return value + abs_error; }
};

struct ValidationReport {
  std::vector<std::pair<Index, Index>> monotonicity_violations;  // (j,k) with b_{j,k} > b_{j,k+1}
  std::vector<Index> zero_rows;
  std::size_t total_monotonicity_violations = 0;
  Index j_max = 0;
  Index k_max = 0;

  bool valid() const { return total_monotonicity_violations == 0 && zero_rows.empty(); }
};

struct ContinuousNormResult {
  Status status = Status::inconclusive;
  Index k0 = 0;                  // certificate column
  std::vector<Index> zero_rows;  // refutation: zero_rows[k-1] = j(k)
  Index j_max = 0;
  Index k_max = 0;
};

double kothe_entry(const KotheMatrix& b, Index j, Index k);
ValidationReport validate_kothe(const KotheMatrix& b, Index j_max = kDefaultJMax, Index k_max = kDefaultKMax);
ContinuousNormResult has_continuous_norm(const KotheMatrix& b, Index j_max = kDefaultJMax,
                                         Index k_max = kDefaultKMax);

// Certified seminorm: |value - ||x||_k| <= abs_error <= tol.
SeminormValue seminorm(const CoefficientVector& x, Index k, const SpaceDescriptor& space, double tol = 1e-12,
                       Index j_cap = kDefaultJMax);

// Seminorm restricted to coordinates j <= window (exact sum, no tail).
SeminormValue window_seminorm(const CoefficientVector& x, Index k, const SpaceDescriptor& space, Index window);

CoefficientVector unit_vector(Index j0);

}  // namespace sglab
