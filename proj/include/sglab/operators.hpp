#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sglab/expr.hpp"
#include "sglab/seqspace.hpp"

namespace sglab {

inline constexpr double kStabilizationTol = 1e-3;

// |a_j| <= c0 + c1*j + c2*log(j) for every j >= 1.
struct SymbolBound {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  bool probed = false;  // fitted on a finite window rather than known in closed form

  bool bounded() const { return c1 == 0.0 && c2 == 0.0; }
};

class DiagonalOperator {
 public:
  using Rule = std::function<Complex(double j)>;

  DiagonalOperator(Rule rule, std::optional<SymbolBound> bound, std::string label);

  // Symbol from the DSL in j; the growth bound is fitted on j <= probe_upto.
  static DiagonalOperator from_expr(const Expression& a_expr, Index probe_upto = kDefaultJMax);
  static DiagonalOperator constant(Complex c);
  static DiagonalOperator identity() { return constant(1.0); }
  static DiagonalOperator zero() { return constant(0.0); }
  // a_j = j
  static DiagonalOperator index_symbol();
  // a_j = log j
  static DiagonalOperator log_symbol();

  Complex symbol(double j) const { return rule_(j); }
  const std::optional<SymbolBound>& bound() const { return bound_; }
  const std::string& label() const { return label_; }

 private:
  Rule rule_;
  std::optional<SymbolBound> bound_;
  std::string label_;
};

// Taylor-coefficient differentiation c_n -> (n+1) c_{n+1}. Coefficient c_n is
// stored at sequence index j = n + 1.
struct TaylorDifferentiation {};

using Operator = std::variant<DiagonalOperator, TaylorDifferentiation>;

std::string describe(const Operator& op);

// Fits a growth bound for a symbol on j <= upto; nullopt when none of the
// bounded / logarithmic / linear shapes stabilises.
std::optional<SymbolBound> fit_symbol_bound(const DiagonalOperator::Rule& rule, Index upto);

CoefficientVector apply(const Operator& op, const CoefficientVector& x);
CoefficientVector apply_power(const Operator& op, int n, const CoefficientVector& x);

struct DominationWitness {
  double p = 0;
  double q = 0;
  int n = 0;
  double log_mu = kNegInf;  // -inf encodes mu = 0
  Index attaining_j = 0;     // 0 when every ratio vanishes
  bool stabilized = true;    // false => "probed window"
};

// Sup scans of |a_j|^n b_{j,p} / b_{j,q} over j <= j_max with cached
// log-domain columns.
class DiagonalScan {
 public:
  DiagonalScan(DiagonalOperator op, SpaceDescriptor space, Index j_max = kDefaultJMax);

  // Throws Error{Errc::no_domination} when some j has b_{j,p} > 0 = b_{j,q}
  // and a nonzero contribution.
  DominationWitness optimal_mu(Index p, Index q, int n) const;

  // Running sup of the log ratio at j = J/1000, J/100, J/10, J.
  std::vector<double> decade_sups(Index p, Index q, int n) const;
  // Smallest probed j with b_{j,p} > 0 = b_{j,q} and a_j != 0.
  std::optional<Index> domination_gap(Index p, Index q) const;
  double log_entry(Index j, Index k) const { return column(k)[static_cast<std::size_t>(j - 1)]; }

  // Running sup of |a_j| on the window, and on the first tenth of it.
  double log_symbol_sup() const;
  double log_symbol_sup_head() const;
  Index symbol_sup_index() const;
  const std::vector<double>& log_abs_symbol() const { return log_a_; }

  const DiagonalOperator& op() const { return op_; }
  const SpaceDescriptor& space() const { return space_; }
  Index j_max() const { return j_max_; }

 private:
  const std::vector<double>& column(Index k) const;

  DiagonalOperator op_;
  SpaceDescriptor space_;
  Index j_max_;
  std::vector<double> log_a_;  // index j-1
  mutable std::mutex mu_;
  mutable std::map<Index, std::unique_ptr<std::vector<double>>> columns_;
};

DominationWitness optimal_mu(const DiagonalOperator& a, const SpaceDescriptor& space, Index p, Index q, int n,
                             Index j_max = kDefaultJMax);

struct ContinuityResult {
  bool certified = false;
  DominationWitness witness;
  std::string reason;
};

ContinuityResult continuity_check(const Operator& a, const SpaceDescriptor& space, Index p,
                                  const std::vector<Index>& q_candidates, Index j_max = kDefaultJMax);
ContinuityResult continuity_check(const DiagonalScan& scan, Index p, const std::vector<Index>& q_candidates);

}  // namespace sglab
