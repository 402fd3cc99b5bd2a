#pragma once

// T(t)x = sum_n t^n A^n x / n! by truncated series with certified tails
//   p(T(t)x - S_N(t)x) <= q(x) * sum_{n>N} mu_n t^n / n!
// where (p, q, mu) comes from a certificate link.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sglab/models.hpp"
#include "sglab/mu_calculus.hpp"
#include "sglab/operators.hpp"
#include "sglab/seqspace.hpp"

namespace sglab {

using SeminormFn = std::function<SeminormValue(const CoefficientVector&, double index)>;

SeminormFn kothe_norm(const SpaceDescriptor& space, double tol = 1e-13);

// p(A^n x) <= mu_n q(x)
struct Link {
  double p = 0.0;
  double q = 0.0;
  LogMuSequence mu;
};

struct EvaluationPlan {
  SeminormFn norm;
  std::vector<Link> chain;  // chain[k].q == chain[k+1].p
  double R = kInf;          // certified horizon
  double tol = 1e-10;
  int n_cap = 2000;
  Index coord_window = 0;  // > 0: diagonal fallback to coordinates 1..window when q(x) is not certifiable

  double p_target() const { return chain.at(0).p; }
};

// Chain p = s_0 -> s_1 -> ... of `links` steps, each with a dominating
// mu-sequence of radius > R taken from the model's q-candidates.
EvaluationPlan plan_for(const OperatorModel& model, SeminormFn norm, double p, double R, int links, double tol = 1e-10);

struct TruncatedSemigroupValue {
  CoefficientVector vector = CoefficientVector::zero();
  int n_used = 0;
  double p_target = 0.0;
  double tail = 0.0;
  double t = 0.0;
  std::string scope = "full";  // or "coordinate window"
  double rounding = 0.0;       // floating-point allowance on top of the truncation tail
};

// Partial sum sum_{n<=N} t^n A^n x / n!, coefficientwise.
CoefficientVector partial_sum(const Operator& a, const CoefficientVector& x, double t, int N);

TruncatedSemigroupValue evaluate(const Operator& a, const CoefficientVector& x, double t, const EvaluationPlan& plan);
TruncatedSemigroupValue evaluate_group(const Operator& a, const CoefficientVector& x, double t,
                                       const EvaluationPlan& plan);

CoefficientVector diagonal_oracle(const DiagonalOperator& a, const CoefficientVector& x, double t);

// T(t) = T(R)^n T(w), t = nR + w; needs n + 1 chain links.
TruncatedSemigroupValue evaluate_piecewise(const Operator& a, const CoefficientVector& x, double t, double R,
                                           const EvaluationPlan& plan);

struct LawReport {
  double residual = 0.0;
  double bound = 0.0;
  bool pass() const { return residual <= bound; }
};

LawReport verify_semigroup_law(const Operator& a, const CoefficientVector& x, double t, double s,
                               const EvaluationPlan& plan);

struct GeneratorRow {
  double h = 0.0;
  double residual = 0.0;
  double bound = 0.0;  // q(x) ((f(h) - f(0))/h - mu_1) + tail / h
};

struct GeneratorReport {
  std::vector<GeneratorRow> rows;
  bool bounded = true;       // residual <= bound at every h
  bool linear_decay = true;  // residual(h) <= 0.55 residual(2h) above the rounding floor
  bool pass() const { return bounded && linear_decay; }
};

GeneratorReport verify_generator(const Operator& a, const CoefficientVector& x, const std::vector<double>& h_list,
                                 const EvaluationPlan& plan);

struct ModulusRow {
  double h = 0.0;
  double modulus = 0.0;    // sup_x p(T(t)x - T(t+h)x)
  double bound = 0.0;      // f(t) sup_x q(x - T(h)x) + tails
  double bound_k = 0.0;    // f(t) K (f'(h) - f'(0)), K = sup_x q'(x)
};

struct ModulusReport {
  std::vector<ModulusRow> rows;
  bool bounded = true;
  bool vanishing = true;  // nonincreasing along the list and last < first
  bool pass() const { return bounded && vanishing; }
};

ModulusReport continuity_modulus(const Operator& a, const std::vector<CoefficientVector>& xs, double t,
                                 const std::vector<double>& h_list, const EvaluationPlan& plan);

}  // namespace sglab
