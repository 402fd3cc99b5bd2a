#pragma once

// Operator/space pairs the classifier understands. Each model knows its
// seminorm family, a witness family attaining (or bounding from below) the
// least domination constants, and closed-form upper bounds where available.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sglab/mu_calculus.hpp"
#include "sglab/operators.hpp"
#include "sglab/seqspace.hpp"

namespace sglab {

// One entry of divergence evidence: log_value > log_bound at index.
struct Evidence {
  double index = 0.0;
  double log_value = 0.0;
  double log_bound = 0.0;
};

struct MuProbe {
  double log_mu = kNegInf;  // sup of witness ratios: exact least constant when exact, else a lower bound
  bool exact = false;
  bool stabilized = false;
  bool unbounded = false;    // divergence along the witness family
  double witness_index = 0;  // j, m or k attaining the sup
  std::vector<Evidence> growth;
};

struct Dominating {
  LogMuSequence mu;
  bool probed = false;  // relies on a growth bound fitted on a finite window
};

class OperatorModel {
 public:
  virtual ~OperatorModel() = default;

  virtual std::string name() const = 0;
  // "e_j", "z^m", "sin(k x)"
  virtual std::string witness_family() const = 0;
  virtual std::vector<double> default_p_list() const = 0;
  virtual std::vector<double> q_candidates(double p) const = 0;
  // Least constant for p(A^n x) <= mu_n q(x) over the witness family.
  virtual MuProbe probe(double p, double q, int n) const = 0;
  // Certified upper bound mu_n for the pair, all n.
  virtual std::optional<Dominating> dominating(double p, double q) const = 0;
};

class KotheDiagonalModel : public OperatorModel {
 public:
  KotheDiagonalModel(DiagonalOperator a, SpaceDescriptor space, Index j_max = kDefaultJMax,
                     Index k_max = kDefaultKMax);

  std::string name() const override;
  std::string witness_family() const override { return "e_j"; }
  std::vector<double> default_p_list() const override { return {1, 2, 3}; }
  std::vector<double> q_candidates(double p) const override;
  MuProbe probe(double p, double q, int n) const override;
  std::optional<Dominating> dominating(double p, double q) const override;

  const DiagonalScan& scan() const { return scan_; }
  const SpaceDescriptor& space() const { return scan_.space(); }
  const DiagonalOperator& op() const { return scan_.op(); }
  const ContinuousNormResult& continuous_norm() const { return norm_; }
  Index k_max() const { return k_max_; }

  // Lower bound for log sup_j |a_j|^n b_{j,p}/b_{j,q} on the sparse grid
  // j = 10^{e/4} beyond the window, up to 1e300.
  std::vector<Evidence> extended_ratios(Index p, Index q, int n) const;

 private:
  DiagonalScan scan_;
  Index k_max_;
  ContinuousNormResult norm_;
};

// Taylor differentiation on H(D_rho) with sup-norms on |z| <= r, r < rho
// (rho = 1 for the unit disc, +inf for the entire functions).
class TaylorDiffModel : public OperatorModel {
 public:
  explicit TaylorDiffModel(double domain_radius);

  std::string name() const override;
  std::string witness_family() const override { return "z^m"; }
  std::vector<double> default_p_list() const override;
  std::vector<double> q_candidates(double p) const override;
  MuProbe probe(double p, double q, int n) const override;
  std::optional<Dominating> dominating(double p, double q) const override;

  double domain_radius() const { return radius_; }

 private:
  double radius_;
};

// d/dx on the trig-polynomial model of C^inf with ||f||_p = sup_{[0,2pi], alpha<=p} |f^(alpha)|.
class TrigDiffModel : public OperatorModel {
 public:
  std::string name() const override { return "cinfty:d/dx"; }
  std::string witness_family() const override { return "sin(k x)"; }
  std::vector<double> default_p_list() const override { return {0, 1, 2}; }
  std::vector<double> q_candidates(double p) const override;
  MuProbe probe(double p, double q, int n) const override;
  std::optional<Dominating> dominating(double, double) const override { return std::nullopt; }
};

}  // namespace sglab
