#pragma once

// Certificates and refutations for the boundedness hierarchy
//   A-BDD  : exists mu, forall p, exists q:  p(A^n x) <= mu^n q(x)
//   M-TOP  : forall p, exists q, mu:         p(A^n x) <= mu^n q(x)
//   TOP    : forall p, exists q, forall n, exists mu_n
//   NEW1   : forall R, p, exists q with sum mu_n R^n / n! < inf
//   NEW2   : exists R, forall p, exists q with the same
//   A-BDD-GEN : A-BDD with an extra constant M
// The forall-p quantifier is sampled on a p-list; exists-q is searched over
// q-candidates. Every verdict carries its scope.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sglab/models.hpp"

namespace sglab {

enum class Condition { a_bdd, m_top, top, new1, new2, a_bdd_gen };

const char* to_string(Condition c);
Condition parse_condition(const std::string& text);

inline constexpr const char* kScopeProbed = "probed window";
inline constexpr const char* kScopeClosed = "closed form";

struct Verdict {
  Condition condition = Condition::top;
  Status status = Status::inconclusive;
  std::string scope = kScopeProbed;
  double p = 0.0;
  std::optional<double> R;  // +inf: every R
  std::optional<double> q;
  std::optional<LogMuSequence> mu;
  std::optional<double> M;
  std::optional<double> mu_const;
  std::string witness;
  std::vector<Evidence> evidence;
  std::string note;
};

struct ProbeConfig {
  int n_probe = 64;
  std::vector<double> p_list;        // empty: model default
  std::vector<double> q_candidates;  // empty: model default per p
  std::vector<double> R_list{1, 5, 10};
  std::vector<double> R_grid{0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 5, 10};
  std::vector<double> mu_grid;  // empty: 2^-4 .. 2^16
};

std::vector<double> default_mu_grid();

// Runs checkers against one model, caching per-(p,q) analyses between them.
class Classifier {
 public:
  Classifier(const OperatorModel& model, ProbeConfig cfg);

  std::vector<Verdict> a_bounded();
  std::vector<Verdict> m_top();
  std::vector<Verdict> topologizable();
  std::vector<Verdict> new1();
  std::vector<Verdict> new2();

  // All conditions, sorted by (condition, p, R).
  std::vector<Verdict> all();

  std::vector<double> p_list() const;
  std::vector<double> q_list(double p) const;

 private:
  struct PairResult {
    Status status = Status::inconclusive;
    std::optional<LogMuSequence> mu;
    bool probed = true;
    std::vector<Evidence> evidence;
    std::string note;
  };

  const PairResult& mtop_pair(double p, double q);
  const PairResult& top_pair(double p, double q);
  PairResult new1_pair(double p, double q, double R);
  Verdict new1_for(double p, double R);
  std::vector<Verdict> kothe_a_bounded(const KotheDiagonalModel& km);

  const OperatorModel& model_;
  ProbeConfig cfg_;
  std::map<std::pair<double, double>, PairResult> mtop_cache_;
  std::map<std::pair<double, double>, PairResult> top_cache_;
  std::map<std::tuple<double, double, int>, MuProbe> probe_cache_;
  const MuProbe& probe(double p, double q, int n);
};

std::vector<Verdict> check_a_bounded(const OperatorModel& m, const ProbeConfig& cfg = {});
std::vector<Verdict> check_m_top(const OperatorModel& m, const ProbeConfig& cfg = {});
std::vector<Verdict> check_topologizable(const OperatorModel& m, const ProbeConfig& cfg = {});
std::vector<Verdict> check_new1(const OperatorModel& m, const ProbeConfig& cfg = {});
std::vector<Verdict> check_new2(const OperatorModel& m, const ProbeConfig& cfg = {});

// Operator-level status: refuted if any record is, certified if all are.
std::optional<Status> aggregate(const std::vector<Verdict>& vs, Condition c);

struct ClosureReport {
  bool consistent = true;
  std::vector<std::string> violations;
  std::vector<Verdict> derived;
};

ClosureReport implication_closure(const std::vector<Verdict>& vs);

void sort_verdicts(std::vector<Verdict>& vs);

struct Cor44Construction {
  std::vector<std::pair<Index, Index>> j_n;  // (n, j_n)
  DiagonalOperator op;
  std::vector<std::pair<Condition, Status>> expected;
};

// Diagonal operator with a_{j_n} = n on the rows j_n where column n+1 first
// becomes positive. Error{Errc::inapplicable} when a continuous norm exists.
Cor44Construction construct_cor44_operator(const KotheMatrix& b, Index j_max = kDefaultJMax,
                                           Index k_max = kDefaultKMax);

}  // namespace sglab
