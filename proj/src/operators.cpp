#include "sglab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sglab {

DiagonalOperator::DiagonalOperator(Rule rule, std::optional<SymbolBound> bound, std::string label)
    : rule_(std::move(rule)), bound_(bound), label_(std::move(label)) {}

DiagonalOperator DiagonalOperator::from_expr(const Expression& a_expr, Index probe_upto) {
  Rule rule = [a_expr](double j) { return Complex(a_expr.eval({.j = j})); };
  auto bound = fit_symbol_bound(rule, probe_upto);
  return {std::move(rule), bound, a_expr.print()};
}

DiagonalOperator DiagonalOperator::constant(Complex c) {
  std::ostringstream label;
  label << c.real();
  if (c.imag() != 0.0) label << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
  return {[c](double) { return c; }, SymbolBound{std::abs(c), 0.0, 0.0, false}, label.str()};
}

DiagonalOperator DiagonalOperator::index_symbol() {
  return {[](double j) { return Complex(j); }, SymbolBound{0.0, 1.0, 0.0, false}, "j"};
}

DiagonalOperator DiagonalOperator::log_symbol() {
  return {[](double j) { return Complex(std::log(j)); }, SymbolBound{0.0, 0.0, 1.0, false}, "log(j)"};
}

std::string describe(const Operator& op) {
  if (const auto* d = std::get_if<DiagonalOperator>(&op)) return "diagonal(" + d->label() + ")";
  return "taylor_diff";
}

std::optional<SymbolBound> fit_symbol_bound(const DiagonalOperator::Rule& rule, Index upto) {
  upto = std::max<Index>(upto, 20);
  const Index head = upto / 10;
  std::vector<double> mag(static_cast<std::size_t>(upto));
  for (Index j = 1; j <= upto; ++j) mag[static_cast<std::size_t>(j - 1)] = std::abs(rule(static_cast<double>(j)));

  auto stable_sup = [&](auto weight, Index from) -> std::optional<double> {
    double all = 0.0, first = 0.0;
    for (Index j = from; j <= upto; ++j) {
      double v = mag[static_cast<std::size_t>(j - 1)] / weight(static_cast<double>(j));
      all = std::max(all, v);
      if (j <= head) first = std::max(first, v);
    }
    if (all == 0.0) return 0.0;
    if (first > 0.0 && std::log(all) - std::log(first) <= kStabilizationTol) return all * (1.0 + kStabilizationTol);
    return std::nullopt;
  };

  if (auto c0 = stable_sup([](double) { return 1.0; }, 1)) return SymbolBound{*c0, 0.0, 0.0, true};
  if (auto c2 = stable_sup([](double j) { return std::log(j); }, 2)) return SymbolBound{mag[0], 0.0, *c2, true};
  if (auto c1 = stable_sup([](double j) { return j; }, 1)) return SymbolBound{0.0, *c1, 0.0, true};
  return std::nullopt;
}

namespace {

// Adds n * log(bound on |a_j|) to an envelope in the (c, rho, j^g) family.
Envelope scale_envelope(Envelope env, const SymbolBound& b, int n) {
  if (n == 0) return env;
  double nn = static_cast<double>(n);
  if (b.bounded()) {
    env.log_c += b.c0 > 0.0 ? nn * std::log(b.c0) : kNegInf;
  } else if (b.c1 > 0.0) {
    env.log_c += nn * std::log(b.c0 + b.c1 + b.c2);
    env.g += nn;
  } else {
    // log j <= 2 sqrt(j) / e
    env.log_c += nn * std::log(b.c0 + b.c2 * 2.0 / std::exp(1.0));
    env.g += 0.5 * nn;
  }
  if (std::isnan(env.log_c)) env.log_c = kNegInf;
  return env;
}

CoefficientVector diagonal_power(const DiagonalOperator& a, int n, const CoefficientVector& x) {
  const Envelope& src = x.envelope();
  Envelope env = src;
  if (src.support && *src.support <= 1000000) {
    double m = 0.0;
    for (Index j = 1; j <= *src.support; ++j) m = std::max(m, std::abs(a.symbol(static_cast<double>(j))));
    env.log_c = m > 0.0 ? src.log_c + n * std::log(m) : (n == 0 ? src.log_c : kNegInf);
  } else if (a.bound()) {
    env = scale_envelope(src, *a.bound(), n);
  } else {
    throw Error(Errc::image_envelope,
                "symbol '" + a.label() + "' has no growth bound; image of '" + x.label() + "' not certifiable");
  }
  std::string label = n == 1 ? "A(" + x.label() + ")" : "A^" + std::to_string(n) + "(" + x.label() + ")";
  return {[a, n, x](Index j) {
            Complex v = x(j);
            if (v == 0.0) return v;
            const Complex aj = a.symbol(static_cast<double>(j));
            for (int i = 0; i < n; ++i) v = aj * v;
            return v;
          },
          env, label};
}

CoefficientVector taylor_power(int n, const CoefficientVector& x) {
  Envelope env = x.envelope();
  if (env.support) {
    const Index s = *env.support;
    // |(A^n x)_j| = j(j+1)...(j+n-1) |x_{j+n}| with j + n <= s
    double lf = 0.0;
    for (Index i = 1; i <= n; ++i) lf += std::log(static_cast<double>(std::max<Index>(s - i, 1)));
    double m = kNegInf;
    for (Index j = 1; j <= s; ++j) m = std::max(m, x.envelope().log_bound(static_cast<double>(j)));
    env.support = std::max<Index>(s - n, 0);
    env.log_c = *env.support == 0 ? kNegInf : m + lf;
    env.log_rho = 0.0;
    env.g = 0.0;
  } else {
    for (int i = 0; i < n; ++i) {
      env.log_c += env.log_rho + std::max(env.g, 0.0) * std::log(2.0);
      env.g += 1.0;
    }
  }
  std::string label = "D^" + std::to_string(n) + "(" + x.label() + ")";
  return {[n, x](Index j) {
            Complex v = x(j + n);
            for (int i = n; i-- > 0;) v *= static_cast<double>(j + i);
            return v;
          },
          env, label};
}

}  // namespace

CoefficientVector apply(const Operator& op, const CoefficientVector& x) { return apply_power(op, 1, x); }

CoefficientVector apply_power(const Operator& op, int n, const CoefficientVector& x) {
  if (n < 0) throw Error(Errc::config, "power must be >= 0");
  if (n == 0) return x;
  if (const auto* d = std::get_if<DiagonalOperator>(&op)) return diagonal_power(*d, n, x);
  return taylor_power(n, x);
}

DiagonalScan::DiagonalScan(DiagonalOperator op, SpaceDescriptor space, Index j_max)
    : op_(std::move(op)), space_(std::move(space)), j_max_(j_max) {
  if (j_max_ < 10) throw Error(Errc::config, "scan window must be >= 10");
  log_a_.resize(static_cast<std::size_t>(j_max_));
  for (Index j = 1; j <= j_max_; ++j) {
    double m = std::abs(op_.symbol(static_cast<double>(j)));
    log_a_[static_cast<std::size_t>(j - 1)] = m > 0.0 ? std::log(m) : kNegInf;
  }
}

const std::vector<double>& DiagonalScan::column(Index k) const {
  std::lock_guard lock(mu_);
  auto it = columns_.find(k);
  if (it != columns_.end()) return *it->second;
  auto col = std::make_unique<std::vector<double>>(static_cast<std::size_t>(j_max_));
  Index upto = j_max_;
  if (auto cs = space_.matrix.column_support(k)) upto = std::clamp<Index>(*cs, 0, j_max_);
  for (Index j = 1; j <= j_max_; ++j)
    (*col)[static_cast<std::size_t>(j - 1)] = j <= upto ? space_.matrix.log_entry(static_cast<double>(j), k) : kNegInf;
  auto& ref = *col;
  columns_.emplace(k, std::move(col));
  return ref;
}

DominationWitness DiagonalScan::optimal_mu(Index p, Index q, int n) const {
  if (p < 1 || q < 1 || n < 0) throw Error(Errc::config, "optimal_mu needs p, q >= 1 and n >= 0");
  const auto& bp = column(p);
  const auto& bq = column(q);
  DominationWitness w;
  w.p = static_cast<double>(p);
  w.q = static_cast<double>(q);
  w.n = n;
  const Index head = j_max_ / 10;
  double head_sup = kNegInf;
  const double nn = static_cast<double>(n);
  for (Index j = 1; j <= j_max_; ++j) {
    const auto i = static_cast<std::size_t>(j - 1);
    if (bp[i] == kNegInf) continue;
    double la = n == 0 ? 0.0 : nn * log_a_[i];
    if (la == kNegInf) continue;
    if (bq[i] == kNegInf)
      throw Error(Errc::no_domination, "no domination: witness j=" + std::to_string(j) + " has b(j,p) > 0 = b(j,q)");
    double v = la + bp[i] - bq[i];
    if (v > w.log_mu) {
      w.log_mu = v;
      w.attaining_j = j;
    }
    if (j == head) head_sup = w.log_mu;
  }
  if (head_sup == kNegInf && head > 0 && w.attaining_j <= head) head_sup = w.log_mu;
  if (w.log_mu == kNegInf)
    w.stabilized = true;
  else
    w.stabilized = w.log_mu - head_sup <= kStabilizationTol * std::max(1.0, nn);
  return w;
}

std::vector<double> DiagonalScan::decade_sups(Index p, Index q, int n) const {
  const auto& bp = column(p);
  const auto& bq = column(q);
  std::vector<double> out;
  Index next = std::max<Index>(j_max_ / 1000, 1);
  double sup = kNegInf;
  for (Index j = 1; j <= j_max_; ++j) {
    const auto i = static_cast<std::size_t>(j - 1);
    if (bp[i] != kNegInf && (n == 0 || log_a_[i] != kNegInf)) {
      double v = (n == 0 ? 0.0 : n * log_a_[i]) + bp[i] - bq[i];
      sup = std::max(sup, v);
    }
    if (j == next) {
      out.push_back(sup);
      next *= 10;
    }
  }
  if (out.size() < 4) out.push_back(sup);
  return out;
}

std::optional<Index> DiagonalScan::domination_gap(Index p, Index q) const {
  const auto& bp = column(p);
  const auto& bq = column(q);
  for (Index j = 1; j <= j_max_; ++j) {
    const auto i = static_cast<std::size_t>(j - 1);
    if (bp[i] != kNegInf && bq[i] == kNegInf && log_a_[i] != kNegInf) return j;
  }
  return std::nullopt;
}

double DiagonalScan::log_symbol_sup() const { return *std::max_element(log_a_.begin(), log_a_.end()); }

double DiagonalScan::log_symbol_sup_head() const {
  return *std::max_element(log_a_.begin(), log_a_.begin() + j_max_ / 10);
}

Index DiagonalScan::symbol_sup_index() const {
  return static_cast<Index>(std::max_element(log_a_.begin(), log_a_.end()) - log_a_.begin()) + 1;
}

DominationWitness optimal_mu(const DiagonalOperator& a, const SpaceDescriptor& space, Index p, Index q, int n,
                             Index j_max) {
  return DiagonalScan(a, space, j_max).optimal_mu(p, q, n);
}

ContinuityResult continuity_check(const DiagonalScan& scan, Index p, const std::vector<Index>& q_candidates) {
  ContinuityResult res;
  for (Index q : q_candidates) {
    try {
      auto w = scan.optimal_mu(p, q, 1);
      if (w.stabilized) {
        res.certified = true;
        res.witness = w;
        return res;
      }
    } catch (const Error& e) {
      if (e.code() != Errc::no_domination) throw;
    }
  }
  res.reason = "continuity not certified for p=" + std::to_string(p);
  return res;
}

ContinuityResult continuity_check(const Operator& a, const SpaceDescriptor& space, Index p,
                                  const std::vector<Index>& q_candidates, Index j_max) {
  const auto* d = std::get_if<DiagonalOperator>(&a);
  if (!d) throw Error(Errc::config, "continuity_check on a Köthe space needs a diagonal operator");
  return continuity_check(DiagonalScan(*d, space, j_max), p, q_candidates);
}

}  // namespace sglab
