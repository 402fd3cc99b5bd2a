#include "sglab/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sglab {

namespace {

// Strict growth over the last three steps of a checkpoint sequence.
bool grows(const std::vector<Evidence>& pts, double tol) {
  if (pts.size() < 4) return false;
  for (std::size_t i = pts.size() - 3; i < pts.size(); ++i)
    if (!(pts[i].log_value > pts[i].log_bound + tol)) return false;
  return true;
}

std::vector<Evidence> as_steps(const std::vector<std::pair<double, double>>& checkpoints) {
  std::vector<Evidence> out;
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    out.push_back({checkpoints[i].first, checkpoints[i].second, checkpoints[i - 1].second});
  return out;
}

Index as_index(double p) { return static_cast<Index>(std::llround(p)); }

}  // namespace

KotheDiagonalModel::KotheDiagonalModel(DiagonalOperator a, SpaceDescriptor space, Index j_max, Index k_max)
    : scan_(std::move(a), std::move(space), j_max),
      k_max_(k_max),
      norm_(has_continuous_norm(scan_.space().matrix, j_max, k_max)) {}

std::string KotheDiagonalModel::name() const {
  std::ostringstream os;
  os << scan_.space().matrix.label() << ",r=";
  if (scan_.space().sup_norm())
    os << "inf";
  else
    os << scan_.space().order_r;
  os << ":diag(" << scan_.op().label() << ")";
  return os.str();
}

std::vector<double> KotheDiagonalModel::q_candidates(double p) const {
  std::vector<double> out;
  for (int i = 0; i <= 16; ++i) out.push_back(p + i);
  return out;
}

std::vector<Evidence> KotheDiagonalModel::extended_ratios(Index p, Index q, int n) const {
  std::vector<Evidence> out;
  const double start = std::log10(static_cast<double>(scan_.j_max()));
  const auto& m = scan_.space().matrix;
  for (int e = static_cast<int>(std::floor(4.0 * start)) + 1; e <= 1200; ++e) {
    double j = std::floor(std::pow(10.0, e / 4.0));
    double v = 0.0;
    try {
      double bp = m.log_entry(j, p);
      if (bp == kNegInf) continue;
      double bq = m.log_entry(j, q);
      double la = n == 0 ? 0.0 : n * std::log(std::abs(scan_.op().symbol(j)));
      if (la == kNegInf) continue;
      v = la + bp - bq;
    } catch (const Error&) {
      break;
    }
    if (!std::isfinite(v)) break;
    out.push_back({j, v, kNegInf});
  }
  return out;
}

MuProbe KotheDiagonalModel::probe(double pd, double qd, int n) const {
  const Index p = as_index(pd), q = as_index(qd);
  MuProbe out;
  out.exact = true;
  if (n > 0) {
    if (auto gap = scan_.domination_gap(p, q)) {
      out.unbounded = true;
      out.log_mu = kInf;
      out.witness_index = static_cast<double>(*gap);
      out.growth.push_back({static_cast<double>(*gap), n * std::log(std::abs(scan_.op().symbol(*gap))) +
                                                           scan_.log_entry(*gap, p),
                            kNegInf});
      return out;
    }
  }
  auto w = scan_.optimal_mu(p, q, n);
  out.log_mu = w.log_mu;
  out.stabilized = w.stabilized;
  out.witness_index = static_cast<double>(w.attaining_j);
  if (out.stabilized) return out;

  auto decades = scan_.decade_sups(p, q, n);
  std::vector<std::pair<double, double>> pts;
  double j = static_cast<double>(std::max<Index>(scan_.j_max() / 1000, 1));
  for (double v : decades) {
    pts.emplace_back(j, v);
    j *= 10.0;
  }
  double running = decades.back();
  double next_decade = pts.back().first * 10.0;
  for (const auto& e : extended_ratios(p, q, n)) {
    if (e.log_value > running) {
      running = e.log_value;
      out.witness_index = e.index;
    }
    if (e.index >= next_decade * (1 - 1e-9)) {
      pts.emplace_back(e.index, running);
      next_decade *= 10.0;
    }
  }
  if (running > out.log_mu) {
    out.log_mu = running;
    out.exact = false;
  }
  out.growth = as_steps(pts);
  out.unbounded = !dominating(pd, qd) && grows(out.growth, kStabilizationTol * std::max(1, n));
  return out;
}

std::optional<Dominating> KotheDiagonalModel::dominating(double pd, double qd) const {
  const Index p = as_index(pd), q = as_index(qd);
  if (q < p) return std::nullopt;
  const auto& space = scan_.space();
  const auto& a = scan_.op();
  if (auto cs = space.matrix.column_support(p); cs && *cs <= scan_.j_max()) {
    double mu = 0.0, log_M = kNegInf;
    for (Index j = 1; j <= *cs; ++j) {
      double bp = scan_.log_entry(j, p);
      if (bp == kNegInf) continue;
      double bq = scan_.log_entry(j, q);
      if (bq == kNegInf) return std::nullopt;
      mu = std::max(mu, std::abs(a.symbol(static_cast<double>(j))));
      log_M = std::max(log_M, bp - bq);
    }
    if (log_M == kNegInf) log_M = 0.0;
    return Dominating{LogMuSequence::from_log_geometric(log_M, mu > 0.0 ? std::log(mu) : kNegInf).with_pair(pd, qd),
                      false};
  }
  const auto& b = a.bound();
  if (!b) return std::nullopt;
  if (b->bounded())
    return Dominating{LogMuSequence::from_log_geometric(0.0, b->c0 > 0.0 ? std::log(b->c0) : kNegInf).with_pair(pd, qd),
                      b->probed};
  if (space.matrix.power_weights() && b->c1 == 0.0 && b->c2 > 0.0 && q > p) {
    // (c0 + c2 log j)^n j^{-d} <= e^{d c0/c2} c2^n (n/d)^n e^{-n}
    const double d = static_cast<double>(q - p);
    return Dominating{LogMuSequence::power_form(std::exp(d * b->c0 / b->c2), d / b->c2).with_pair(pd, qd), b->probed};
  }
  return std::nullopt;
}

TaylorDiffModel::TaylorDiffModel(double domain_radius) : radius_(domain_radius) {
  if (!(domain_radius > 0.0)) throw Error(Errc::config, "domain radius must be positive");
}

std::string TaylorDiffModel::name() const { return radius_ == kInf ? "hc:d/dz" : "hd:d/dz"; }

std::vector<double> TaylorDiffModel::default_p_list() const {
  if (radius_ == kInf) return {1, 2, 5};
  return {0.5 * radius_, 0.75 * radius_};
}

std::vector<double> TaylorDiffModel::q_candidates(double p) const {
  std::vector<double> out;
  if (radius_ == kInf) {
    out.push_back(p + 0.5);
    for (double s = 1; s <= 1024; s *= 2) out.push_back(p + s);
  } else {
    for (double f : {0.25, 0.5, 0.75, 0.9, 0.99}) out.push_back(p + (radius_ - p) * f);
  }
  return out;
}

MuProbe TaylorDiffModel::probe(double p, double q, int n) const {
  if (!(p > 0.0) || !(p < radius_) || !(q > 0.0) || !(q < radius_))
    throw Error(Errc::config, "seminorm radii must lie in (0, " + std::to_string(radius_) + ")");
  // ||D^n z^m||_p / ||z^m||_q = m!/(m-n)! p^{m-n} / q^m
  auto ratio = [&](double m) {
    return log_factorial(static_cast<long>(m)) - log_factorial(static_cast<long>(m) - n) + (m - n) * std::log(p) -
           m * std::log(q);
  };
  MuProbe out;
  out.stabilized = true;
  if (n == 0) {
    out.log_mu = q >= p ? 0.0 : kInf;
    out.unbounded = q < p;
    return out;
  }
  if (q <= p) {
    out.unbounded = true;
    out.stabilized = false;
    std::vector<std::pair<double, double>> pts;
    for (double m = 10; m <= 1e5; m *= 10) pts.emplace_back(m + n, ratio(m + n));
    out.growth = as_steps(pts);
    out.log_mu = kInf;
    out.witness_index = pts.back().first;
    return out;
  }
  // ratio(m+1)/ratio(m) = (m+1)p / ((m+1-n)q) is decreasing: unimodal in m
  double peak = std::max<double>(n, std::floor(n * q / (q - p)));
  peak = std::min(peak, 1e15);
  out.log_mu = kNegInf;
  for (double m = std::max<double>(n, peak - 2); m <= peak + 2; ++m) {
    double v = ratio(m);
    if (v > out.log_mu) {
      out.log_mu = v;
      out.witness_index = m;
    }
  }
  return out;
}

std::optional<Dominating> TaylorDiffModel::dominating(double p, double q) const {
  if (!(p > 0.0) || !(q > p) || !(q < radius_)) return std::nullopt;
  return Dominating{LogMuSequence::cauchy(p, q).with_pair(p, q), false};
}

std::vector<double> TrigDiffModel::q_candidates(double p) const {
  std::vector<double> out;
  for (int i = 0; i <= 16; ++i) out.push_back(p + i);
  return out;
}

MuProbe TrigDiffModel::probe(double p, double q, int n) const {
  // ||A^n sin(k.)||_p / ||sin(k.)||_q = k^{n+p-q}
  const double e = n + p - q;
  MuProbe out;
  if (e <= 0.0) {
    out.log_mu = 0.0;
    out.stabilized = true;
    out.witness_index = 1;
    return out;
  }
  std::vector<std::pair<double, double>> pts;
  for (double k = 1; k <= 1e4; k *= 10) pts.emplace_back(k, e * std::log(k));
  out.growth = as_steps(pts);
  out.unbounded = true;
  out.log_mu = kInf;
  out.witness_index = 1e4;
  return out;
}

}  // namespace sglab
