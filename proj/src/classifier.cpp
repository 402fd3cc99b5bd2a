#include "sglab/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sglab {

const char* to_string(Condition c) {
  switch (c) {
    case Condition::a_bdd: return "A-BDD";
    case Condition::m_top: return "M-TOP";
    case Condition::top: return "TOP";
    case Condition::new1: return "NEW1";
    case Condition::new2: return "NEW2";
    case Condition::a_bdd_gen: return "A-BDD-GEN";
  }
  return "?";
}

Condition parse_condition(const std::string& text) {
  for (auto c : {Condition::a_bdd, Condition::m_top, Condition::top, Condition::new1, Condition::new2,
                 Condition::a_bdd_gen})
    if (text == to_string(c)) return c;
  throw Error(Errc::config, "unknown condition '" + text + "'");
}

std::vector<double> default_mu_grid() {
  std::vector<double> g;
  for (int e = -4; e <= 16; ++e) g.push_back(std::ldexp(1.0, e));
  return g;
}

namespace {

const int kDecadeN[] = {1, 10, 100, 1000};

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

bool is_geometric(const LogMuSequence& s) { return s.origin() == MuOrigin::geometric; }

void fill_geometric(Verdict& v, const LogMuSequence& s) {
  v.M = std::exp(s.log_mu(0));
  v.mu_const = std::exp(s.log_mu(1) - s.log_mu(0));
}

bool grows(const std::vector<Evidence>& pts, double tol) {
  if (pts.size() < 3) return false;
  for (std::size_t i = pts.size() - 3; i < pts.size(); ++i)
    if (!(pts[i].log_value > pts[i].log_bound + tol)) return false;
  return true;
}

}  // namespace

Classifier::Classifier(const OperatorModel& model, ProbeConfig cfg) : model_(model), cfg_(std::move(cfg)) {
  if (cfg_.n_probe < 1) throw Error(Errc::config, "N_probe must be >= 1");
  if (cfg_.mu_grid.empty()) cfg_.mu_grid = default_mu_grid();
}

std::vector<double> Classifier::p_list() const {
  return cfg_.p_list.empty() ? model_.default_p_list() : cfg_.p_list;
}

std::vector<double> Classifier::q_list(double p) const {
  if (cfg_.q_candidates.empty()) return model_.q_candidates(p);
  std::vector<double> out;
  for (double q : cfg_.q_candidates)
    if (q >= p) out.push_back(q);
  return out;
}

const MuProbe& Classifier::probe(double p, double q, int n) {
  auto key = std::make_tuple(p, q, n);
  auto it = probe_cache_.find(key);
  if (it != probe_cache_.end()) return it->second;
  return probe_cache_.emplace(key, model_.probe(p, q, n)).first->second;
}

const Classifier::PairResult& Classifier::mtop_pair(double p, double q) {
  auto key = std::make_pair(p, q);
  if (auto it = mtop_cache_.find(key); it != mtop_cache_.end()) return it->second;
  PairResult r;
  auto dom = model_.dominating(p, q);
  if (dom && is_geometric(dom->mu)) {
    r.status = Status::certified;
    r.mu = dom->mu;
    r.probed = dom->probed;
    return mtop_cache_.emplace(key, std::move(r)).first->second;
  }

  // per-n growth of log mu_n / n at n = 1, 10, 100, 1000
  std::vector<double> g;
  bool decades_exact = true;
  for (int n : kDecadeN) {
    const auto& pr = probe(p, q, n);
    decades_exact = decades_exact && pr.exact && pr.stabilized;
    if (pr.unbounded) {
      r.status = Status::refuted;
      r.evidence = pr.growth;
      r.note = "no finite mu_" + std::to_string(n) + " for q=" + num(q);
      return mtop_cache_.emplace(key, std::move(r)).first->second;
    }
    g.push_back(pr.log_mu / n);
  }
  if (std::all_of(g.begin(), g.end(), [](double x) { return std::isfinite(x); })) {
    double d2 = g[2] - g[1], d3 = g[3] - g[2];
    if (d2 > 0.05 && d3 > 0.05 && d3 >= 0.5 * d2) {
      r.status = Status::refuted;
      for (std::size_t i = 1; i < g.size(); ++i)
        r.evidence.push_back({static_cast<double>(kDecadeN[i]), g[i] * kDecadeN[i], g[i - 1] * kDecadeN[i]});
      r.note = "log mu_n / n grows without bound for q=" + num(q);
      return mtop_cache_.emplace(key, std::move(r)).first->second;
    }
  }

  bool all_exact = decades_exact;
  double log_mu = kNegInf;
  double log_m = probe(p, q, 0).log_mu;
  for (int n = 1; n <= cfg_.n_probe; ++n) {
    const auto& pr = probe(p, q, n);
    if (pr.unbounded) {
      r.status = Status::refuted;
      r.evidence = pr.growth;
      r.note = "no finite mu_" + std::to_string(n) + " for q=" + num(q);
      return mtop_cache_.emplace(key, std::move(r)).first->second;
    }
    all_exact = all_exact && pr.exact && pr.stabilized;
    log_mu = std::max(log_mu, pr.log_mu / n);
  }
  for (std::size_t i = 0; i < g.size(); ++i) log_mu = std::max(log_mu, g[i]);
  if (all_exact) {
    r.status = Status::certified;
    r.mu = LogMuSequence::from_log_geometric(std::max(log_m, 0.0), log_mu).with_pair(p, q);
  }
  return mtop_cache_.emplace(key, std::move(r)).first->second;
}

const Classifier::PairResult& Classifier::top_pair(double p, double q) {
  auto key = std::make_pair(p, q);
  if (auto it = top_cache_.find(key); it != top_cache_.end()) return it->second;
  PairResult r;
  if (auto dom = model_.dominating(p, q)) {
    r.status = Status::certified;
    r.mu = dom->mu;
    r.probed = dom->probed;
    return top_cache_.emplace(key, std::move(r)).first->second;
  }
  std::vector<double> log_mu;
  bool all_exact = true;
  for (int n = 0; n <= cfg_.n_probe; ++n) {
    const auto& pr = probe(p, q, n);
    if (pr.unbounded) {
      r.status = Status::refuted;
      r.evidence = pr.growth;
      r.note = "q=" + num(q) + ": sup over " + model_.witness_family() + " unbounded at n=" + std::to_string(n);
      return top_cache_.emplace(key, std::move(r)).first->second;
    }
    all_exact = all_exact && pr.exact && pr.stabilized;
    log_mu.push_back(pr.log_mu);
  }
  if (all_exact) {
    r.status = Status::certified;
    r.mu = LogMuSequence::from_scan(std::move(log_mu)).with_pair(p, q);
  }
  return top_cache_.emplace(key, std::move(r)).first->second;
}

Classifier::PairResult Classifier::new1_pair(double p, double q, double R) {
  PairResult r;
  auto dom = model_.dominating(p, q);
  if (dom) {
    auto rad = dom->mu.analytic_radius();
    if (rad && *rad > R) {
      r.status = Status::certified;
      r.mu = dom->mu;
      r.probed = dom->probed;
      return r;
    }
  }
  const auto& mt = mtop_pair(p, q);
  if (mt.status == Status::certified) return mt;
  if (!dom) {
    const auto& tp = top_pair(p, q);
    if (tp.status == Status::refuted) return tp;
  }
  // lower bounds L_n <= mu_n with L_n R^n / n! >= 1 along n = 1, 10, 100, 1000
  std::vector<Evidence> ev;
  double prev = kNegInf;
  bool diverges = true;
  for (int n : kDecadeN) {
    const auto& pr = probe(p, q, n);
    double term = pr.log_mu + n * std::log(R) - log_factorial(n);
    if (!(term >= 0.0) || term < prev) {
      diverges = false;
      break;
    }
    ev.push_back({static_cast<double>(n), term, 0.0});
    prev = term;
  }
  if (diverges) {
    r.status = Status::refuted;
    r.evidence = std::move(ev);
    r.note = "q=" + num(q) + ": terms mu_n R^n/n! stay >= 1";
  }
  return r;
}

Verdict Classifier::new1_for(double p, double R) {
  Verdict v;
  v.condition = Condition::new1;
  v.p = p;
  v.R = R;
  int refuted = 0;
  std::optional<PairResult> first_refuted;
  double first_q = 0.0;
  auto qs = q_list(p);
  for (double q : qs) {
    auto pr = new1_pair(p, q, R);
    if (pr.status == Status::certified) {
      v.status = Status::certified;
      v.q = q;
      v.mu = pr.mu;
      v.scope = pr.probed ? kScopeProbed : kScopeClosed;
      if (is_geometric(*pr.mu)) fill_geometric(v, *pr.mu);
      return v;
    }
    if (pr.status == Status::refuted) {
      ++refuted;
      if (!first_refuted) {
        first_refuted = pr;
        first_q = q;
      }
    }
  }
  if (!qs.empty() && refuted == static_cast<int>(qs.size())) {
    v.status = Status::refuted;
    v.q = first_q;
    v.evidence = first_refuted->evidence;
    v.witness = model_.witness_family();
    v.note = "every q-candidate fails; " + first_refuted->note;
  } else {
    v.note = "no q-candidate certified at R=" + num(R);
  }
  return v;
}

std::vector<Verdict> Classifier::m_top() {
  std::vector<Verdict> out;
  for (double p : p_list()) {
    Verdict v;
    v.condition = Condition::m_top;
    v.p = p;
    auto qs = q_list(p);
    int refuted = 0;
    const PairResult* shown = nullptr;
    double shown_q = 0.0;
    for (double q : qs) {
      const auto& r = mtop_pair(p, q);
      if (r.status == Status::certified) {
        v.status = Status::certified;
        v.q = q;
        v.mu = r.mu;
        v.scope = r.probed ? kScopeProbed : kScopeClosed;
        fill_geometric(v, *r.mu);
        break;
      }
      if (r.status == Status::refuted) {
        ++refuted;
        bool growth_note = r.note.find("grows") != std::string::npos;
        if (!shown || (growth_note && shown->note.find("grows") == std::string::npos)) {
          shown = &r;
          shown_q = q;
        }
      }
    }
    if (v.status != Status::certified && !qs.empty() && refuted == static_cast<int>(qs.size())) {
      v.status = Status::refuted;
      v.q = shown_q;
      v.evidence = shown->evidence;
      v.witness = model_.witness_family();
      v.note = shown->note;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Verdict> Classifier::topologizable() {
  std::vector<Verdict> out;
  for (double p : p_list()) {
    Verdict v;
    v.condition = Condition::top;
    v.p = p;
    auto qs = q_list(p);
    int refuted = 0;
    const PairResult* shown = nullptr;
    double shown_q = 0.0;
    for (double q : qs) {
      const auto& r = top_pair(p, q);
      if (r.status == Status::certified) {
        v.status = Status::certified;
        v.q = q;
        v.mu = r.mu;
        v.scope = r.probed ? kScopeProbed : kScopeClosed;
        break;
      }
      if (r.status == Status::refuted) {
        ++refuted;
        if (!shown) {
          shown = &r;
          shown_q = q;
        }
      }
    }
    if (v.status != Status::certified && !qs.empty() && refuted == static_cast<int>(qs.size())) {
      v.status = Status::refuted;
      v.q = shown_q;
      v.evidence = shown->evidence;
      v.witness = model_.witness_family();
      v.note = shown->note;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Verdict> Classifier::new1() {
  std::vector<Verdict> out;
  for (double R : cfg_.R_list)
    for (double p : p_list()) out.push_back(new1_for(p, R));
  return out;
}

std::vector<Verdict> Classifier::new2() {
  auto grid = cfg_.R_grid;
  std::sort(grid.rbegin(), grid.rend());
  const auto ps = p_list();
  int refuted_grid = 0;
  std::vector<Verdict> smallest;
  for (double R : grid) {
    std::vector<Verdict> rows;
    bool all_cert = true, any_ref = false;
    for (double p : ps) {
      auto v = new1_for(p, R);
      v.condition = Condition::new2;
      v.scope = kScopeProbed;
      all_cert = all_cert && v.status == Status::certified;
      any_ref = any_ref || v.status == Status::refuted;
      rows.push_back(std::move(v));
    }
    if (all_cert) {
      if (const auto* td = dynamic_cast<const TaylorDiffModel*>(&model_); td && std::isfinite(td->domain_radius()))
        for (auto& v : rows)
          v.note = "sampled p only: the Cauchy radius bound " + num(td->domain_radius()) +
                   " - p shrinks to 0 as p approaches the domain radius";
      return rows;
    }
    if (any_ref) ++refuted_grid;
    smallest = std::move(rows);
  }
  for (auto& v : smallest) {
    if (refuted_grid == static_cast<int>(grid.size())) {
      if (v.status != Status::refuted) v.status = Status::inconclusive;
    } else {
      v.status = Status::inconclusive;
      v.note = "no R in the grid certified for every sampled p";
    }
  }
  if (refuted_grid == static_cast<int>(grid.size()))
    for (auto& v : smallest)
      if (v.status == Status::refuted) v.note = "every grid R fails for some p; " + v.note;
  return smallest;
}

std::vector<Verdict> Classifier::kothe_a_bounded(const KotheDiagonalModel& km) {
  std::vector<Verdict> out;
  const auto& scan = km.scan();
  const auto& norm = km.continuous_norm();
  if (norm.status == Status::certified) {
    double sup = scan.log_symbol_sup(), head = scan.log_symbol_sup_head();
    if (sup == kNegInf || sup - head <= kStabilizationTol) {
      double mu = sup == kNegInf ? 1.0 : std::exp(sup);
      for (double p : p_list()) {
        Verdict v;
        v.condition = Condition::a_bdd;
        v.status = Status::certified;
        v.p = p;
        v.q = p;
        v.mu = LogMuSequence::from_geometric(1.0, mu).with_pair(p, p);
        v.M = 1.0;
        v.mu_const = mu;
        v.note = "bounded symbol, mu = sup |a_j|";
        out.push_back(std::move(v));
      }
      return out;
    }
    // running sup of log|a_j| at J/1000, J/100, J/10, J
    const auto& la = scan.log_abs_symbol();
    std::vector<Evidence> steps;
    double run = kNegInf, prev = kNegInf;
    Index next = std::max<Index>(scan.j_max() / 1000, 1);
    bool first = true;
    for (Index j = 1; j <= scan.j_max(); ++j) {
      run = std::max(run, la[static_cast<std::size_t>(j - 1)]);
      if (j == next) {
        if (!first) steps.push_back({static_cast<double>(j), run, prev});
        first = false;
        prev = run;
        next *= 10;
      }
    }
    Verdict v;
    v.condition = Condition::a_bdd;
    v.p = static_cast<double>(norm.k0);
    if (grows(steps, kStabilizationTol)) {
      v.status = Status::refuted;
      v.witness = "e_j, j=" + std::to_string(scan.symbol_sup_index());
      v.evidence = std::move(steps);
      v.note = "sup |a_j| unbounded under a continuous norm (column " + std::to_string(norm.k0) + ")";
    } else {
      v.note = "sup |a_j| neither stabilized nor growing on the window";
    }
    out.push_back(std::move(v));
    return out;
  }

  // no continuous norm: search the mu grid for witnesses
  const auto& space = km.space();
  auto refute = [&](double mu) -> std::optional<Verdict> {
    const double log_mu = std::log(mu);
    for (Index P = static_cast<Index>(std::ceil(mu)) + 1, step = 1; P <= scan.j_max(); P += step, step *= 2) {
      Index upto = scan.j_max();
      auto cs = space.matrix.column_support(P);
      if (cs) upto = std::min(upto, *cs);
      Index js = 0;
      double best = kNegInf, bp_best = kNegInf;
      for (Index j = 1; j <= upto; ++j) {
        double bp = scan.log_entry(j, P);
        if (bp == kNegInf) continue;
        double l = scan.log_abs_symbol()[static_cast<std::size_t>(j - 1)];
        if (l > best || (l == best && bp > bp_best)) {
          best = l;
          bp_best = bp;
          js = j;
        }
      }
      if (js == 0 || !(best > log_mu)) continue;

      double log_q = kNegInf;
      std::string witness = "x=ones";
      bool ones_ok = true;
      auto ones = CoefficientVector::ones();
      for (double qd : q_list(static_cast<double>(P))) {
        Index q = static_cast<Index>(qd);
        try {
          SeminormValue sv;
          if (auto qs = space.matrix.column_support(q))
            sv = window_seminorm(ones, q, space, *qs);
          else
            sv = seminorm(ones, q, space, 1e-9);
          log_q = std::max(log_q, std::log(sv.upper()));
        } catch (const Error&) {
          ones_ok = false;
          break;
        }
      }
      double lx = 0.0;
      if (!ones_ok) {
        witness = "x=e_" + std::to_string(js);
        log_q = kNegInf;
        for (double qd : q_list(static_cast<double>(P)))
          log_q = std::max(log_q, space.matrix.log_entry(static_cast<double>(js), static_cast<Index>(qd)));
      }
      const double slope = best - log_mu;
      double n0 = std::max(1.0, std::floor((log_q - bp_best - lx) / slope) + 1.0);
      Verdict v;
      v.condition = Condition::a_bdd;
      v.status = Status::refuted;
      v.p = static_cast<double>(P);
      v.mu_const = mu;
      v.witness = witness + ", j*=" + std::to_string(js);
      for (double n = n0; n <= n0 * 1000; n *= 10) v.evidence.push_back({n, n * best + bp_best + lx, n * log_mu + log_q});
      v.note = "(|a_j*|/mu)^n unbounded for p=" + std::to_string(P) + ", mu=" + num(mu);
      return v;
    }
    return std::nullopt;
  };

  std::optional<Verdict> last;
  std::optional<double> open_mu;
  for (double mu : cfg_.mu_grid) {
    auto v = refute(mu);
    if (!v) {
      open_mu = mu;
      break;
    }
    last = std::move(v);
  }
  if (!open_mu) {
    last->note += "; refuted for every mu in the grid (" + std::to_string(cfg_.mu_grid.size()) + " values)";
    out.push_back(std::move(*last));
    return out;
  }

  const double log_mu = std::log(*open_mu);
  for (double p : p_list()) {
    Verdict v;
    v.condition = Condition::a_bdd;
    v.p = p;
    for (double q : q_list(p)) {
      bool ok = true;
      for (int n = 0; n <= cfg_.n_probe && ok; ++n) {
        const auto& pr = probe(p, q, n);
        ok = pr.exact && pr.stabilized && !pr.unbounded && pr.log_mu <= n * log_mu + 1e-12;
      }
      if (ok) {
        v.status = Status::certified;
        v.q = q;
        v.M = 1.0;
        v.mu_const = *open_mu;
        v.mu = LogMuSequence::from_geometric(1.0, *open_mu).with_pair(p, q);
        break;
      }
    }
    out.push_back(std::move(v));
  }
  bool all_cert = std::all_of(out.begin(), out.end(), [](const Verdict& v) { return v.status == Status::certified; });
  if (!all_cert)
    for (auto& v : out) v.status = Status::inconclusive;
  return out;
}

std::vector<Verdict> Classifier::a_bounded() {
  if (const auto* km = dynamic_cast<const KotheDiagonalModel*>(&model_)) return kothe_a_bounded(*km);
  std::vector<Verdict> out;
  for (auto& mt : m_top()) {
    Verdict v;
    v.condition = Condition::a_bdd;
    v.p = mt.p;
    if (mt.status == Status::refuted) {
      v.status = Status::refuted;
      v.q = mt.q;
      v.witness = mt.witness;
      v.evidence = mt.evidence;
      v.note = "M-TOP refuted at this p; " + mt.note;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Verdict> Classifier::all() {
  std::vector<Verdict> out;
  for (auto part : {a_bounded(), m_top(), topologizable(), new1(), new2()})
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  sort_verdicts(out);
  return out;
}

std::vector<Verdict> check_a_bounded(const OperatorModel& m, const ProbeConfig& cfg) {
  return Classifier(m, cfg).a_bounded();
}
std::vector<Verdict> check_m_top(const OperatorModel& m, const ProbeConfig& cfg) { return Classifier(m, cfg).m_top(); }
std::vector<Verdict> check_topologizable(const OperatorModel& m, const ProbeConfig& cfg) {
  return Classifier(m, cfg).topologizable();
}
std::vector<Verdict> check_new1(const OperatorModel& m, const ProbeConfig& cfg) { return Classifier(m, cfg).new1(); }
std::vector<Verdict> check_new2(const OperatorModel& m, const ProbeConfig& cfg) { return Classifier(m, cfg).new2(); }

void sort_verdicts(std::vector<Verdict>& vs) {
  std::stable_sort(vs.begin(), vs.end(), [](const Verdict& a, const Verdict& b) {
    if (a.condition != b.condition) return a.condition < b.condition;
    if (a.p != b.p) return a.p < b.p;
    return a.R.value_or(-1.0) < b.R.value_or(-1.0);
  });
}

std::optional<Status> aggregate(const std::vector<Verdict>& vs, Condition c) {
  bool any = false, all_cert = true;
  for (const auto& v : vs) {
    if (v.condition != c) continue;
    any = true;
    if (v.status == Status::refuted) return Status::refuted;
    all_cert = all_cert && v.status == Status::certified;
  }
  if (!any) return std::nullopt;
  return all_cert ? Status::certified : Status::inconclusive;
}

ClosureReport implication_closure(const std::vector<Verdict>& vs) {
  ClosureReport rep;
  static const std::pair<Condition, Condition> rules[] = {
      {Condition::a_bdd, Condition::a_bdd_gen}, {Condition::a_bdd, Condition::m_top},
      {Condition::a_bdd_gen, Condition::m_top}, {Condition::a_bdd, Condition::top},
      {Condition::m_top, Condition::top},       {Condition::m_top, Condition::new1},
      {Condition::new1, Condition::new2},       {Condition::new1, Condition::top},
      {Condition::new2, Condition::top},
  };
  for (auto [from, to] : rules) {
    auto a = aggregate(vs, from);
    auto b = aggregate(vs, to);
    if (a == Status::certified && b == Status::refuted) {
      rep.consistent = false;
      rep.violations.push_back(std::string(to_string(from)) + " certified but " + to_string(to) + " refuted");
    }
  }
  for (const auto& v : vs) {
    if ((v.condition != Condition::a_bdd && v.condition != Condition::m_top) || v.status != Status::certified ||
        !v.mu_const)
      continue;
    Verdict d;
    d.condition = Condition::new1;
    d.status = Status::certified;
    d.scope = v.scope;
    d.p = v.p;
    d.q = v.q;
    d.R = kInf;
    d.M = v.M.value_or(1.0);
    d.mu_const = v.mu_const;
    d.mu = LogMuSequence::from_geometric(*d.M, *v.mu_const).with_pair(v.p, v.q.value_or(v.p));
    d.note = std::string("derived from ") + to_string(v.condition) + ": mu_n = M mu^n";
    rep.derived.push_back(std::move(d));
  }
  return rep;
}

Cor44Construction construct_cor44_operator(const KotheMatrix& b, Index j_max, Index k_max) {
  auto norm = has_continuous_norm(b, j_max, k_max);
  if (norm.status == Status::certified)
    throw Error(Errc::inapplicable, "construction inapplicable: column " + std::to_string(norm.k0) +
                                        " is a continuous norm on the probed window");
  const Index k_cap = j_max + 1;
  // k(j) = min{k : b_{j,k} > 0}, monotone in k so found by bisection
  auto first_positive = [&](Index j) -> Index {
    Index hi = 1;
    while (hi <= k_cap && b.entry(j, hi) <= 0.0) hi *= 2;
    if (hi > k_cap) {
      if (b.entry(j, k_cap) <= 0.0) return 0;
      hi = k_cap;
    }
    Index lo = hi / 2 + 1;
    if (hi == 1) return 1;
    while (lo < hi) {
      Index mid = lo + (hi - lo) / 2;
      if (b.entry(j, mid) > 0.0)
        hi = mid;
      else
        lo = mid + 1;
    }
    return hi;
  };
  auto table = std::make_shared<std::vector<double>>(static_cast<std::size_t>(j_max) + 1, 0.0);
  std::map<Index, Index> jn;
  for (Index j = 1; j <= j_max; ++j) {
    Index k = first_positive(j);
    if (k >= 2 && !jn.count(k - 1)) jn.emplace(k - 1, j);
  }
  Cor44Construction out{{}, DiagonalOperator::zero(), {}};
  for (auto [n, j] : jn) {
    (*table)[static_cast<std::size_t>(j)] = static_cast<double>(n);
    out.j_n.emplace_back(n, j);
  }
  DiagonalOperator::Rule rule = [table, j_max](double j) {
    if (j < 1.0 || j > static_cast<double>(j_max) || j != std::floor(j)) return Complex(0.0);
    return Complex((*table)[static_cast<std::size_t>(j)]);
  };
  auto bound = fit_symbol_bound(rule, j_max);
  out.op = DiagonalOperator(std::move(rule), bound, "cor44[" + b.label() + "]");
  out.expected = {{Condition::a_bdd, Status::refuted}, {Condition::m_top, Status::certified}};
  return out;
}

}  // namespace sglab
