#include "sglab/expo_semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sglab {

namespace {

constexpr double kEps = 2.220446049250313e-16;

const Link& link_at(const EvaluationPlan& plan, std::size_t k) {
  if (k >= plan.chain.size())
    throw Error(Errc::budget_exhausted, "q-chain exhausted: link " + std::to_string(k) + " requested, " +
                                            std::to_string(plan.chain.size()) + " available");
  return plan.chain[k];
}

EvaluationPlan tail_plan(const EvaluationPlan& plan, std::size_t from) {
  EvaluationPlan out = plan;
  out.chain.assign(plan.chain.begin() + static_cast<std::ptrdiff_t>(std::min(from, plan.chain.size())),
                   plan.chain.end());
  if (out.chain.empty()) link_at(plan, from);
  return out;
}

// Upper bound for f(t) = sum_n mu_n t^n / n!.
double upper_f(const LogMuSequence& mu, double t) {
  auto v = series_sum(mu, t, 1e-14);
  return v.value + v.tail_bound;
}

// Upper bound for sum_{n >= n0} mu_n t^n / n!.
double upper_series_from(const LogMuSequence& mu, double t, long n0, int n_cap) {
  if (t == 0.0) return 0.0;
  const double lt = std::log(t);
  double sum = 0.0;
  for (long n = n0; n <= n_cap; ++n) {
    double lm = mu.log_mu(n);
    if (lm != kNegInf) sum += std::exp(lm + n * lt - log_factorial(n));
    if (n >= n0 + 4) {
      try {
        double tb = tail_bound(mu, t, n);
        if (tb <= 1e-6 * sum || tb == 0.0) return sum + tb;
      } catch (const Error& e) {
        if (e.code() != Errc::increase_n) throw;
      }
    }
  }
  throw Error(Errc::precision_limit, "series tail unreachable at N_cap");
}

bool has_finite_support(const CoefficientVector& x) { return x.envelope().support.has_value(); }

struct Input {
  CoefficientVector x;
  std::string scope = "full";
};

// q(x) when computable, else the coordinate-window restriction for diagonal
// operators (which commute with coordinate projections).
Input certified_input(const Operator& a, const CoefficientVector& x, double q, const EvaluationPlan& plan,
                      double* qx) {
  try {
    *qx = plan.norm(x, q).upper();
    return {x};
  } catch (const Error& e) {
    const bool fallback = (e.code() == Errc::tail_not_certifiable || e.code() == Errc::precision_limit) &&
                          std::holds_alternative<DiagonalOperator>(a) && plan.coord_window > 0;
    if (!fallback) throw;
  }
  Input in{CoefficientVector::finite(x.window(plan.coord_window), x.label()), "coordinate window"};
  *qx = plan.norm(in.x, q).upper();
  return in;
}

std::optional<int> exact_order(const Operator& a, const CoefficientVector& x) {
  if (!has_finite_support(x)) return std::nullopt;
  const Index S = *x.envelope().support;
  if (std::holds_alternative<TaylorDifferentiation>(a)) return static_cast<int>(std::max<Index>(S - 1, 0));
  const auto& d = std::get<DiagonalOperator>(a);
  for (Index j = 1; j <= S; ++j)
    if (x(j) != Complex(0.0) && d.symbol(static_cast<double>(j)) != Complex(0.0)) return std::nullopt;
  return 0;
}

struct Truncation {
  int N = 0;
  double tail = 0.0;
};

std::optional<Truncation> choose_order(const LogMuSequence& mu, double at, double qx, double tol, int n_cap) {
  if (qx == 0.0 || at == 0.0) return Truncation{0, 0.0};
  for (int N = 0; N <= n_cap; ++N) {
    double tb;
    try {
      tb = tail_bound(mu, at, N);
    } catch (const Error& e) {
      if (e.code() != Errc::increase_n) throw;
      continue;
    }
    if (qx * tb <= tol) return Truncation{N, qx * tb};
  }
  return std::nullopt;
}

Complex diag_partial(Complex aj, double t, int N) {
  Complex s = 1.0, term = 1.0;
  for (int n = 1; n <= N; ++n) {
    term *= t * aj / static_cast<double>(n);
    s += term;
  }
  return s;
}

Envelope exp_envelope(const DiagonalOperator& d, const Envelope& env, double at) {
  const auto& b = d.bound();
  if (!b) throw Error(Errc::image_envelope, "symbol of " + d.label() + " has no growth bound");
  Envelope out = env;
  out.log_c += at * b->c0;
  out.log_rho += at * b->c1;
  out.g += at * b->c2;
  return out;
}

Complex taylor_partial(const CoefficientVector& x, Index j, double t, int N, std::optional<Index> support) {
  // binom(j+n-1, n) is carried as an integer-valued double, so for dyadic t
  // and small polynomials every term is exact
  Complex s = 0.0;
  double binom = 1.0, tn = 1.0;
  for (int n = 0; n <= N; ++n) {
    if (support && j + n > *support) break;
    s += (binom * tn) * x(j + n);
    binom = binom * static_cast<double>(j + n) / static_cast<double>(n + 1);
    tn *= t;
  }
  return s;
}

// max(64, 4(terms + 2)) eps p(result); 0 when p(result) is not computable.
double rounding_allowance(const EvaluationPlan& plan, const CoefficientVector& v, double p, long terms) {
  try {
    return std::max(64.0, 4.0 * static_cast<double>(terms + 2)) * kEps * plan.norm(v, p).upper();
  } catch (const Error&) {
    return 0.0;
  }
}

}  // namespace

SeminormFn kothe_norm(const SpaceDescriptor& space, double tol) {
  return [space, tol](const CoefficientVector& x, double k) {
    return seminorm(x, static_cast<Index>(std::llround(k)), space, tol);
  };
}

EvaluationPlan plan_for(const OperatorModel& model, SeminormFn norm, double p, double R, int links, double tol) {
  EvaluationPlan plan;
  plan.norm = std::move(norm);
  plan.R = R;
  plan.tol = tol;
  double cur = p;
  for (int k = 0; k < links; ++k) {
    bool found = false;
    for (double q : model.q_candidates(cur)) {
      auto dom = model.dominating(cur, q);
      if (!dom) continue;
      auto r = dom->mu.analytic_radius();
      if (!r) {
        auto est = radius(dom->mu);
        if (est.stabilized) r = est.value;
      }
      if (!r || !(*r > R)) continue;
      plan.chain.push_back({cur, q, dom->mu});
      cur = q;
      found = true;
      break;
    }
    if (!found) {
      std::ostringstream os;
      os << "q-chain exhausted at link " << k << " (p=" << cur << ", R=" << R << ")";
      throw Error(Errc::budget_exhausted, os.str());
    }
  }
  return plan;
}

CoefficientVector partial_sum(const Operator& a, const CoefficientVector& x, double t, int N) {
  const std::string label = "S_" + std::to_string(N) + "(" + x.label() + ")";
  const auto support = x.envelope().support;
  if (const auto* d = std::get_if<DiagonalOperator>(&a)) {
    if (support) {
      std::vector<Complex> c(static_cast<std::size_t>(*support));
      for (Index j = 1; j <= *support; ++j)
        c[static_cast<std::size_t>(j - 1)] = diag_partial(d->symbol(static_cast<double>(j)), t, N) * x(j);
      return CoefficientVector::finite(std::move(c), label);
    }
    Envelope env = exp_envelope(*d, x.envelope(), std::abs(t));
    DiagonalOperator op = *d;
    return {[op, x, t, N](Index j) { return diag_partial(op.symbol(static_cast<double>(j)), t, N) * x(j); }, env,
            label};
  }
  if (support) {
    std::vector<Complex> c(static_cast<std::size_t>(*support));
    for (Index j = 1; j <= *support; ++j) c[static_cast<std::size_t>(j - 1)] = taylor_partial(x, j, t, N, support);
    return CoefficientVector::finite(std::move(c), label);
  }
  // sum_n C(j+n-1, n) (|t| rho)^n = (1 - |t| rho)^{-j}, valid for g <= 0
  Envelope env = x.envelope();
  const double u = std::abs(t) * std::exp(env.log_rho);
  if (env.g > 0.0 || !(u < 1.0))
    throw Error(Errc::image_envelope, "no envelope for the Taylor partial sum of " + x.label());
  env.log_rho -= std::log1p(-u);
  return {[x, t, N](Index j) { return taylor_partial(x, j, t, N, std::nullopt); }, env, label};
}

namespace {

TruncatedSemigroupValue series_eval(const Operator& a, const CoefficientVector& x, double t,
                                    const EvaluationPlan& plan) {
  const Link& L = link_at(plan, 0);
  const double at = std::abs(t);
  if (at > plan.R) {
    std::ostringstream os;
    os << "t=" << t << " beyond certified horizon R=" << plan.R;
    throw Error(Errc::beyond_horizon, os.str());
  }
  TruncatedSemigroupValue out{x, 0, L.p, 0.0, t, "full"};
  if (t == 0.0) return out;

  if (auto N = exact_order(a, x)) {
    out.n_used = *N;
    out.vector = partial_sum(a, x, t, *N);
    out.rounding = rounding_allowance(plan, out.vector, L.p, *N);
    return out;
  }
  if (auto r = L.mu.analytic_radius(); r && !(at < *r)) {
    std::ostringstream os;
    os << "t=" << t << " outside the convergence disc of " << L.mu.summary();
    throw Error(Errc::outside_disc, os.str());
  }
  double qx = 0.0;
  Input in = certified_input(a, x, L.q, plan, &qx);
  auto tr = choose_order(L.mu, at, qx, plan.tol, plan.n_cap);
  if (!tr) throw Error(Errc::precision_limit, "tail unreachable at N_cap=" + std::to_string(plan.n_cap));
  out.n_used = tr->N;
  out.tail = tr->tail;
  out.scope = in.scope;
  out.vector = partial_sum(a, in.x, t, tr->N);
  out.rounding = rounding_allowance(plan, out.vector, L.p, tr->N);
  return out;
}

}  // namespace

TruncatedSemigroupValue evaluate(const Operator& a, const CoefficientVector& x, double t, const EvaluationPlan& plan) {
  if (!(t >= 0.0)) throw Error(Errc::config, "evaluate needs t >= 0; use evaluate_group for negative times");
  return series_eval(a, x, t, plan);
}

TruncatedSemigroupValue evaluate_group(const Operator& a, const CoefficientVector& x, double t,
                                       const EvaluationPlan& plan) {
  if (!std::isfinite(t)) throw Error(Errc::config, "t must be finite");
  return series_eval(a, x, t, plan);
}

CoefficientVector diagonal_oracle(const DiagonalOperator& a, const CoefficientVector& x, double t) {
  const std::string label = "exp(t A)" + x.label();
  if (auto S = x.envelope().support) {
    std::vector<Complex> c(static_cast<std::size_t>(*S));
    for (Index j = 1; j <= *S; ++j)
      c[static_cast<std::size_t>(j - 1)] = std::exp(t * a.symbol(static_cast<double>(j))) * x(j);
    return CoefficientVector::finite(std::move(c), label);
  }
  Envelope env = exp_envelope(a, x.envelope(), std::abs(t));
  return {[a, x, t](Index j) { return std::exp(t * a.symbol(static_cast<double>(j))) * x(j); }, env, label};
}

TruncatedSemigroupValue evaluate_piecewise(const Operator& a, const CoefficientVector& x, double t, double R,
                                           const EvaluationPlan& plan) {
  if (!(t >= 0.0) || !(R > 0.0)) throw Error(Errc::config, "evaluate_piecewise needs t >= 0 and R > 0");
  if (t < R) return evaluate(a, x, t, plan);

  const long n = static_cast<long>(std::floor(t / R));
  const double w = std::max(0.0, t - static_cast<double>(n) * R);
  link_at(plan, static_cast<std::size_t>(n));

  // Stage i (0..n) uses link k = n - i: Y_0 = S(w) x in s_n, Y_i = S(R) Y_{i-1}
  // in s_{n-i}. err_k <= f_k(R) err_{k+1} + s_{k+1}(Y) tail_k(R).
  TruncatedSemigroupValue out;
  out.t = t;
  out.p_target = plan.chain[0].p;
  const Link& first = plan.chain[static_cast<std::size_t>(n)];
  double qx = 0.0;
  Input in = certified_input(a, x, first.q, plan, &qx);
  out.scope = in.scope;

  auto step = [&](const CoefficientVector& y, double qy, const Link& L, double tau, long stage) {
    if (auto N = exact_order(a, y)) return std::make_pair(partial_sum(a, y, tau, *N), Truncation{*N, 0.0});
    auto tr = choose_order(L.mu, tau, qy, plan.tol, plan.n_cap);
    if (!tr)
      throw Error(Errc::budget_exhausted, "step " + std::to_string(stage) + ": tail unreachable at N_cap");
    return std::make_pair(partial_sum(a, y, tau, tr->N), *tr);
  };

  CoefficientVector y = in.x;
  double err = 0.0;
  if (w > 0.0) {
    auto [v, tr] = step(y, qx, first, w, 0);
    y = v;
    err = tr.tail;
    out.n_used = std::max(out.n_used, tr.N);
  }
  for (long i = 1; i <= n; ++i) {
    const Link& L = plan.chain[static_cast<std::size_t>(n - i)];
    double fR;
    try {
      fR = upper_f(L.mu, R);
    } catch (const Error& e) {
      throw Error(Errc::budget_exhausted, "step " + std::to_string(i) + ": f(R) not certifiable: " + e.what());
    }
    const double qy = plan.norm(y, L.q).upper();
    auto [v, tr] = step(y, qy, L, R, i);
    y = v;
    err = fR * err + tr.tail;
    out.n_used = std::max(out.n_used, tr.N);
    if (!std::isfinite(err) || err > 1.0)
      throw Error(Errc::budget_exhausted, "step " + std::to_string(i) + ": propagated error " + std::to_string(err));
  }
  out.vector = y;
  out.tail = err;
  out.rounding = rounding_allowance(plan, y, out.p_target, (n + 1) * (out.n_used + 1));
  return out;
}

LawReport verify_semigroup_law(const Operator& a, const CoefficientVector& x, double t, double s,
                               const EvaluationPlan& plan) {
  const Link& L0 = link_at(plan, 0);
  const EvaluationPlan deeper = tail_plan(plan, 1);

  double qx = 0.0;
  Input in = certified_input(a, x, L0.q, plan, &qx);
  auto lhs = evaluate(a, in.x, t + s, plan);
  auto es = evaluate(a, in.x, s, deeper);
  auto rhs = evaluate(a, es.vector, t, plan);

  LawReport r;
  r.residual = plan.norm(lhs.vector - rhs.vector, L0.p).value;
  const double rounding =
      64.0 * kEps * (plan.norm(lhs.vector, L0.p).upper() + plan.norm(rhs.vector, L0.p).upper());
  r.bound = lhs.tail + upper_f(L0.mu, t) * es.tail + rhs.tail + rounding;
  return r;
}

GeneratorReport verify_generator(const Operator& a, const CoefficientVector& x, const std::vector<double>& h_list,
                                 const EvaluationPlan& plan) {
  const Link& L = link_at(plan, 0);
  double qx = 0.0;
  Input in = certified_input(a, x, L.q, plan, &qx);
  const CoefficientVector ax = sglab::apply(a, in.x);
  const double px = plan.norm(in.x, L.p).upper();

  GeneratorReport rep;
  for (double h : h_list) {
    if (!(h > 0.0 && h < 1.0)) throw Error(Errc::config, "generator step h must lie in (0, 1)");
    auto e = evaluate(a, in.x, h, plan);
    auto diff = scaled(e.vector - in.x, 1.0 / h) - ax;
    GeneratorRow row;
    row.h = h;
    row.residual = plan.norm(diff, L.p).value;
    const double rounding = 64.0 * kEps * (plan.norm(e.vector, L.p).upper() + px) / h;
    row.bound = qx * upper_series_from(L.mu, h, 2, plan.n_cap) / h + e.tail / h + rounding;
    if (!(row.residual <= row.bound)) rep.bounded = false;
    rep.rows.push_back(row);
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const auto& prev = rep.rows[i - 1];
    const auto& cur = rep.rows[i];
    const double floor = 1e4 * kEps * (px + 1.0) / cur.h;
    if (prev.residual <= floor) continue;
    if (cur.residual > 1.1 * (cur.h / prev.h) * prev.residual + floor) rep.linear_decay = false;
  }
  return rep;
}

ModulusReport continuity_modulus(const Operator& a, const std::vector<CoefficientVector>& xs, double t,
                                 const std::vector<double>& h_list, const EvaluationPlan& plan) {
  const Link& L0 = link_at(plan, 0);
  const EvaluationPlan deeper = tail_plan(plan, 1);
  const Link& L1 = deeper.chain[0];
  const double ft = upper_f(L0.mu, t);

  std::vector<Input> inputs;
  std::vector<double> qq;  // q'(x)
  for (const auto& x : xs) {
    double qx = 0.0;
    inputs.push_back(certified_input(a, x, L1.q, deeper, &qx));
    qq.push_back(qx);
  }
  const double K = qq.empty() ? 0.0 : *std::max_element(qq.begin(), qq.end());

  ModulusReport rep;
  for (double h : h_list) {
    if (!(h >= 0.0)) throw Error(Errc::config, "h must be >= 0");
    ModulusRow row;
    row.h = h;
    double sup_q = 0.0, tails = 0.0, rounding = 0.0;
    for (const auto& in : inputs) {
      auto et = evaluate(a, in.x, t, plan);
      auto eth = evaluate(a, in.x, t + h, plan);
      auto eh = evaluate(a, in.x, h, deeper);
      row.modulus = std::max(row.modulus, plan.norm(et.vector - eth.vector, L0.p).value);
      sup_q = std::max(sup_q, plan.norm(in.x - eh.vector, L1.p).upper() + eh.tail);
      tails = std::max(tails, et.tail + eth.tail);
      rounding = std::max(rounding, 64.0 * kEps * (plan.norm(et.vector, L0.p).upper() +
                                                   plan.norm(eth.vector, L0.p).upper()));
    }
    row.bound = ft * sup_q + tails + rounding;
    row.bound_k = ft * K * upper_series_from(L1.mu, h, 1, plan.n_cap) + tails + rounding;
    if (!(row.modulus <= row.bound && row.modulus <= row.bound_k)) rep.bounded = false;
    rep.rows.push_back(row);
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i].modulus > rep.rows[i - 1].modulus * (1 + 1e-9) + 1e-15) rep.vanishing = false;
  if (rep.rows.size() >= 2 && rep.rows.front().modulus > 0.0 &&
      !(rep.rows.back().modulus < rep.rows.front().modulus))
    rep.vanishing = false;
  return rep;
}

}  // namespace sglab
