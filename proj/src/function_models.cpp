#include "sglab/function_models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace sglab {

namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr double kPi = 3.141592653589793;
constexpr std::int64_t kGridCap = std::int64_t{1} << 24;

// Double as m * 2^e with integer m.
std::pair<std::int64_t, int> decompose(double v) {
  int e = 0;
  double mant = std::frexp(v, &e);
  return {static_cast<std::int64_t>(std::ldexp(mant, 53)), e - 53};
}

BigInt floor_big(double v) {
  auto [m, e] = decompose(v);
  BigInt b = m;
  if (e >= 0) return b << e;
  return b >> -e;
}

}  // namespace

TaylorFunction TaylorFunction::polynomial(std::vector<Complex> coeffs, double radius) {
  return {CoefficientVector::finite(std::move(coeffs), "poly"), radius};
}

TaylorFunction TaylorFunction::exponential() {
  // 1/n! <= C 16^{-(n+1)}, C = max_n 16^{n+1}/n!
  double log_c = kNegInf;
  for (int n = 0; n <= 64; ++n) log_c = std::max(log_c, (n + 1) * std::log(16.0) - log_factorial(n));
  Envelope env;
  env.log_c = log_c + 1e-9;
  env.log_rho = -std::log(16.0);
  CoefficientVector c([](Index j) { return Complex(std::exp(-log_factorial(static_cast<long>(j - 1)))); }, env,
                      "exp");
  return {c, kInf};
}

SeminormValue hd_seminorm(const TaylorFunction& f, double q, double tol) {
  if (!(q > 0.0) || !(q < f.declared_radius))
    throw Error(Errc::domain, "radius " + std::to_string(q) + " outside (0, declared radius)");
  if (!(tol > 0.0)) throw Error(Errc::config, "tol must be positive");
  const auto& x = f.coefficients;
  const Envelope& env = x.envelope();

  Index N = 0;  // last stored index j used
  double tail = 0.0;
  if (env.support) {
    N = *env.support;
  } else {
    // u_j = exp(log_c + j log_rho + g log j) q^{j-1} bounds |c_{j-1}| q^{j-1}
    const double L = env.log_rho + std::log(q);
    if (!(L < 0.0)) throw Error(Errc::tail_not_certifiable, "coefficient envelope does not decay at radius q");
    auto log_u = [&](double j) { return env.log_c - std::log(q) + j * L + env.g * std::log(j); };
    bool found = false;
    for (Index j0 = 2; j0 <= 1000000; j0 = j0 < 64 ? j0 + 1 : j0 + j0 / 8) {
      const double r = std::exp(L + std::max(env.g, 0.0) * std::log1p(1.0 / static_cast<double>(j0)));
      if (!(r < 1.0)) continue;
      const double t = std::exp(log_u(static_cast<double>(j0))) / (1.0 - r);
      if (t <= 0.5 * tol) {
        N = j0 - 1;
        tail = t;
        found = true;
        break;
      }
    }
    if (!found) throw Error(Errc::precision_limit, "Taylor tail unreachable");
  }

  std::vector<Complex> c(static_cast<std::size_t>(N));
  bool nonnegative = true;
  double A = 0.0, D = 0.0, B2 = 0.0, qn = 1.0;
  for (Index j = 1; j <= N; ++j) {
    Complex v = x(j);
    c[static_cast<std::size_t>(j - 1)] = v;
    if (v.imag() != 0.0 || v.real() < 0.0) nonnegative = false;
    const double n = static_cast<double>(j - 1);
    const double a = std::abs(v) * qn;
    A += a;
    D += n * a;
    B2 += n * n * a;
    qn *= q;
  }
  const double rounding = 4.0 * static_cast<double>(N + 1) * kEps * A;

  if (nonnegative || D == 0.0) return {A, tail + rounding, 0};
  if (A <= tol) return {0.5 * A, 0.5 * A + tail + rounding, 0};

  // h = |P|^2 on the circle, |h''| <= C. On a cell of width w with endpoint
  // values h_a, h_b: sup h <= max(h_a, h_b) + C w^2 / 8. Cells are split until
  // their bound is within tol of the best node value.
  const double C = 2.0 * A * B2 + 2.0 * D * D;
  auto h_at = [&](double theta) {
    const Complex z = std::polar(q, theta);
    Complex s = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) s = s * z + c[i];
    return std::norm(s);
  };
  struct Cell {
    double a, b, ha, hb;
  };
  constexpr int kInitial = 256;
  std::vector<Cell> stack;
  double best = 0.0;
  double prev = h_at(0.0);
  for (int i = 0; i < kInitial; ++i) {
    const double a = 2.0 * kPi * i / kInitial, b = 2.0 * kPi * (i + 1) / kInitial;
    const double hb = i + 1 == kInitial ? h_at(0.0) : h_at(b);
    stack.push_back({a, b, prev, hb});
    best = std::max({best, prev, hb});
    prev = hb;
  }
  std::int64_t evals = kInitial;
  double accepted = best;
  auto cell_ub = [&](const Cell& cell) {
    const double w = cell.b - cell.a;
    return std::max(cell.ha, cell.hb) + C * w * w / 8.0;
  };
  while (!stack.empty()) {
    Cell cell = stack.back();
    stack.pop_back();
    const double ub = cell_ub(cell);
    const double target = std::pow(std::sqrt(best) + 0.5 * tol, 2);
    if (ub <= target) {
      accepted = std::max(accepted, ub);
      continue;
    }
    if (++evals > kGridCap) throw Error(Errc::precision_limit, "circle refinement exceeds 2^24 evaluations for this tol");
    const double m = 0.5 * (cell.a + cell.b);
    const double hm = h_at(m);
    best = std::max(best, hm);
    stack.push_back({cell.a, m, cell.ha, hm});
    stack.push_back({m, cell.b, hm, cell.hb});
  }
  const double lower = std::sqrt(best), upper = std::sqrt(std::max(accepted, best));
  return {0.5 * (lower + upper), 0.5 * (upper - lower) + tail + rounding, 0};
}

SeminormFn hd_norm(double declared_radius, double tol) {
  return [declared_radius, tol](const CoefficientVector& x, double q) {
    return hd_seminorm({x, declared_radius}, q, tol);
  };
}

double cauchy_mu(int n, double q, double s) {
  if (n < 0 || !(q > 0.0) || !(s > q)) throw Error(Errc::config, "cauchy_mu needs n >= 0 and 0 < q < s");
  return log_factorial(n) + std::log(s) - (n + 1) * std::log(s - q);
}

std::vector<Complex> taylor_shift(const std::vector<Complex>& coeffs, double t) {
  std::vector<Complex> a = coeffs;
  const std::size_t d = a.empty() ? 0 : a.size() - 1;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = d; j-- > i;) a[j] += t * a[j + 1];
  return a;
}

DivergenceWitness divergence_witness(int k) {
  if (k < 0) throw Error(Errc::config, "degree must be >= 0");
  DivergenceWitness w;
  w.k = k;
  BigInt p7 = 1;
  for (int n = 0; n <= k; ++n) {
    w.numerator += p7 * boost::multiprecision::pow(BigInt(4), static_cast<unsigned>(k - n));
    p7 *= 7;
  }
  w.denominator = boost::multiprecision::pow(BigInt(4), static_cast<unsigned>(k));
  w.exact_value = w.numerator.convert_to<double>() / w.denominator.convert_to<double>();
  w.lower_bound = std::pow(1.5, k);
  w.exceeds = w.numerator >= boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(k)) *
                                 boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(k));
  return w;
}

double TrigMode::eval(double x, int m) const {
  const double kx = k * x;
  const int r = (m + (phase == Phase::cos ? 1 : 0)) % 4;
  double base = 0.0;
  switch (r) {
    case 0: base = std::sin(kx); break;
    case 1: base = std::cos(kx); break;
    case 2: base = -std::sin(kx); break;
    default: base = -std::cos(kx); break;
  }
  return amplitude * std::pow(static_cast<double>(k), m) * base;
}

double TrigSum::eval(double x, int m) const {
  double s = 0.0;
  for (const auto& mode : modes) s += mode.eval(x, m);
  return s;
}

TrigNorm trig_norm(const TrigMode& mode, int n, const CompactSeminormIndex& idx) {
  if (mode.k < 1 || n < 0 || idx.p < 0 || !(idx.hi > idx.lo))
    throw Error(Errc::config, "trig_norm needs k >= 1, n >= 0, p >= 0 and a nonempty interval");
  if (idx.hi - idx.lo >= 2.0 * kPi / mode.k - 1e-12)
    return {std::log(std::abs(mode.amplitude)) + (n + idx.p) * std::log(static_cast<double>(mode.k)), true};
  return {std::log(trig_norm_grid(mode, n, idx)), false};
}

double trig_norm_grid(const TrigMode& mode, int n, const CompactSeminormIndex& idx, int points) {
  if (mode.k < 1 || points < 2) throw Error(Errc::config, "grid needs k >= 1 and at least 2 points");
  const double quarter = kPi / (2.0 * mode.k);
  const double span = idx.hi - idx.lo;
  const auto m = static_cast<std::int64_t>(std::ceil(points * quarter / span));
  const double h = quarter / static_cast<double>(m);
  const auto count = static_cast<std::int64_t>(std::floor(span / h));
  double best = 0.0;
  for (int alpha = 0; alpha <= idx.p; ++alpha) {
    for (std::int64_t i = 0; i <= count; ++i)
      best = std::max(best, std::abs(mode.eval(idx.lo + static_cast<double>(i) * h, n + alpha)));
    best = std::max(best, std::abs(mode.eval(idx.hi, n + alpha)));
  }
  return best;
}

TrigSum translate(const TrigMode& mode, double t) {
  const double c = std::cos(mode.k * t), s = std::sin(mode.k * t);
  const double a = mode.amplitude;
  if (mode.phase == TrigMode::Phase::sin)
    return {{{mode.k, TrigMode::Phase::sin, a * c}, {mode.k, TrigMode::Phase::cos, a * s}}};
  return {{{mode.k, TrigMode::Phase::cos, a * c}, {mode.k, TrigMode::Phase::sin, -a * s}}};
}

TrigSum translate(const TrigSum& f, double t) {
  TrigSum out;
  for (const auto& mode : f.modes) {
    auto part = translate(mode, t);
    out.modes.insert(out.modes.end(), part.modes.begin(), part.modes.end());
  }
  return out;
}

bool exceeds_exact(const BigInt& k, int e, double mu, int f) {
  auto [m, ex] = decompose(mu);
  BigInt lhs = boost::multiprecision::pow(k, static_cast<unsigned>(e));
  BigInt rhs = BigInt(m) * boost::multiprecision::pow(k, static_cast<unsigned>(f));
  if (ex >= 0)
    rhs <<= ex;
  else
    lhs <<= -ex;
  return lhs > rhs;
}

CinftyWitness cinfty_refutation(int p, int q, const std::vector<double>& mu_list) {
  if (p < 0 || q <= p) throw Error(Errc::config, "cinfty refutation needs 0 <= p < q");
  CinftyWitness w;
  w.p = p;
  w.q = q;
  w.n = q - p + 1;
  if (mu_list.size() <= static_cast<std::size_t>(w.n))
    throw Error(Errc::config, "mu list needs values for n <= " + std::to_string(w.n));
  w.mu = mu_list[static_cast<std::size_t>(w.n)];
  if (!(w.mu > 0.0) || !std::isfinite(w.mu)) throw Error(Errc::config, "mu values must be finite and positive");
  w.k = floor_big(w.mu) + 1;
  const double l10k = std::log10(w.k.convert_to<double>());
  w.log10_lhs = (w.n + p) * l10k;
  w.log10_rhs = std::log10(w.mu) + q * l10k;
  w.verified = exceeds_exact(w.k, w.n + p, w.mu, q);
  return w;
}

}  // namespace sglab
