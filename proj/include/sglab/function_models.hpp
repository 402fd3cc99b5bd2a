#pragma once

// Holomorphic functions as Taylor-coefficient sequences (c_n stored at index
// j = n + 1) with sup-circle seminorms, and a trigonometric-polynomial model
// of C^inf(R) with the seminorms ||f||_{K,p} = sup_{x in K, alpha <= p} |f^(alpha)(x)|.

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "sglab/expo_semigroup.hpp"
#include "sglab/seqspace.hpp"

namespace sglab {

using BigInt = boost::multiprecision::cpp_int;

struct TaylorFunction {
  CoefficientVector coefficients;
  double declared_radius = 1.0;  // +inf for entire functions

  static TaylorFunction polynomial(std::vector<Complex> coeffs, double radius = kInf);
  // exp(z), with a geometric envelope of ratio 1/16.
  static TaylorFunction exponential();
};

// sup_{|z| = q} |f(z)| with abs_error <= tol. Errors: domain (q outside the
// disc), tail_not_certifiable, precision_limit.
SeminormValue hd_seminorm(const TaylorFunction& f, double q, double tol = 1e-12);

SeminormFn hd_norm(double declared_radius, double tol = 1e-13);

// log(n! s / (s - q)^{n+1})
double cauchy_mu(int n, double q, double s);

// Coefficients of f(z + t) by repeated synthetic division.
std::vector<Complex> taylor_shift(const std::vector<Complex>& coeffs, double t);

struct DivergenceWitness {
  int k = 0;
  BigInt numerator;    // exact value = numerator / 4^k
  BigInt denominator;  // 4^k
  double exact_value = 0.0;
  double lower_bound = 0.0;  // 1.5^k
  bool exceeds = false;      // exact comparison numerator * 2^k >= 3^k * 4^k
};

// (T(1) f_k)(3/4) = f_k(7/4) = sum_{n <= k} (7/4)^n for f_k = sum_{n <= k} z^n.
DivergenceWitness divergence_witness(int k);

struct TrigMode {
  enum class Phase { sin, cos };
  int k = 1;
  Phase phase = Phase::sin;
  double amplitude = 1.0;

  // m-th derivative at x.
  double eval(double x, int m = 0) const;
};

struct TrigSum {
  std::vector<TrigMode> modes;
  double eval(double x, int m = 0) const;
};

struct CompactSeminormIndex {
  double lo = 0.0;
  double hi = 6.283185307179586;
  int p = 0;
};

struct TrigNorm {
  double log_value = kNegInf;
  bool closed_form = true;  // false: interval shorter than a period, grid value only
};

// log ||(d/dx)^n mode||_{K,p}
TrigNorm trig_norm(const TrigMode& mode, int n, const CompactSeminormIndex& idx);
// Grid maximum over at least `points` nodes, rounded up to a multiple of 4k so
// that the extrema of the mode fall on nodes.
double trig_norm_grid(const TrigMode& mode, int n, const CompactSeminormIndex& idx, int points = 10000);

// T(t) f = f(. + t)
TrigSum translate(const TrigMode& mode, double t);
TrigSum translate(const TrigSum& f, double t);

struct CinftyWitness {
  int p = 0;
  int q = 0;
  int n = 0;  // q - p + 1
  double mu = 0.0;
  BigInt k;
  double log10_lhs = 0.0;  // log10 k^{n+p}
  double log10_rhs = 0.0;  // log10 (mu_n k^q)
  bool verified = false;   // exact integer comparison k^{n+p} > mu_n k^q
};

// Smallest k with k^{n+p} > mu_n k^q for n = q - p + 1, i.e. k = floor(mu_n) + 1.
// mu_list[n] is read; errors: config.
CinftyWitness cinfty_refutation(int p, int q, const std::vector<double>& mu_list);

// Exact check of k^{e} > mu * k^{f} for a positive finite double mu.
bool exceeds_exact(const BigInt& k, int e, double mu, int f);

}  // namespace sglab
