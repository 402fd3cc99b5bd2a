#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>

#include "sglab/mu_calculus.hpp"

using namespace sglab;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// 50-digit direct summation of sum_{n <= N} exp(log_mu(n)) t^n / n!.
Big big_sum(const std::function<Big(int)>& mu, double t, int N) {
  Big s = 0, fact = 1, tn = 1;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) {
      fact *= n;
      tn *= Big(t);
    }
    s += mu(n) * tn / fact;
  }
  return s;
}

}  // namespace

TEST_CASE("geometric sequences") {
  auto a = LogMuSequence::from_geometric(1.0, 3.0);
  for (int n = 0; n <= 10; ++n) CHECK(a.log_mu(n) == doctest::Approx(n * std::log(3.0)));
  auto one = LogMuSequence::from_geometric(1.0, 1.0);
  for (int n = 0; n <= 10; ++n) CHECK(one.log_mu(n) == 0.0);
  auto b = LogMuSequence::from_geometric(3.0, 2.0);
  CHECK(b.log_mu(4) == doctest::Approx(std::log(3.0) + 4 * std::log(2.0)).epsilon(1e-15));
  CHECK(b.log_mu(5000) == doctest::Approx(std::log(3.0) + 5000 * std::log(2.0)));
}

TEST_CASE("radius examples") {
  CHECK(radius(LogMuSequence::from_geometric(2.0, 5.0)).value == kInf);
  for (double d : {1.0, 2.0, 5.0}) {
    auto r = radius(LogMuSequence::power_form(1.0, d));
    CAPTURE(d);
    CHECK(r.value == doctest::Approx(d).epsilon(1e-12));
    CHECK(r.stabilized);
    // raw root test on the window converges slowly towards d
    CHECK(r.root_test == doctest::Approx(d).epsilon(0.05));
  }
  auto c = radius(LogMuSequence::cauchy(0.5, 0.75));
  CHECK(c.value == doctest::Approx(0.25).epsilon(1e-12));

  // Independent root test at n = 10^4 via lgamma for (n/2)^n e^{-n}.
  const double n = 1e4;
  const double root = std::exp((n * std::log(n / 2.0) - n - std::lgamma(n + 1.0)) / n);
  CHECK(1.0 / root == doctest::Approx(2.0).epsilon(2e-3));
}

TEST_CASE("radius is invariant under scaling") {
  for (double c : {1e-6, 0.5, 7.0, 1e6}) {
    CHECK(radius(LogMuSequence::power_form(c, 3.0)).value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(radius(LogMuSequence::from_geometric(c, 2.0)).value == kInf);
    std::vector<double> base, scaled_seq;
    for (int k = 0; k <= 256; ++k) {
      const double v = k * std::log(k / 4.0 + (k == 0)) - k;
      base.push_back(v);
      scaled_seq.push_back(v + std::log(c));
    }
    auto r1 = radius(LogMuSequence::from_scan(base));
    auto r2 = radius(LogMuSequence::from_scan(scaled_seq));
    CHECK(r1.root_test == doctest::Approx(r2.root_test).epsilon(0.05));
  }
}

TEST_CASE("series sums") {
  auto e = series_sum(LogMuSequence::from_geometric(1.0, 1.0), 1.0);
  CHECK(e.tail_bound <= 1e-12);
  CHECK(std::abs(e.value - std::exp(1.0)) <= e.tail_bound + 1e-14);
  CHECK(e.value == doctest::Approx(2.718281828).epsilon(1e-9));

  for (double t : {0.0, 0.5, 1.0, 3.0, 10.0}) {
    for (auto [M, mu] : {std::pair{1.0, 1.0}, {2.5, 0.3}, {0.1, 3.0}}) {
      CAPTURE(t);
      auto v = series_sum(LogMuSequence::from_geometric(M, mu), t);
      const double exact = M * std::exp(mu * t);
      CHECK(std::abs(v.value - exact) <= v.tail_bound + 1e-12 * std::max(1.0, exact));
    }
  }

  auto pf = series_sum(LogMuSequence::power_form(1.0, 2.0), 1.0, 1e-13);
  const Big oracle = big_sum(
      [](int n) { return n == 0 ? Big(1) : boost::multiprecision::pow(Big(n) / 2, n) * boost::multiprecision::exp(Big(-n)); },
      1.0, 400);
  CHECK(std::isfinite(pf.value));
  CHECK(std::abs(pf.value - oracle.convert_to<double>()) <= pf.tail_bound + 1e-13);

  CHECK_THROWS_AS(series_sum(LogMuSequence::power_form(1.0, 2.0), 2.5), Error);
}

TEST_CASE("tail bound examples") {
  auto one = LogMuSequence::from_geometric(1.0, 1.0);
  const Big remainder = big_sum([](int) { return Big(1); }, 1.0, 200) - big_sum([](int) { return Big(1); }, 1.0, 20);
  const double tb = tail_bound(one, 1.0, 20);
  CHECK(tb >= remainder.convert_to<double>());
  CHECK(tb <= 10.0 * remainder.convert_to<double>());

  auto two = LogMuSequence::from_geometric(1.0, 2.0);
  for (long N : {5L, 10L, 30L}) {
    const double term = std::exp((N + 1) * std::log(2.0) - std::lgamma(N + 2.0));
    const double rho = 2.0 / (N + 2.0);
    CHECK(tail_bound(two, 1.0, N) == doctest::Approx(term / (1.0 - rho)).epsilon(1e-10));
  }

  for (long N : {0L, 3L, 100L}) CHECK(tail_bound(LogMuSequence::power_form(1.0, 1.0), 0.0, N) == 0.0);
}

TEST_CASE("tail bounds dominate high-precision remainders") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.05, 4.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double M = u(rng), mu = u(rng), t = u(rng);
    auto seq = LogMuSequence::from_geometric(M, mu);
    auto v = series_sum(seq, t, 1e-12);
    const Big exact = Big(M) * boost::multiprecision::exp(Big(mu) * Big(t));
    const double ex = exact.convert_to<double>();
    CAPTURE(trial);
    CHECK(v.value + v.tail_bound >= ex - 1e-12 * ex);
    CHECK(ex >= v.value - 1e-12 * ex);
  }
  for (double d : {0.5, 1.0, 3.0}) {
    const double t = 0.4 * d;
    auto v = series_sum(LogMuSequence::power_form(1.0, d), t, 1e-12);
    const Big exact = big_sum(
        [d](int n) {
          return n == 0 ? Big(1) : boost::multiprecision::pow(Big(n) / Big(d), n) * boost::multiprecision::exp(Big(-n));
        },
        t, 600);
    CAPTURE(d);
    CHECK(v.value + v.tail_bound >= exact.convert_to<double>() - 1e-12);
    CHECK(exact.convert_to<double>() >= v.value - 1e-12);
  }
}

TEST_CASE("series sums are nondecreasing in t") {
  for (const auto& seq : {LogMuSequence::from_geometric(1.5, 2.0), LogMuSequence::power_form(2.0, 3.0),
                          LogMuSequence::cauchy(0.5, 1.0)}) {
    double prev = -1.0;
    const double R = std::min(radius(seq).value, 5.0);
    for (int i = 0; i <= 40; ++i) {
      const double t = 0.95 * R * i / 40.0;
      auto v = series_sum(seq, t);
      CHECK(v.value >= prev - 1e-12);
      prev = v.value;
    }
  }
}
