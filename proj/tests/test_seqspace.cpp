#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "sglab/seqspace.hpp"

using namespace sglab;

namespace {

SpaceDescriptor omega_space(double r) { return {KotheMatrix::omega(), r}; }
SpaceDescriptor s_space(double r) { return {KotheMatrix::s(), r}; }

CoefficientVector random_finite(std::mt19937& rng, int len) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<Complex> c;
  for (int i = 0; i < len; ++i) c.emplace_back(u(rng), u(rng));
  return CoefficientVector::finite(c);
}

}  // namespace

TEST_CASE("kothe entries") {
  CHECK(kothe_entry(KotheMatrix::omega(), 3, 2) == 0.0);
  CHECK(kothe_entry(KotheMatrix::omega(), 2, 2) == 1.0);
  CHECK(kothe_entry(KotheMatrix::s(), 5, 2) == 25.0);
  CHECK(kothe_entry(KotheMatrix::custom(Expression::parse("j^k")), 2, 3) == 8.0);
  auto bad = KotheMatrix::custom(Expression::parse("log(j - 1)"));
  CHECK_THROWS_AS(kothe_entry(bad, 1, 1), Error);
}

TEST_CASE("validation") {
  CHECK(validate_kothe(KotheMatrix::s(), 100, 10).valid());
  auto broken = KotheMatrix::custom(Expression::parse("2 - min(k, 2) + (j - 1)*k"));
  auto rep = validate_kothe(broken, 10, 4);
  REQUIRE_FALSE(rep.monotonicity_violations.empty());
  CHECK(rep.monotonicity_violations.front() == std::pair<Index, Index>{1, 1});
  auto zero = validate_kothe(KotheMatrix::custom(Expression::parse("0")), 20, 5);
  CHECK(zero.zero_rows.size() == 20);
  CHECK_FALSE(zero.valid());
}

TEST_CASE("continuous norm detection") {
  auto s = has_continuous_norm(KotheMatrix::s(), 1000, 16);
  CHECK(s.status == Status::certified);
  CHECK(s.k0 == 1);

  for (Index kmax : {1, 5, 64}) {
    auto o = has_continuous_norm(KotheMatrix::omega(), 1000, kmax);
    CHECK(o.status == Status::refuted);
    REQUIRE(o.zero_rows.size() == static_cast<std::size_t>(kmax));
    for (Index k = 1; k <= kmax; ++k) CHECK(o.zero_rows[static_cast<std::size_t>(k - 1)] == k + 1);
  }

  auto e = has_continuous_norm(KotheMatrix::custom(Expression::parse("exp(-j/k)")), 1000, 8);
  CHECK(e.status == Status::certified);
  CHECK(e.k0 == 1);

  auto wide = has_continuous_norm(KotheMatrix::custom(Expression::parse("exp(-j/k)")));
  CHECK(wide.status == Status::certified);
  CHECK(wide.k0 == 1);
  CHECK(validate_kothe(KotheMatrix::custom(Expression::parse("exp(-j/k)")), 2000, 4).valid());
}

TEST_CASE("seminorm examples") {
  auto a = seminorm(CoefficientVector::ones(), 4, omega_space(kInf));
  CHECK(a.value == 1.0);
  CHECK(a.abs_error == 0.0);

  auto b = seminorm(unit_vector(5), 2, s_space(kInf));
  CHECK(b.value == 25.0);
  CHECK(b.abs_error == 0.0);

  auto c = seminorm(CoefficientVector::geometric(0.5), 2, omega_space(1.0));
  CHECK(c.value == 0.75);
  CHECK(c.abs_error == 0.0);

  CHECK(seminorm(unit_vector(1), 3, s_space(1.0)).value == 1.0);
  CHECK(seminorm(unit_vector(7), 3, omega_space(1.0)).value == 0.0);
}

TEST_CASE("infinite support seminorms are certified") {
  // sum_j j^2 2^{-j} = 6
  auto v = seminorm(CoefficientVector::geometric(0.5), 2, s_space(1.0), 1e-12);
  CHECK(v.abs_error <= 1e-12);
  CHECK(std::abs(v.value - 6.0) <= v.abs_error + 1e-13);

  // (sum_j 4^{-j})^{1/2} = 3^{-1/2}
  auto w = seminorm(CoefficientVector::geometric(0.5), 1, SpaceDescriptor(KotheMatrix::custom(Expression::parse("1"), Expression::parse("0")), 2.0), 1e-12);
  CHECK(std::abs(w.value - 1.0 / std::sqrt(3.0)) <= w.abs_error + 1e-13);

  CHECK_THROWS_AS(seminorm(CoefficientVector::ones(), 1, s_space(1.0)), Error);
}

TEST_CASE("unit vector seminorm equals the matrix entry for every order") {
  for (double r : {1.0, 2.0, 3.5, kInf}) {
    for (Index j : {1, 2, 7, 40}) {
      for (Index k : {1, 2, 5}) {
        CHECK(seminorm(unit_vector(j), k, s_space(r)).value == doctest::Approx(kothe_entry(KotheMatrix::s(), j, k)).epsilon(1e-14));
        CHECK(seminorm(unit_vector(j), k, omega_space(r)).value == kothe_entry(KotheMatrix::omega(), j, k));
      }
    }
  }
}

TEST_CASE("seminorm properties on random finite vectors") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = std::array<double, 4>{1.0, 2.0, 3.0, kInf}[trial % 4];
    const auto space = trial % 2 ? s_space(r) : omega_space(r);
    auto x = random_finite(rng, 1 + trial % 12);
    auto y = random_finite(rng, 1 + trial % 7);
    const Index k = 1 + trial % 5;
    CAPTURE(trial);

    auto nk = seminorm(x, k, space);
    auto nk1 = seminorm(x, k + 1, space);
    CHECK(nk.value <= nk1.value + nk.abs_error + nk1.abs_error);

    auto nx = seminorm(x, k, space), ny = seminorm(y, k, space), nxy = seminorm(x + y, k, space);
    CHECK(nxy.value <= nx.value + ny.value + 1e-12 * (1.0 + nx.value + ny.value));

    const Complex lambda(u(rng), u(rng));
    auto nl = seminorm(scaled(x, lambda), k, space);
    CHECK(nl.value == doctest::Approx(std::abs(lambda) * nx.value).epsilon(1e-12));
  }
}

TEST_CASE("order parsing") {
  CHECK(parse_order("1") == 1.0);
  CHECK(parse_order("inf") == kInf);
  CHECK(parse_order("2.5") == 2.5);
  CHECK_THROWS_AS(parse_order("0.5"), Error);
}
