#include <doctest.h>

#include <cmath>
#include <random>

#include "sglab/expo_semigroup.hpp"
#include "sglab/function_models.hpp"

using namespace sglab;

namespace {

const SpaceDescriptor kS{KotheMatrix::s(), 1.0};
const SpaceDescriptor kOmega{KotheMatrix::omega(), 1.0};

struct Setup {
  KotheDiagonalModel model;
  SeminormFn norm;

  Setup(DiagonalOperator a, const SpaceDescriptor& space) : model(std::move(a), space, 20000, 64), norm(kothe_norm(space)) {}

  EvaluationPlan plan(double p, double R, int links, double tol = 1e-10) const {
    return plan_for(model, norm, p, R, links, tol);
  }
  Operator op() const { return model.op(); }
};

EvaluationPlan taylor_plan(double p, double R, int links, double tol = 1e-10) {
  static const TaylorDiffModel entire(kInf);
  return plan_for(entire, hd_norm(kInf), p, R, links, tol);
}

// (z + t)-shift of a polynomial by direct binomial expansion.
std::vector<double> binomial_shift(const std::vector<double>& c, double t) {
  std::vector<double> out(c.size(), 0.0);
  for (std::size_t m = 0; m < c.size(); ++m) {
    double binom = 1.0;
    for (std::size_t k = 0; k <= m; ++k) {
      out[k] += c[m] * binom * std::pow(t, static_cast<double>(m - k));
      binom = binom * static_cast<double>(m - k) / static_cast<double>(k + 1);
    }
  }
  return out;
}

double p_diff(const EvaluationPlan& plan, const CoefficientVector& a, const CoefficientVector& b, double p) {
  return plan.norm(a - b, p).upper();
}

}  // namespace

TEST_CASE("evaluate examples") {
  Setup lg(DiagonalOperator::log_symbol(), kS);
  auto plan = lg.plan(1, 1.5, 1);
  for (Index j : {1, 2, 5, 40}) {
    auto v = evaluate(lg.op(), unit_vector(j), 1.0, plan);
    CAPTURE(j);
    CHECK(v.tail <= plan.tol);
    CHECK(std::abs(v.vector(j) - Complex(static_cast<double>(j))) <= v.tail + 1e-12);
    CHECK(v.scope == "full");
  }

  auto zero_t = evaluate(lg.op(), CoefficientVector::geometric(0.5), 0.0, plan);
  CHECK(zero_t.n_used == 0);
  CHECK(zero_t.tail == 0.0);
  for (Index j = 1; j <= 20; ++j) CHECK(zero_t.vector(j) == CoefficientVector::geometric(0.5)(j));

  auto tp = taylor_plan(1, 2, 1);
  auto sq = evaluate(TaylorDifferentiation{}, CoefficientVector::finite({0.0, 0.0, 1.0}), 1.0, tp);
  CHECK(sq.tail == 0.0);
  CHECK(sq.vector(1) == Complex(1.0));
  CHECK(sq.vector(2) == Complex(2.0));
  CHECK(sq.vector(3) == Complex(1.0));
  CHECK(sq.vector(4) == Complex(0.0));

  CHECK_THROWS_AS(evaluate(lg.op(), unit_vector(2), 2.0, plan), Error);
  CHECK_THROWS_AS(evaluate(lg.op(), unit_vector(2), -0.5, plan), Error);
}

TEST_CASE("diagonal oracle") {
  auto sq = diagonal_oracle(DiagonalOperator::log_symbol(), CoefficientVector::ones(), 2.0);
  for (Index j = 1; j <= 50; ++j) CHECK(sq(j).real() == doctest::Approx(static_cast<double>(j * j)).epsilon(1e-13));

  auto id = diagonal_oracle(DiagonalOperator::index_symbol(), CoefficientVector::geometric(0.5), 0.0);
  for (Index j = 1; j <= 10; ++j) CHECK(id(j) == CoefficientVector::geometric(0.5)(j));

  auto e3 = diagonal_oracle(DiagonalOperator::index_symbol(), CoefficientVector::ones(), 1.0);
  CHECK(e3(3).real() == doctest::Approx(20.0855369232).epsilon(1e-10));

  Setup om(DiagonalOperator::index_symbol(), kOmega);
  auto plan = om.plan(3, 1.5, 1);
  auto v = evaluate(om.op(), CoefficientVector::ones(), 1.0, plan);
  CHECK(std::abs(v.vector(3) - e3(3)) <= v.tail + 1e-12);
}

TEST_CASE("group evaluation") {
  Setup lg(DiagonalOperator::log_symbol(), kS);
  auto plan = lg.plan(1, 1.5, 2);
  auto x = CoefficientVector::finite({1.0, -2.0, 0.5, 3.0});
  auto fwd = evaluate_group(lg.op(), x, 1.0, plan);
  auto back = evaluate_group(lg.op(), fwd.vector, -1.0, plan);
  // |T(-1)(y - y')| is bounded through f(1) q(y - y'), with y' the exact image
  const double f1 = series_sum(plan.chain[0].mu, 1.0).value;
  CHECK(p_diff(plan, back.vector, x, 1) <= back.tail + f1 * fwd.tail + 1e-12);

  auto tp = taylor_plan(1, 2, 1);
  auto shifted = evaluate_group(TaylorDifferentiation{}, CoefficientVector::finite({1.0, 2.0, 1.0}), -1.0, tp);
  CHECK(shifted.vector(1) == Complex(0.0));
  CHECK(shifted.vector(2) == Complex(0.0));
  CHECK(shifted.vector(3) == Complex(1.0));

  auto zero_t = evaluate_group(lg.op(), x, 0.0, plan);
  for (Index j = 1; j <= 5; ++j) CHECK(zero_t.vector(j) == x(j));
}

TEST_CASE("piecewise evaluation") {
  Setup lg(DiagonalOperator::log_symbol(), kS);
  auto plan = lg.plan(1, 1.0, 4);
  auto x = CoefficientVector::finite({1.0, 1.0, 1.0, 1.0, 1.0});
  auto big = evaluate_piecewise(lg.op(), x, 2.5, 1.0, plan);
  auto oracle = diagonal_oracle(DiagonalOperator::log_symbol(), x, 2.5);
  CHECK(p_diff(plan, big.vector, oracle, 1) <= big.tail + 1e-12);
  for (Index j = 1; j <= 5; ++j) CHECK(big.vector(j).real() == doctest::Approx(std::pow(j, 2.5)).epsilon(1e-9));

  auto small = evaluate_piecewise(lg.op(), x, 0.6, 1.0, plan);
  auto direct = evaluate(lg.op(), x, 0.6, plan);
  for (Index j = 1; j <= 6; ++j) CHECK(small.vector(j) == direct.vector(j));
  CHECK(small.tail == direct.tail);

  auto two = evaluate_piecewise(lg.op(), x, 2.0, 1.0, plan);
  auto once = evaluate(lg.op(), x, 1.0, plan);
  auto twice = evaluate(lg.op(), once.vector, 1.0, plan);
  CHECK(p_diff(plan, two.vector, twice.vector, 1) <= two.tail + 1e-12);
  CHECK(p_diff(plan, two.vector, diagonal_oracle(DiagonalOperator::log_symbol(), x, 2.0), 1) <= two.tail + 1e-12);

  auto short_plan = lg.plan(1, 1.0, 1);
  CHECK_THROWS_AS(evaluate_piecewise(lg.op(), x, 2.5, 1.0, short_plan), Error);
}

TEST_CASE("piecewise evaluations with different steps agree") {
  Setup lg(DiagonalOperator::log_symbol(), kS);
  auto x = CoefficientVector::finite({0.3, -1.0, 2.0, 0.0, 1.5, 0.25});
  for (double t : {1.7, 2.9, 3.3}) {
    auto p1 = lg.plan(1, 1.0, 5);
    auto p2 = lg.plan(1, 1.5, 4);
    auto a = evaluate_piecewise(lg.op(), x, t, 1.0, p1);
    auto b = evaluate_piecewise(lg.op(), x, t, 1.5, p2);
    CAPTURE(t);
    CHECK(p_diff(p1, a.vector, b.vector, 1) <= a.tail + b.tail + 1e-11);
  }
}

TEST_CASE("semigroup law") {
  Setup lg(DiagonalOperator::log_symbol(), kS);
  auto plan = lg.plan(1, 1.5, 2);
  auto r = verify_semigroup_law(lg.op(), unit_vector(2), 0.3, 0.7, plan);
  CHECK(r.pass());
  CHECK(r.residual <= 1e-10);

  auto z = verify_semigroup_law(lg.op(), unit_vector(3), 0.0, 0.5, plan);
  CHECK(z.pass());
  CHECK(z.residual <= plan.tol);

  auto tp = taylor_plan(1, 2, 2);
  auto poly = verify_semigroup_law(TaylorDifferentiation{}, CoefficientVector::finite({1.0, -3.0, 0.0, 2.0}), 0.5, 1.0, tp);
  CHECK(poly.residual == 0.0);
  CHECK(poly.pass());
}

TEST_CASE("generator check") {
  std::vector<double> hs;
  for (int m = 1; m <= 10; ++m) hs.push_back(std::ldexp(1.0, -m));

  Setup zero(DiagonalOperator::zero(), kS);
  auto zr = verify_generator(zero.op(), unit_vector(3), hs, zero.plan(1, 1.5, 1));
  CHECK(zr.pass());
  for (const auto& row : zr.rows) CHECK(row.residual == 0.0);

  Setup lg(DiagonalOperator::log_symbol(), kS);
  auto gr = verify_generator(lg.op(), unit_vector(3), hs, lg.plan(1, 1.5, 1));
  CHECK(gr.pass());
  REQUIRE(gr.rows.size() == hs.size());
  for (const auto& row : gr.rows) {
    // (e^{h log 3} - 1)/h - log 3 is about h (log 3)^2 / 2, times b_{3,1} = 3
    const double exact = 3.0 * std::abs((std::exp(row.h * std::log(3.0)) - 1.0) / row.h - std::log(3.0));
    CHECK(row.residual == doctest::Approx(exact).epsilon(1e-4));
    CHECK(row.residual <= row.bound);
  }
}

TEST_CASE("continuity modulus") {
  Setup lg(DiagonalOperator::log_symbol(), kS);
  auto plan = lg.plan(1, 2.0, 2);
  std::vector<CoefficientVector> xs{unit_vector(2), unit_vector(3), CoefficientVector::finite({1.0, 0.5, 0.25})};
  CHECK(continuity_modulus(lg.op(), xs, 1.0, {0.0}, plan).rows.at(0).modulus == 0.0);

  std::vector<double> hs;
  for (int m = 1; m <= 8; ++m) hs.push_back(std::ldexp(1.0, -m));
  auto rep = continuity_modulus(lg.op(), xs, 1.0, hs, plan);
  CHECK(rep.pass());
  REQUIRE(rep.rows.size() == hs.size());
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].modulus <= rep.rows[i].bound);
    CHECK(rep.rows[i].modulus <= rep.rows[i].bound_k + 1e-9);
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const double ratio = rep.rows[i].modulus / rep.rows[i - 1].modulus;
    CHECK(ratio == doctest::Approx(0.5).epsilon(0.1));
  }
}

TEST_CASE("evaluate agrees with the diagonal oracle") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ut(0.0, 1.4), uc(-2.0, 2.0);
  const char* symbols[] = {"log(j)", "1 - 1/j", "2*log(j) + 1", "min(j, 4)"};
  for (const char* sym : symbols) {
    Setup su(DiagonalOperator::from_expr(Expression::parse(sym), 20000), kS);
    auto plan = su.plan(1, 1.5, 1);
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<Complex> c;
      for (int i = 0; i < 1 + trial; ++i) c.emplace_back(uc(rng), uc(rng));
      auto x = CoefficientVector::finite(c);
      const double t = ut(rng);
      CAPTURE(sym);
      CAPTURE(t);
      auto v = evaluate(su.op(), x, t, plan);
      CHECK(p_diff(plan, v.vector, diagonal_oracle(su.model.op(), x, t), 1) <= v.tail + 1e-11);
    }
  }
}

TEST_CASE("Taylor evaluation is exact on polynomials") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> coef(-5, 5);
  auto tp = taylor_plan(1, 4, 1);
  for (int d = 0; d <= 8; ++d) {
    std::vector<double> c;
    for (int i = 0; i <= d; ++i) c.push_back(coef(rng));
    if (c.back() == 0.0) c.back() = 1.0;
    std::vector<Complex> cc(c.begin(), c.end());
    for (double t : {0.5, 1.0, 2.0, 3.0}) {
      auto v = evaluate(TaylorDifferentiation{}, CoefficientVector::finite(cc), t, tp);
      auto expected = binomial_shift(c, t);
      CAPTURE(d);
      CAPTURE(t);
      CHECK(v.n_used <= d);
      CHECK(v.tail == 0.0);
      for (int i = 0; i <= d; ++i) CHECK(v.vector(i + 1).real() == expected[static_cast<std::size_t>(i)]);
    }
  }
}

TEST_CASE("tails grow with t for a fixed order") {
  Setup lg(DiagonalOperator::log_symbol(), kS);
  auto plan = lg.plan(1, 1.5, 1);
  const auto& mu = plan.chain[0].mu;
  for (long N : {5L, 10L, 20L}) {
    double prev = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double t = 1.4 * i / 20.0;
      const double tb = tail_bound(mu, t, N);
      CHECK(tb >= prev);
      prev = tb;
    }
  }
}

TEST_CASE("coordinate-window evaluation stays within tail plus rounding") {
  Setup lg(DiagonalOperator::log_symbol(), kS);
  for (double p : {1.0, 2.0, 3.0}) {
    auto plan = lg.plan(p, 2.5, 1);
    plan.coord_window = 50;
    auto v = evaluate(lg.op(), CoefficientVector::ones(), 1.7, plan);
    CHECK(v.scope == "coordinate window");
    CHECK(v.rounding > 0.0);
    auto oracle = diagonal_oracle(DiagonalOperator::log_symbol(), CoefficientVector::finite(CoefficientVector::ones().window(50)), 1.7);
    CHECK(p_diff(plan, v.vector, oracle, p) <= v.tail + v.rounding);
    for (Index j = 1; j <= 50; ++j) CHECK(std::abs(v.vector(j) - std::pow(static_cast<double>(j), 1.7)) <= 1e-10);
  }
}
