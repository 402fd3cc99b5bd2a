#include <doctest.h>

#include <cmath>
#include <random>

#include "sglab/classifier.hpp"

using namespace sglab;

namespace {

constexpr Index kJ = 20000;

SpaceDescriptor s_space() { return {KotheMatrix::s(), 1.0}; }
SpaceDescriptor omega_space() { return {KotheMatrix::omega(), 1.0}; }

std::unique_ptr<KotheDiagonalModel> model(const std::string& symbol, const SpaceDescriptor& space) {
  DiagonalOperator a = symbol == "j"       ? DiagonalOperator::index_symbol()
                       : symbol == "log(j)" ? DiagonalOperator::log_symbol()
                                            : DiagonalOperator::from_expr(Expression::parse(symbol), kJ);
  return std::make_unique<KotheDiagonalModel>(a, space, kJ, 32);
}

ProbeConfig quick() {
  ProbeConfig c;
  c.p_list = {1, 2, 3};
  return c;
}

bool all_are(const std::vector<Verdict>& vs, Status s) {
  if (vs.empty()) return false;
  for (const auto& v : vs)
    if (v.status != s) return false;
  return true;
}

Verdict verdict(Condition c, Status s, double p = 1) {
  Verdict v;
  v.condition = c;
  v.status = s;
  v.p = p;
  return v;
}

// log of the certified constant for power n, or nullopt if the verdict carries none.
std::optional<double> certified_log_mu(const Verdict& v, int n) {
  if (v.mu) return v.mu->log_mu(n);
  if (v.mu_const) return std::log(v.M.value_or(1.0)) + n * std::log(*v.mu_const);
  return std::nullopt;
}

}  // namespace

TEST_CASE("a-bounded examples") {
  auto bounded = model("1 - 1/j", s_space());
  auto vs = check_a_bounded(*bounded, quick());
  REQUIRE(all_are(vs, Status::certified));
  for (const auto& v : vs) {
    REQUIRE(v.q);
    CHECK(*v.q == v.p);
    REQUIRE(v.mu_const);
    CHECK(*v.mu_const == doctest::Approx(1.0).epsilon(1e-4));
  }

  // the mu grid reaches 2^16, so refuting every grid value needs p = 2^16 + 1 inside the window
  KotheDiagonalModel om(DiagonalOperator::index_symbol(), omega_space());
  auto refuted = check_a_bounded(om, quick());
  CHECK(aggregate(refuted, Condition::a_bdd) == Status::refuted);
  bool ones_witness = false;
  for (const auto& v : refuted) {
    if (v.status != Status::refuted) continue;
    if (v.witness.find("ones") != std::string::npos) ones_witness = true;
    for (const auto& e : v.evidence) CHECK(e.log_value > e.log_bound);
  }
  CHECK(ones_witness);

  KotheDiagonalModel zero(DiagonalOperator::zero(), s_space(), kJ, 32);
  auto z = check_a_bounded(zero, quick());
  REQUIRE(all_are(z, Status::certified));
  for (const auto& v : z) {
    CHECK(v.M.value_or(1.0) == 1.0);
    CHECK(v.mu_const.value_or(-1.0) <= 1.0);
  }
}

TEST_CASE("m-topologizable examples") {
  auto om = model("j", omega_space());
  for (const auto& v : check_m_top(*om, quick())) {
    REQUIRE(v.status == Status::certified);
    REQUIRE(v.q);
    CHECK(*v.q == v.p);
    REQUIRE(v.mu_const);
    CHECK(*v.mu_const == doctest::Approx(v.p).epsilon(1e-12));
  }

  auto lg = model("log(j)", s_space());
  auto m = check_m_top(*lg, quick());
  CHECK(aggregate(m, Condition::m_top) == Status::refuted);
  for (const auto& v : m)
    for (const auto& e : v.evidence) CHECK(e.log_value > e.log_bound);

  auto bd = model("min(j, 5)", s_space());
  CHECK(all_are(check_m_top(*bd, quick()), Status::certified));
}

TEST_CASE("topologizable examples") {
  auto lg = model("log(j)", s_space());
  CHECK(all_are(check_topologizable(*lg, quick()), Status::certified));

  TaylorDiffModel hd(1.0);
  auto hv = check_topologizable(hd, {});
  REQUIRE(all_are(hv, Status::certified));
  for (const auto& v : hv) {
    REQUIRE(v.mu);
    CHECK(v.mu->origin() == MuOrigin::cauchy);
  }

  TrigDiffModel trig;
  CHECK(aggregate(check_topologizable(trig, {}), Condition::top) == Status::refuted);
}

TEST_CASE("quantitative conditions") {
  auto lg = model("log(j)", s_space());
  ProbeConfig cfg = quick();
  cfg.R_list = {1, 5, 10};
  auto n1 = check_new1(*lg, cfg);
  REQUIRE(all_are(n1, Status::certified));
  for (const auto& v : n1) {
    REQUIRE(v.q);
    REQUIRE(v.R);
    CHECK(*v.q - v.p > *v.R);
    REQUIRE(v.mu);
    CHECK(radius(*v.mu).value > *v.R);
  }
  CHECK(aggregate(check_new2(*lg, cfg), Condition::new2) == Status::certified);

  TaylorDiffModel hc(kInf);
  CHECK(all_are(check_new1(hc, {}), Status::certified));

  TaylorDiffModel hd(1.0);
  ProbeConfig hcfg;
  hcfg.p_list = {0.5, 0.75};
  auto n2 = check_new2(hd, hcfg);
  REQUIRE(aggregate(n2, Condition::new2) == Status::certified);
  for (const auto& v : n2) {
    CHECK(v.scope == kScopeProbed);
    REQUIRE(v.R);
    CHECK(*v.R == doctest::Approx(0.2));
    CHECK_FALSE(v.note.empty());
  }

  auto om = model("j", omega_space());
  CHECK(aggregate(check_new2(*om, quick()), Condition::new2) == Status::certified);
}

TEST_CASE("implication closure") {
  auto bdd_split = implication_closure({verdict(Condition::a_bdd, Status::refuted), verdict(Condition::m_top, Status::certified)});
  CHECK(bdd_split.consistent);

  auto bad = implication_closure({verdict(Condition::m_top, Status::certified), verdict(Condition::top, Status::refuted)});
  CHECK_FALSE(bad.consistent);
  CHECK_FALSE(bad.violations.empty());

  Verdict ab = verdict(Condition::a_bdd, Status::certified, 2);
  ab.q = 2;
  ab.M = 3.0;
  ab.mu_const = 1.5;
  auto derived = implication_closure({ab});
  CHECK(derived.consistent);
  bool found = false;
  for (const auto& d : derived.derived) {
    if (d.condition != Condition::new1 || d.status != Status::certified) continue;
    REQUIRE(d.mu);
    CHECK(d.mu->origin() == MuOrigin::geometric);
    for (int n : {0, 1, 5, 40}) CHECK(d.mu->log_mu(n) == doctest::Approx(std::log(3.0) + n * std::log(1.5)));
    found = true;
  }
  CHECK(found);
}

TEST_CASE("running every checker never violates the hierarchy") {
  std::vector<std::unique_ptr<OperatorModel>> models;
  for (const char* sym : {"j", "log(j)", "1 - 1/j", "sqrt(j)", "3"}) {
    models.push_back(model(sym, s_space()));
    models.push_back(model(sym, omega_space()));
  }
  models.push_back(std::make_unique<TaylorDiffModel>(1.0));
  models.push_back(std::make_unique<TaylorDiffModel>(kInf));
  models.push_back(std::make_unique<TrigDiffModel>());
  for (const auto& m : models) {
    CAPTURE(m->name());
    Classifier c(*m, {});
    auto closure = implication_closure(c.all());
    CHECK(closure.consistent);
  }
}

TEST_CASE("bounded and unbounded symbols split the first two conditions") {
  for (const char* sym : {"1 - 1/j", "min(j, 5)", "0.5", "j/(j+1)"}) {
    CAPTURE(sym);
    auto m = model(sym, s_space());
    CHECK(all_are(check_a_bounded(*m, quick()), Status::certified));
    CHECK(all_are(check_m_top(*m, quick()), Status::certified));
  }
  for (const char* sym : {"j", "log(j)", "sqrt(j)"}) {
    CAPTURE(sym);
    auto m = model(sym, s_space());
    CHECK(aggregate(check_a_bounded(*m, quick()), Condition::a_bdd) == Status::refuted);
    CHECK(aggregate(check_m_top(*m, quick()), Condition::m_top) == Status::refuted);
  }
  // a large offset hides the growth until n is beyond the exactly probed range
  for (const char* sym : {"log(j) + 12", "1.142654313426497*log(j) + 4.4722875374833855"}) {
    CAPTURE(sym);
    auto m = model(sym, s_space());
    CHECK(aggregate(check_m_top(*m, quick()), Condition::m_top) != Status::certified);
  }
}

TEST_CASE("certificates survive an independent recheck") {
  std::mt19937 rng(5);
  struct Case {
    const char* sym;
    SpaceDescriptor space;
  };
  const Case cases[] = {{"log(j)", s_space()}, {"j", omega_space()}, {"1 - 1/j", s_space()}, {"sqrt(j)", s_space()}};
  for (const auto& cs : cases) {
    auto m = model(cs.sym, cs.space);
    const auto& a = m->op();
    Classifier c(*m, quick());
    for (const auto& v : c.all()) {
      if (v.status != Status::certified || !v.q) continue;
      if (v.condition == Condition::new2 || v.condition == Condition::new1) continue;
      CAPTURE(cs.sym);
      CAPTURE(to_string(v.condition));
      const auto p = static_cast<Index>(v.p), q = static_cast<Index>(*v.q);
      std::uniform_int_distribution<int> pick_n(0, 40);
      std::uniform_int_distribution<Index> pick_j(1, 5000);
      for (int trial = 0; trial < 10; ++trial) {
        const int n = pick_n(rng);
        auto bound = certified_log_mu(v, n);
        if (!bound) continue;
        const double opt = optimal_mu(a, cs.space, p, q, n, 5000).log_mu;
        CHECK(opt <= *bound + 1e-9 * std::max(1.0, std::abs(*bound)));
        for (int u = 0; u < 100; ++u) {
          const Index j = pick_j(rng);
          const double lhs = seminorm(apply_power(a, n, unit_vector(j)), p, cs.space).value;
          const double rhs = seminorm(unit_vector(j), q, cs.space).value;
          if (lhs == 0.0) continue;
          CHECK(std::log(lhs) <= *bound + std::log(rhs) + 1e-9 * std::max(1.0, std::abs(*bound)));
        }
      }
    }
  }
}

TEST_CASE("m-topologizable but not a-bounded construction") {
  auto om = construct_cor44_operator(KotheMatrix::omega());
  REQUIRE(om.j_n.size() >= 10);
  for (auto [n, j] : om.j_n) CHECK(j == n + 1);
  CHECK(om.op.symbol(1.0) == Complex(0.0));
  for (int j = 2; j <= 16; ++j) CHECK(om.op.symbol(j) == Complex(j - 1.0));

  KotheDiagonalModel m(om.op, omega_space());
  CHECK(all_are(check_m_top(m, quick()), Status::certified));
  CHECK(aggregate(check_a_bounded(m, quick()), Condition::a_bdd) == Status::refuted);

  try {
    construct_cor44_operator(KotheMatrix::s(), 1000, 16);
    FAIL("expected inapplicable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::inapplicable);
  }

  auto two = KotheMatrix::custom(Expression::parse("max(0, min(1, 2*k - j + 1))"), Expression::parse("0"),
                                 Expression::parse("2*k"));
  auto c2 = construct_cor44_operator(two, 1000, 16);
  REQUIRE_FALSE(c2.j_n.empty());
  for (auto [n, j] : c2.j_n) CHECK(j == 2 * n + 1);
}
