#include "sglab/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "sglab/function_models.hpp"
#include "sglab/report.hpp"

namespace sglab {

namespace {

using nlohmann::json;

json load_json(const std::string& src, const char* what) {
  std::string text = src;
  if (src.find('{') == std::string::npos) {
    std::ifstream in(src);
    if (!in) throw Error(Errc::config, std::string("cannot read ") + what + " file '" + src + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::config, std::string("malformed ") + what + " JSON: " + e.what());
  }
}

std::string get_string(const json& o, const char* key, const std::string& fallback = "") {
  if (!o.contains(key)) return fallback;
  if (!o[key].is_string()) throw Error(Errc::config, std::string("'") + key + "' must be a string");
  return o[key].get<std::string>();
}

bool is_closed_symbol(const std::string& text, const char* form) {
  return Expression::parse(text) == Expression::parse(form);
}

std::vector<double> halvings(int count) {
  std::vector<double> h;
  for (int m = 1; m <= count; ++m) h.push_back(std::ldexp(1.0, -m));
  return h;
}

struct Sink {
  std::ostream& out;
  std::unique_ptr<std::ofstream> file;
  std::ostream& stream() { return file ? *file : out; }
};

Sink open_sink(std::ostream& out, const std::string& path) {
  Sink s{out, nullptr};
  if (!path.empty()) {
    s.file = std::make_unique<std::ofstream>(path);
    if (!*s.file) throw Error(Errc::config, "cannot write '" + path + "'");
  }
  return s;
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case Errc::config:
    case Errc::syntax:
    case Errc::domain: return kExitConfig;
    default: return kExitUnresolved;
  }
}

void emit_error(std::ostream& out, std::ostream& err, const Error& e) {
  json o{{"record", "error"}, {"code", to_string(e.code())}, {"message", e.what()}};
  out << o.dump() << '\n';
  err << "sglab: " << to_string(e.code()) << ": " << e.what() << '\n';
}

struct Common {
  std::string space, op, out_path;
  Index j_max = kDefaultJMax;
  Index k_max = kDefaultKMax;
  int n_probe = 64;
  std::vector<double> p_list, q_candidates, R_list;
  double tol = 1e-10;
  bool csv = false;

  RunConfig config() const {
    RunConfig cfg = load_run_config(space, op);
    if (j_max < 20 || k_max < 2 || n_probe < 1) throw Error(Errc::config, "jmax, kmax and nprobe must be positive");
    if (!(tol > 0.0)) throw Error(Errc::config, "tol must be positive");
    cfg.j_max = j_max;
    cfg.k_max = k_max;
    cfg.probe.n_probe = n_probe;
    cfg.probe.p_list = p_list;
    cfg.probe.q_candidates = q_candidates;
    if (!R_list.empty()) cfg.probe.R_list = R_list;
    cfg.tol = tol;
    return cfg;
  }
};

void add_common(CLI::App* sub, Common& c, bool model_flags) {
  sub->add_option("--space", c.space, "space JSON file or inline object")->required();
  sub->add_option("--operator", c.op, "operator JSON file or inline object")->required();
  sub->add_option("--jmax", c.j_max, "probed index window");
  sub->add_option("--kmax", c.k_max, "probed matrix columns");
  sub->add_option("--tol", c.tol, "tolerance");
  sub->add_option("--out", c.out_path, "write records to FILE");
  sub->add_option("--p", c.p_list, "seminorm indices")->delimiter(',');
  if (model_flags) {
    sub->add_option("--nprobe", c.n_probe, "largest probed power");
    sub->add_option("--q-candidates", c.q_candidates, "q candidates")->delimiter(',');
    sub->add_option("--R", c.R_list, "radii for the series condition")->delimiter(',');
    sub->add_flag("--csv", c.csv, "CSV instead of JSON lines");
  }
}

int classify(const Common& c, const std::vector<std::string>& conditions, std::ostream& out) {
  RunConfig cfg = c.config();
  BuiltModel bm = build_model(cfg);
  Classifier cl(*bm.model, cfg.probe);
  std::vector<Verdict> vs;
  if (conditions.empty()) {
    vs = cl.all();
  } else {
    for (const auto& name : conditions) {
      std::vector<Verdict> part;
      switch (parse_condition(name)) {
        case Condition::a_bdd: part = cl.a_bounded(); break;
        case Condition::m_top: part = cl.m_top(); break;
        case Condition::top: part = cl.topologizable(); break;
        case Condition::new1: part = cl.new1(); break;
        case Condition::new2: part = cl.new2(); break;
        case Condition::a_bdd_gen: throw Error(Errc::config, "A-BDD-GEN is derived, not checked directly");
      }
      vs.insert(vs.end(), part.begin(), part.end());
    }
    sort_verdicts(vs);
  }
  auto closure = implication_closure(vs);
  Sink sink = open_sink(out, c.out_path);
  auto& os = sink.stream();
  if (c.csv) {
    os << verdict_csv_header() << '\n';
    for (const auto& v : vs) os << verdict_csv(v) << '\n';
  } else {
    for (const auto& v : vs) os << verdict_json(v) << '\n';
    for (const auto& v : closure.derived) {
      Verdict d = v;
      if (d.note.empty()) d.note = "derived by implication";
      os << verdict_json(d) << '\n';
    }
    os << closure_json(closure) << '\n';
  }
  bool resolved = closure.consistent;
  for (const auto& v : vs) resolved = resolved && v.status != Status::inconclusive;
  return resolved ? kExitOk : kExitUnresolved;
}

double default_p(const BuiltModel& bm, const Common& c) {
  return c.p_list.empty() ? bm.model->default_p_list().front() : c.p_list.front();
}

EvaluationPlan make_plan(const BuiltModel& bm, double p, double R, int links, double tol, Index window) {
  if (!bm.op) throw Error(Errc::no_domination, "no dominating mu-sequence: this model has no series certificate");
  EvaluationPlan plan = plan_for(*bm.model, bm.norm, p, R, links, tol);
  plan.coord_window = window;
  return plan;
}

}  // namespace

RunConfig load_run_config(const std::string& space_src, const std::string& operator_src) {
  RunConfig cfg;
  json s = load_json(space_src, "space");
  json o = load_json(operator_src, "operator");
  if (!s.is_object() || !o.is_object()) throw Error(Errc::config, "space and operator must be JSON objects");
  cfg.family = get_string(s, "family");
  static const std::vector<std::string> families{"omega", "s", "custom", "hd", "hc", "cinfty"};
  if (std::find(families.begin(), families.end(), cfg.family) == families.end())
    throw Error(Errc::config, "unknown space family '" + cfg.family + "'");
  if (s.contains("r")) {
    if (s["r"].is_number())
      cfg.order_r = s["r"].get<double>();
    else if (s["r"].is_string())
      cfg.order_r = parse_order(s["r"].get<std::string>());
    else
      throw Error(Errc::config, "'r' must be a number or \"inf\"");
    if (!(cfg.order_r >= 1.0)) throw Error(Errc::config, "order r must be >= 1");
  }
  cfg.b_expr = get_string(s, "b_expr", get_string(s, "b"));
  cfg.growth_expr = get_string(s, "growth");
  cfg.support_expr = get_string(s, "support");
  if (cfg.family == "custom" && cfg.b_expr.empty()) throw Error(Errc::config, "custom family needs 'b'");

  cfg.op_kind = get_string(o, "kind", "diagonal");
  if (cfg.op_kind == "taylor_diff") cfg.op_kind = "taylor";
  cfg.symbol = get_string(o, "a_expr", get_string(o, "symbol"));
  if (cfg.op_kind == "diagonal" && cfg.symbol.empty()) throw Error(Errc::config, "diagonal operator needs 'symbol'");
  const bool kothe = cfg.family == "omega" || cfg.family == "s" || cfg.family == "custom";
  if ((cfg.op_kind == "diagonal") != kothe || (cfg.op_kind == "taylor" && cfg.family == "cinfty") ||
      (cfg.op_kind == "ddx" && cfg.family != "cinfty") ||
      (cfg.op_kind != "diagonal" && cfg.op_kind != "taylor" && cfg.op_kind != "ddx"))
    throw Error(Errc::config, "operator kind '" + cfg.op_kind + "' does not act on family '" + cfg.family + "'");
  return cfg;
}

std::optional<KotheMatrix> build_matrix(const RunConfig& cfg) {
  if (cfg.family == "omega") return KotheMatrix::omega();
  if (cfg.family == "s") return KotheMatrix::s();
  if (cfg.family != "custom") return std::nullopt;
  std::optional<Expression> growth, support;
  if (!cfg.growth_expr.empty()) growth = Expression::parse(cfg.growth_expr);
  if (!cfg.support_expr.empty()) support = Expression::parse(cfg.support_expr);
  return KotheMatrix::custom(Expression::parse(cfg.b_expr), growth, support);
}

BuiltModel build_model(const RunConfig& cfg) {
  BuiltModel bm;
  if (auto m = build_matrix(cfg)) {
    DiagonalOperator a = is_closed_symbol(cfg.symbol, "j")        ? DiagonalOperator::index_symbol()
                         : is_closed_symbol(cfg.symbol, "log(j)") ? DiagonalOperator::log_symbol()
                                                                  : DiagonalOperator::from_expr(
                                                                        Expression::parse(cfg.symbol), cfg.j_max);
    SpaceDescriptor space(*m, cfg.order_r);
    bm.op = a;
    bm.norm = kothe_norm(space);
    bm.model = std::make_unique<KotheDiagonalModel>(a, space, cfg.j_max, cfg.k_max);
    return bm;
  }
  if (cfg.family == "hd" || cfg.family == "hc") {
    const double radius = cfg.family == "hd" ? 1.0 : kInf;
    bm.op = TaylorDifferentiation{};
    bm.norm = hd_norm(radius);
    bm.model = std::make_unique<TaylorDiffModel>(radius);
    return bm;
  }
  bm.model = std::make_unique<TrigDiffModel>();
  return bm;
}

CoefficientVector parse_vector_spec(const std::string& spec) {
  auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto numbers = [&](char sep) {
    std::vector<double> v;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, sep)) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw Error(Errc::config, "bad number '" + item + "' in vector spec '" + spec + "'");
      }
    }
    return v;
  };
  if (kind == "ones" && arg.empty()) return CoefficientVector::ones();
  if (kind == "zero" && arg.empty()) return CoefficientVector::zero();
  if (kind == "unit") {
    auto v = numbers(',');
    if (v.size() != 1 || v[0] < 1 || v[0] != std::floor(v[0])) throw Error(Errc::config, "unit:J needs J >= 1");
    return CoefficientVector::unit(static_cast<Index>(v[0]));
  }
  if (kind == "geometric") {
    auto v = numbers(':');
    if (v.empty() || v.size() > 2 || !(v[0] > 0.0)) throw Error(Errc::config, "geometric:RHO[:SCALE] needs RHO > 0");
    return CoefficientVector::geometric(v[0], v.size() == 2 ? v[1] : 1.0);
  }
  if (kind == "finite") {
    auto v = numbers(',');
    if (v.empty()) throw Error(Errc::config, "finite: needs coefficients");
    return CoefficientVector::finite(std::vector<Complex>(v.begin(), v.end()));
  }
  throw Error(Errc::config, "unknown vector spec '" + spec + "'");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boundedness classification and exponential-series semigroups on Frechet sequence spaces", "sglab"};
  app.require_subcommand(1);

  Common cls;
  std::vector<std::string> conditions;
  auto* c_classify = app.add_subcommand("classify", "classify an operator");
  add_common(c_classify, cls, true);
  c_classify->add_option("--conditions", conditions, "subset of A-BDD,M-TOP,TOP,NEW1,NEW2")->delimiter(',');

  Common ev;
  double t = 0.0, horizon = 0.0;
  std::string xspec = "unit:1";
  Index window = 50;
  bool piecewise = false;
  auto* c_eval = app.add_subcommand("evaluate", "evaluate T(t)x by the exponential series");
  add_common(c_eval, ev, false);
  c_eval->add_option("--t", t, "time")->required();
  c_eval->add_option("--x", xspec, "input vector");
  c_eval->add_option("--R", horizon, "certificate horizon (default: t)");
  c_eval->add_option("--window", window, "coordinates reported");
  c_eval->add_flag("--piecewise", piecewise, "T(t) = T(R)^n T(w) beyond the horizon");

  Common vf;
  std::string vx = "unit:2";
  bool corrupt = false;
  auto* c_verify = app.add_subcommand("verify", "semigroup law, generator and continuity checks");
  add_common(c_verify, vf, false);
  c_verify->add_option("--x", vx, "input vector");
  c_verify->add_flag("--corrupt-tail", corrupt, "self-test: replace certified bounds by a negative value");

  auto* c_witness = app.add_subcommand("witness", "explicit constructions");
  c_witness->require_subcommand(1);
  std::string w_space;
  Index w_jmax = kDefaultJMax, w_kmax = kDefaultKMax;
  auto* w_cor = c_witness->add_subcommand("cor44", "diagonal operator that is m-topologizable but not a-bounded");
  w_cor->add_option("--space", w_space, "space JSON file or inline object")->required();
  w_cor->add_option("--jmax", w_jmax, "probed index window");
  w_cor->add_option("--kmax", w_kmax, "probed matrix columns");
  int k_deg = 60;
  auto* w_hd = c_witness->add_subcommand("hd-divergence", "exact values of T(1) f_k at 3/4 on the unit disc");
  w_hd->add_option("--k", k_deg, "largest degree");
  int wp = 0, wq = 1;
  std::vector<double> mus;
  auto* w_ci = c_witness->add_subcommand("cinfty", "witness k against a finite mu-list for d/dx");
  w_ci->add_option("--p", wp, "seminorm order p")->required();
  w_ci->add_option("--q", wq, "seminorm order q")->required();
  w_ci->add_option("--mu", mus, "mu_0, mu_1, ...")->delimiter(',')->required();

  std::vector<std::string> merge_files;
  std::string merge_out;
  auto* c_merge = app.add_subcommand("report-merge", "merge JSON-line reports");
  c_merge->add_option("files", merge_files, "report files")->required();
  c_merge->add_option("--out", merge_out, "write merged report to FILE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (c_classify->parsed()) return classify(cls, conditions, out);

    if (c_eval->parsed()) {
      RunConfig cfg = ev.config();
      BuiltModel bm = build_model(cfg);
      CoefficientVector x = parse_vector_spec(xspec);
      if (!(t >= 0.0)) throw Error(Errc::config, "--t must be >= 0");
      const double R = horizon > 0.0 ? horizon : std::max(t, 1e-9);
      if (t > R && !piecewise) {
        std::ostringstream os;
        os << "t=" << t << " beyond certificate horizon R=" << R << "; pass --piecewise";
        throw Error(Errc::beyond_horizon, os.str());
      }
      const int links = t > R ? static_cast<int>(std::floor(t / R)) + 1 : 1;
      EvaluationPlan plan = make_plan(bm, default_p(bm, ev), R, links, cfg.tol, window);
      auto value = t > R ? evaluate_piecewise(*bm.op, x, t, R, plan) : evaluate(*bm.op, x, t, plan);
      Sink sink = open_sink(out, ev.out_path);
      sink.stream() << value_json(value, window) << '\n';
      return kExitOk;
    }

    if (c_verify->parsed()) {
      RunConfig cfg = vf.config();
      BuiltModel bm = build_model(cfg);
      CoefficientVector x = parse_vector_spec(vx);
      EvaluationPlan plan = make_plan(bm, default_p(bm, vf), 2.0, 2, cfg.tol, 50);
      Sink sink = open_sink(out, vf.out_path);
      auto& os = sink.stream();
      bool ok = true;
      auto record = [&](json o, double residual, double bound) {
        if (corrupt) bound = -1.0;
        const bool pass = residual <= bound;
        ok = ok && pass;
        o["residual"] = residual;
        o["bound"] = bound;
        o["margin"] = bound - residual;
        o["pass"] = pass;
        os << o.dump() << '\n';
        return pass;
      };
      for (auto [tt, ss] : {std::pair{0.3, 0.7}, std::pair{1.0, 1.0}}) {
        auto law = verify_semigroup_law(*bm.op, x, tt, ss, plan);
        record({{"check", "semigroup_law"}, {"t", tt}, {"s", ss}}, law.residual, law.bound);
      }
      auto gen = verify_generator(*bm.op, x, halvings(10), plan);
      for (const auto& row : gen.rows) record({{"check", "generator"}, {"h", row.h}}, row.residual, row.bound);
      if (!gen.linear_decay) ok = false;
      os << json{{"check", "generator_decay"}, {"pass", gen.linear_decay}}.dump() << '\n';
      auto mod = continuity_modulus(*bm.op, {x}, 1.0, halvings(10), plan);
      for (const auto& row : mod.rows)
        record({{"check", "continuity_modulus"}, {"t", 1.0}, {"h", row.h}, {"bound_k", row.bound_k}}, row.modulus,
               std::min(row.bound, row.bound_k));
      if (!mod.vanishing) ok = false;
      os << json{{"check", "modulus_vanishing"}, {"pass", mod.vanishing}}.dump() << '\n';
      return ok ? kExitOk : kExitUnresolved;
    }

    if (w_cor->parsed()) {
      RunConfig cfg = load_run_config(w_space, R"({"kind":"diagonal","symbol":"0"})");
      auto m = build_matrix(cfg);
      if (!m) throw Error(Errc::config, "cor44 needs a Koethe space family");
      auto con = construct_cor44_operator(*m, w_jmax, w_kmax);
      json jn = json::array();
      for (auto [n, j] : con.j_n) jn.push_back({n, j});
      KotheDiagonalModel model(con.op, SpaceDescriptor(*m, cfg.order_r), w_jmax, w_kmax);
      Classifier cl(model, {});
      bool match = true;
      json observed = json::object();
      for (auto [cond, expected] : con.expected) {
        auto vs = cond == Condition::a_bdd ? cl.a_bounded() : cl.m_top();
        auto st = aggregate(vs, cond);
        observed[to_string(cond)] = st ? to_string(*st) : "none";
        match = match && st && *st == expected;
      }
      out << json{{"record", "cor44"}, {"j_n", jn}, {"operator", con.op.label()}, {"observed", observed},
                  {"matches_expected", match}}
                 .dump()
          << '\n';
      return match ? kExitOk : kExitUnresolved;
    }

    if (w_hd->parsed()) {
      bool all = true;
      for (int k = 0; k <= k_deg; ++k) {
        auto w = divergence_witness(k);
        all = all && w.exceeds;
        out << json{{"record", "hd_divergence"}, {"k", k},      {"exact", w.exact_value},
                    {"bound", w.lower_bound},   {"exceeds", w.exceeds}}
                   .dump()
            << '\n';
      }
      return all ? kExitOk : kExitUnresolved;
    }

    if (w_ci->parsed()) {
      auto w = cinfty_refutation(wp, wq, mus);
      out << json{{"record", "cinfty"},        {"p", w.p},
                  {"q", w.q},                  {"n", w.n},
                  {"mu_n", w.mu},              {"k", w.k.str()},
                  {"log10_lhs", w.log10_lhs},  {"log10_rhs", w.log10_rhs},
                  {"verified", w.verified}}
                 .dump()
          << '\n';
      return w.verified ? kExitOk : kExitUnresolved;
    }

    if (c_merge->parsed()) {
      std::vector<std::string> texts;
      for (const auto& f : merge_files) {
        std::ifstream in(f);
        if (!in) throw Error(Errc::config, "cannot read '" + f + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        texts.push_back(ss.str());
      }
      Sink sink = open_sink(out, merge_out);
      for (const auto& line : merge_reports(texts)) sink.stream() << line << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    emit_error(out, err, e);
    return exit_for(e);
  }
  return kExitConfig;
}

}  // namespace sglab
