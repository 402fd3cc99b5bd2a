#include "sglab/report.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <set>
#include <sstream>

namespace sglab {

namespace {

using nlohmann::json;

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

double parse_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return kNegInf;
  }
  return kNegInf;
}

json verdict_object(const Verdict& v) {
  json o;
  o["condition"] = to_string(v.condition);
  o["status"] = to_string(v.status);
  o["scope"] = v.scope;
  o["p"] = number(v.p);
  o["R"] = v.R ? number(*v.R) : json(nullptr);
  o["q"] = v.q ? number(*v.q) : json(nullptr);
  o["mu_summary"] = v.mu ? json(v.mu->summary()) : json(nullptr);
  if (v.mu_const) o["mu"] = number(*v.mu_const);
  if (v.M) o["M"] = number(*v.M);
  o["witness"] = v.witness;
  json ev = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(3, v.evidence.size()); ++i) {
    const auto& e = v.evidence[i];
    ev.push_back({{"index", number(e.index)}, {"log_value", number(e.log_value)}, {"log_bound", number(e.log_bound)}});
  }
  o["evidence_head"] = ev;
  if (!v.note.empty()) o["note"] = v.note;
  return o;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string verdict_json(const Verdict& v) { return verdict_object(v).dump(); }

std::string closure_json(const ClosureReport& c) {
  json o;
  o["record"] = "closure";
  o["consistent"] = c.consistent;
  o["violations"] = c.violations;
  o["derived"] = c.derived.size();
  return o.dump();
}

std::string value_json(const TruncatedSemigroupValue& v, Index window) {
  json o;
  o["record"] = "value";
  o["t"] = number(v.t);
  o["N_used"] = v.n_used;
  o["p_target"] = number(v.p_target);
  o["tail"] = number(v.tail);
  o["rounding"] = number(v.rounding);
  o["scope"] = v.scope;
  json coords = json::array();
  Index upto = window;
  if (auto s = v.vector.envelope().support) upto = std::min(upto, *s);
  for (Index j = 1; j <= upto; ++j) {
    Complex c = v.vector(j);
    if (c.imag() == 0.0)
      coords.push_back(number(c.real()));
    else
      coords.push_back({number(c.real()), number(c.imag())});
  }
  o["coordinates"] = coords;
  return o.dump();
}

std::string verdict_csv_header() { return "condition,status,scope,p,R,q,mu,mu_summary,witness,note"; }

std::string verdict_csv(const Verdict& v) {
  std::ostringstream os;
  os << to_string(v.condition) << ',' << to_string(v.status) << ',' << csv_field(v.scope) << ',' << fmt(v.p) << ','
     << (v.R ? fmt(*v.R) : "") << ',' << (v.q ? fmt(*v.q) : "") << ',' << (v.mu_const ? fmt(*v.mu_const) : "")
     << ',' << csv_field(v.mu ? v.mu->summary() : "") << ',' << csv_field(v.witness) << ','
     << csv_field(v.note);
  return os.str();
}

std::vector<std::string> merge_reports(const std::vector<std::string>& texts) {
  struct Row {
    int condition;
    double p;
    double R;
    std::string line;
  };
  std::vector<Row> verdicts;
  std::vector<std::string> others;
  std::set<std::string> seen;
  for (const auto& text : texts) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json o;
      try {
        o = json::parse(line);
      } catch (const json::parse_error& e) {
        throw Error(Errc::config, "malformed report line " + std::to_string(lineno) + ": " + e.what());
      }
      std::string canon = o.dump();
      if (!seen.insert(canon).second) continue;
      if (o.contains("condition") && o["condition"].is_string()) {
        int c = static_cast<int>(parse_condition(o["condition"].get<std::string>()));
        double R = o.contains("R") && !o["R"].is_null() ? parse_number(o["R"]) : kNegInf;
        verdicts.push_back({c, parse_number(o.value("p", json(0.0))), R, canon});
      } else {
        others.push_back(canon);
      }
    }
  }
  std::stable_sort(verdicts.begin(), verdicts.end(), [](const Row& a, const Row& b) {
    return std::tie(a.condition, a.p, a.R) < std::tie(b.condition, b.p, b.R);
  });
  std::vector<std::string> out;
  for (auto& r : verdicts) out.push_back(std::move(r.line));
  for (auto& o : others) out.push_back(std::move(o));
  return out;
}

}  // namespace sglab
