#pragma once

// Command surface: classify | evaluate | verify | witness | report-merge.
// Exit codes: 0 success, 1 unresolved or violated, 2 configuration error.

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sglab/classifier.hpp"
#include "sglab/expo_semigroup.hpp"

namespace sglab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUnresolved = 1;
inline constexpr int kExitConfig = 2;

// Space file:    {"family": "omega"|"s"|"custom"|"hd"|"hc"|"cinfty", "r": 1|"inf",
//                 "b_expr": "<expr in j,k>", "growth": "<expr in k>", "support": "<expr in k>"}
// Operator file: {"kind": "diagonal"|"taylor_diff"|"ddx", "a_expr": "<expr in j>"}
// ("b", "symbol" and "taylor" are accepted as aliases.)
struct RunConfig {
  std::string family = "s";
  double order_r = 1.0;
  std::string b_expr, growth_expr, support_expr;
  std::string op_kind = "diagonal";
  std::string symbol;
  Index j_max = kDefaultJMax;
  Index k_max = kDefaultKMax;
  ProbeConfig probe;
  double tol = 1e-10;
};

// Each source is a file path or an inline JSON object. Errors: config.
RunConfig load_run_config(const std::string& space_src, const std::string& operator_src);

std::optional<KotheMatrix> build_matrix(const RunConfig& cfg);

struct BuiltModel {
  std::unique_ptr<OperatorModel> model;
  std::optional<Operator> op;  // absent for the trigonometric model
  SeminormFn norm;
};

BuiltModel build_model(const RunConfig& cfg);

// "unit:J", "ones", "zero", "geometric:RHO[:SCALE]", "finite:c1,c2,..."
CoefficientVector parse_vector_spec(const std::string& spec);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sglab
