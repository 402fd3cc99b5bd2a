#pragma once

// Line-delimited JSON records and CSV tables for verdicts and evaluations.

#include <string>
#include <vector>

#include "sglab/classifier.hpp"
#include "sglab/expo_semigroup.hpp"

namespace sglab {

std::string verdict_json(const Verdict& v);
std::string closure_json(const ClosureReport& c);
std::string value_json(const TruncatedSemigroupValue& v, Index window);

std::string verdict_csv_header();
std::string verdict_csv(const Verdict& v);

// Concatenates JSONL reports; verdict records are deduplicated and sorted by
// (condition, p, R), other records follow in input order. Errors: config on
// malformed lines.
std::vector<std::string> merge_reports(const std::vector<std::string>& texts);

}  // namespace sglab
