#pragma once

#include <string>

#include "cdsc/budget.hpp"
#include "cdsc/harness.hpp"

namespace cdsc {

// File formats use 1-based node indices; everything in memory is 0-based.
// Floats are written with 17 significant digits so output is reproducible
// byte for byte and parses back exactly.

std::string fmt17(double v);

std::string model_to_json(const BayesNet& net);
BayesNet model_from_json(const std::string& text);

std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(const std::string& text);

std::string pattern_to_json(const Pattern& p);
Pattern pattern_from_json(const std::string& text);

std::string trace_to_jsonl(const DiscoveryTrace& trace);

std::string report_to_json(const BudgetReport& rep);
std::string report_to_csv(const BudgetReport& rep);

std::string curve_to_csv(const ErrorCurve& curve);
std::string comparison_to_csv(const std::vector<ComparisonRow>& rows);

ExpertiseSet expertise_from_json(const std::string& text, int n);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace cdsc
