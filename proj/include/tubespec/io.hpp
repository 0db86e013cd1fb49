#pragma once

#include "tubespec/case_studies.hpp"
#include "tubespec/cluster.hpp"
#include "tubespec/fourier.hpp"
#include "tubespec/invariant_system.hpp"
#include "tubespec/operator.hpp"
#include "tubespec/propagation.hpp"
#include "tubespec/solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace tubespec {

using json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const json& j);

json to_json(const ProductFunction& f);
ProductFunction product_function_from_json(const json& j);

/// Coefficient terms accept {"eta","re","im"} as well as the shorthands
/// {"sin":eta,"scale":s}, {"cos":eta,"scale":s} and {"const":s}.
/// Exact values are integers, rational or decimal strings, or {"p","q"} for
/// p + q sqrt(d); float values are numbers or decimal strings.
json to_json(const OperatorSpec& spec);
OperatorSpec operator_spec_from_json(const json& j);

json to_json(const GammaLattice& g);
json to_json(const SystemBasis& s);
json to_json(const AghVerdict& v);
json to_json(const DecayVerdict& v);
json to_json(const AprioriProbe& p);
json to_json(const ClusterPartition& c);
json to_json(const SolveResult& r);  // summary; u is written separately
json to_json(const std::vector<Violation>& v);
json to_json(const Su2AghReport& r);
json to_json(const std::vector<KernelGrowthPoint>& g);
json to_json(const S1Report& r);
json to_json(const PropagationReport& r);

LocalWindow local_window_from_json(const json& j);

/// lambda,min_gap
std::string gap_minima_csv(const AghVerdict& v);
/// lambda,norm,fitted
std::string decay_csv(const DecayProfile& p);
/// xi,branch,residual,interior_residual,truncation_leak,sigma_min
std::string residuals_csv(const SolveResult& r);

std::string freq_to_string(const Freq& f);
std::string format_double(double x);

}  // namespace tubespec
