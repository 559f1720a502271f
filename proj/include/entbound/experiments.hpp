#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "entbound/qstate.hpp"

namespace entbound {

// Monte Carlo driver configuration. Fields apply per kind:
//   page-entropy:     n (system), s (environment), trials
//   subspace-entropy: d (local), s (subspace dim), trials (subspaces),
//                     n (states per subspace, default 200)
//   overlap:          n (system), s (environment), trials
//   er-typical:       d, s with d <= s <= d^2, trials
//   ef-typical:       d, s, trials, n (support samples, default 200)
//   nonmono-scan:     d, s, trials, estimator (default "ef"), c
//   result1:          trials per local dimension (d sweeps {2, 4, 8})
struct ExperimentConfig {
  std::string kind;
  int d = 0;
  int s = 0;
  int n = 0;
  int trials = 1;
  std::uint64_t seed = 1;
  double tol = 0.5;
  std::string estimator = "ef";  // nonmono-scan only
  double c = 1.0;                // constraint constant, nonmono-scan only

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

struct ExperimentResult {
  nlohmann::json summary;
  std::vector<nlohmann::json> records;  // one JSON object per trial
};

ExperimentResult run_page_entropy(const ExperimentConfig& config);
ExperimentResult run_subspace_entropy(const ExperimentConfig& config);
ExperimentResult run_overlap(const ExperimentConfig& config);
ExperimentResult run_er_typical(const ExperimentConfig& config);
ExperimentResult run_ef_typical(const ExperimentConfig& config);
ExperimentResult run_nonmono_scan(const ExperimentConfig& config);
ExperimentResult run_result1_construction(const ExperimentConfig& config);

// Dispatches on config.kind.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Flat table of the scalar record fields (union of keys, sorted),
// suitable for plotting.
std::string records_to_csv(const std::vector<nlohmann::json>& records);

}  // namespace entbound
