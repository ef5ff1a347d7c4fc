#pragma once

#include <string>
#include <vector>

namespace hlri {

enum class RepairStatus { total, partial, no_surface };
enum class ConvergenceMode { strong, weak, undetermined };

std::string to_string(RepairStatus status);
std::string to_string(ConvergenceMode mode);

struct RepairConfig {
  double alpha = 0.5;         // amplitude fraction of Delta_max = alpha * beta
  int k_max = 50;             // iteration cap
  double eta = 1e-3;          // stop tolerance on |g|
  double beta_ref = 4.0;      // amplitude scale when beta is small (see Delta_max^0)
  double beta_cap = 2.0;      // runaway bound, multiples of beta_max
  int stability_retries = 8;  // amplitude reductions tried per unstable step
  int stall_limit = 2;        // consecutive non-decreasing steps before giving up

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Entry k holds the iterate beta^k and g^k = G(beta^k a). For k >= 1,
/// delta_beta and delta_max describe the step that produced it and `stable`
/// tells whether |g| strictly decreased on that step. Entry 0 carries the
/// initial amplitude.
struct TraceEntry {
  int k = 0;
  double beta = 0.0;
  double g = 0.0;
  double delta_beta = 0.0;
  double delta_max = 0.0;
  bool stable = true;
};

struct RepairOutcome {
  double final_beta = 0.0;
  double final_g = 0.0;
  RepairStatus status = RepairStatus::partial;
  ConvergenceMode mode = ConvergenceMode::undetermined;
  int iterations = 0;
  long evaluations = 0;  // limit-state calls spent by this repair
  std::vector<TraceEntry> trace;
};

}  // namespace hlri
