#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace txlaw {

struct AcceptanceOptions {
  long N = 0;             // 0 keeps each criterion's own size
  int runs = 0;           // 0 keeps each criterion's own run count
  std::uint64_t seed = 20240611;
  int threads = 1;
};

struct SubCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double limit = 0.0;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::vector<SubCheck> checks;
  std::string error;  // set when the criterion threw
};

inline constexpr int kCriterionCount = 11;

CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});

// Named groups: all, oracles, figures, circular-law, local-laws, kernels, or a
// comma-separated list of criterion numbers.
std::vector<int> suite_criteria(const std::string& suite);

std::string summary_line(const CriterionResult& r);
nlohmann::json to_json(const CriterionResult& r);

struct SweepReport {
  int instances = 0;
  int violations = 0;
  std::vector<std::string> notes;  // first few violations
  double max_ratio = 0.0;          // largest |h + √w| / (τ⁻¹ w^{-1/2} + |z|) seen
};

// Pole and coefficient bounds, critical-point occupancy and ordering.
SweepReport lemma_sweep(int instances, std::uint64_t seed);

// Residual and orthogonality invariants of the dense kernels.
SweepReport kernel_sweep(int instances, std::uint64_t seed);

}  // namespace txlaw
