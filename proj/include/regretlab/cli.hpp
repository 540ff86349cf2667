#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "regretlab/experiments.hpp"
#include "regretlab/learners.hpp"
#include "regretlab/sequences.hpp"

namespace regretlab {

struct PermutationSpec {
  bool exhaustive = true;
  std::size_t count = 0;  // sampled only

  friend bool operator==(const PermutationSpec&, const PermutationSpec&) = default;
};

struct ModeSpec {
  bool sampled = false;
  std::size_t trials = 1;

  friend bool operator==(const ModeSpec&, const ModeSpec&) = default;
};

PermutationSpec parse_permutation_spec(const std::string& text);  // exhaustive | sampled:N
ModeSpec parse_mode_spec(const std::string& text);                // analytic | sampled:N
std::string to_string(const PermutationSpec& spec);
std::string to_string(const ModeSpec& spec);

struct ExperimentConfig {
  CaseKind case_kind = CaseKind::kRealizable;
  std::size_t horizon = 8;
  std::size_t hypotheses = 4;
  std::vector<LearnerKind> learners{LearnerKind::kWm, LearnerKind::kWmHalving};
  PermutationSpec permutations;
  std::uint64_t seed = 0;
  EtaVariant eta = EtaVariant::kSqrt8;
  TiePolicy ties = TiePolicy::kPredictOne;
  ModeSpec mode;
  ReportFormat format = ReportFormat::kCsv;
  std::string out;  // empty: standard output
  std::size_t jobs = 1;
  bool check_bounds = true;

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

/// Runs every configured learner on the configured case.
std::vector<PermutationReport> run_experiment(const ExperimentConfig& config);

/// Prints one line per failed verdict; true if any failed.
bool report_violations(const std::vector<PermutationReport>& reports, std::ostream& err);

/// Exit codes: 0 success, 1 usage or configuration error, 2 a bound check failed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int gen_cmd(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace regretlab
