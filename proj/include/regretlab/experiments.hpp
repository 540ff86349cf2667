#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "regretlab/hypothesis.hpp"
#include "regretlab/learners.hpp"
#include "regretlab/sequences.hpp"

namespace regretlab {

struct BoundVerdict {
  std::string name;
  double bound = 0.0;
  double observed = 0.0;
  bool pass = false;

  friend bool operator==(const BoundVerdict&, const BoundVerdict&) = default;
};

inline constexpr double kBoundTolerance = 1e-9;

BoundVerdict make_verdict(std::string name, double bound, double observed);

struct PermutationReport {
  LearnerConfig learner;
  ExperimentCase experiment;
  std::size_t permutations = 0;
  double expected_mistakes = 0.0;
  /// Largest per-permutation analytic expected mistakes.
  double max_mistakes = 0.0;
  /// Largest realized mistake count over the seeded prediction draws.
  std::uint64_t max_realized_mistakes = 0;
  /// Mean of the sampled trials; present only for sampled mode.
  std::optional<double> sampled_mean_mistakes;
  std::uint64_t best_mistakes = 0;
  double expected_regret = 0.0;
  std::vector<BoundVerdict> verdicts;
};

struct EvaluateOptions {
  /// Seed for the prediction draws behind max_realized_mistakes.
  std::uint64_t seed = 0;
  /// Prediction draws per permutation; 1 for analytic mode.
  std::size_t trials = 1;
  /// Report the sampled mean (sampled mode).
  bool report_sampled_mean = false;
  std::size_t jobs = 1;
};

/// Replay a fresh learner on every permutation and aggregate.
///
/// Per-permutation results land in index order and are summed sequentially,
/// so the report is bit-identical for any `jobs`.
PermutationReport evaluate(const LearnerConfig& learner, const ExperimentCase& experiment,
                           const HypothesisClass& cls, const PermutationStream& stream,
                           const EvaluateOptions& options = {});

/// Builds the threshold class and labeled base sequence for `experiment`.
PermutationReport evaluate(const LearnerConfig& learner, const ExperimentCase& experiment,
                           const PermutationStream& stream, const EvaluateOptions& options = {});

/// Realizable mistake bound of `kind` on `cls`, or nullopt for plain WM.
std::optional<double> realizable_mistake_bound(LearnerKind kind, const HypothesisClass& cls, std::size_t horizon);
/// Expected-regret bound of a WM-family learner; nullopt for baselines.
std::optional<double> agnostic_regret_bound(LearnerKind kind, const HypothesisClass& cls, std::size_t horizon);

/// Verdicts chosen by the case kind. Realizable cases compare the worst
/// permutation against the mistake bound; unrealizable cases compare both the
/// mean and the worst per-permutation expected regret against the regret bound.
std::vector<BoundVerdict> check_bounds(const PermutationReport& report, const HypothesisClass& cls);

enum class ReportFormat { kCsv, kJson, kMarkdown };

ReportFormat parse_report_format(std::string_view name);
std::string emit_report(const std::vector<PermutationReport>& reports, ReportFormat format);
std::string emit_report(const std::vector<PermutationReport>& reports, std::string_view format);

/// Inverse of the JSON emitter.
std::vector<PermutationReport> reports_from_json(const std::string& text);

}  // namespace regretlab
