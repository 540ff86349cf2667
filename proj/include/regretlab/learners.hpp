#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regretlab/hypothesis.hpp"
#include "regretlab/ldim.hpp"

namespace regretlab {

/// Either a fixed label or the probability of predicting 1.
class Prediction {
 public:
  enum class Kind { kDeterministic, kRandomized };

  static Prediction deterministic(Label y) { return Prediction(Kind::kDeterministic, y == 1 ? 1.0 : 0.0); }
  static Prediction randomized(double p_one);

  Kind kind() const { return kind_; }
  bool is_deterministic() const { return kind_ == Kind::kDeterministic; }
  /// Deterministic label; only meaningful when is_deterministic().
  Label label() const { return p_one_ >= 0.5 ? 1 : 0; }
  double p_one() const { return p_one_; }
  double mistake_probability(Label y) const { return y == 1 ? 1.0 - p_one_ : p_one_; }

  friend bool operator==(const Prediction&, const Prediction&) = default;

 private:
  Prediction(Kind kind, double p) : kind_(kind), p_one_(p) {}

  Kind kind_;
  double p_one_;
};

enum class EtaVariant { kSqrt8, kSqrt2 };

/// How the realizable engines resolve an even split.
enum class TiePolicy {
  kPredictOne,  // the listings' rule
  kFairCoin,    // randomized 1/2, scored analytically
};

enum class RealizableEngine { kConsistent, kHalving, kSoa };

enum class LearnerKind { kConsistent, kHalving, kSoa, kWm, kWmConsistent, kWmHalving, kWmSoa };

struct LearnerConfig {
  LearnerKind kind = LearnerKind::kWm;
  EtaVariant eta = EtaVariant::kSqrt8;
  TiePolicy ties = TiePolicy::kPredictOne;
};

std::string_view to_string(LearnerKind kind);
std::string_view to_string(EtaVariant eta);
std::string_view to_string(TiePolicy ties);
LearnerKind parse_learner_kind(std::string_view name);
EtaVariant parse_eta_variant(std::string_view name);
TiePolicy parse_tie_policy(std::string_view name);

bool is_hybrid(LearnerKind kind);
/// Consistent, Halving and SOA without a weighted-majority fallback.
bool is_baseline(LearnerKind kind);
std::optional<RealizableEngine> realizable_engine(LearnerKind kind);

/// sqrt(8 ln d / T) or sqrt(2 ln d / T); 0 when d == 1 or T == 0.
double learning_rate(EtaVariant variant, std::size_t d, std::size_t horizon);

/// Weighted-majority state: learning rate plus per-expert mistake counts.
struct WmState {
  double eta = 0.0;
  MistakeVector mistakes;

  WmState() = default;
  WmState(double eta_, std::size_t d) : eta(eta_), mistakes(d, 0) {}

  /// w_i = exp(-eta M_i) / sum_j exp(-eta M_j).
  std::vector<double> weights() const;
};

Prediction wm_step(const WmState& state, std::span<const Label> advice);
void wm_update(WmState& state, std::span<const Label> advice, Label y);
/// Sum of weights of experts whose advice differs from y.
double wm_mistake_probability(const WmState& state, std::span<const Label> advice, Label y);

Prediction consistent_step(const VersionSpace& space, const HypothesisClass& cls, Instance x);
Prediction halving_step(const VersionSpace& space, const HypothesisClass& cls, Instance x,
                        TiePolicy ties = TiePolicy::kPredictOne);
Prediction soa_step(const VersionSpace& space, const HypothesisClass& cls, Instance x, LdimSolver& solver,
                    TiePolicy ties = TiePolicy::kPredictOne);

struct SwitchEvent {
  std::size_t round = 0;  // 1-based round whose feedback emptied the version space
  std::uint64_t min_mistakes = 0;
};

/// Mutable state of any of the seven learners.
///
/// Baselines stay in the realizable phase and refuse to step once the version
/// space is empty. Hybrids flip to weighted majority at that point, keeping
/// the mistake counts gathered so far. Plain WM starts in the agnostic phase.
class LearnerState {
 public:
  enum class Phase { kRealizable, kAgnostic };

  LearnerState(const HypothesisClass& cls, LearnerConfig config, std::size_t horizon);

  const LearnerConfig& config() const { return config_; }
  Phase phase() const { return phase_; }
  const VersionSpace& version_space() const { return space_; }
  const WmState& wm() const { return wm_; }
  const MistakeVector& mistakes() const { return wm_.mistakes; }
  const std::optional<SwitchEvent>& switch_event() const { return switch_; }
  std::size_t rounds() const { return rounds_; }
  /// Only present for SOA-based learners.
  LdimSolver* solver() { return solver_.get(); }

 private:
  friend Prediction learner_step(LearnerState&, const HypothesisClass&, Instance);
  friend void learner_feedback(LearnerState&, const HypothesisClass&, Instance, Label);

  LearnerConfig config_;
  Phase phase_;
  VersionSpace space_;
  WmState wm_;
  std::optional<SwitchEvent> switch_;
  std::size_t rounds_ = 0;
  std::unique_ptr<LdimSolver> solver_;
};

/// Prediction for x under the current phase.
Prediction learner_step(LearnerState& state, const HypothesisClass& cls, Instance x);
/// Reveal y: restrict the version space, count expert mistakes, maybe switch phase.
void learner_feedback(LearnerState& state, const HypothesisClass& cls, Instance x, Label y);

struct RoundRecord {
  std::size_t t = 0;
  Instance x = 0;
  Label y = 0;
  Prediction prediction = Prediction::deterministic(0);
  double mistake_prob = 0.0;
};

struct SampledSummary {
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> trial_mistakes;

  double mean() const;
  /// Standard error of the mean.
  double standard_error() const;
  std::uint64_t max() const;
};

struct RunTrace {
  std::vector<RoundRecord> rounds;
  double expected_mistakes = 0.0;
  std::uint64_t deterministic_mistakes = 0;
  std::optional<SwitchEvent> switch_event;
  MistakeVector final_mistakes;
  std::optional<SampledSummary> sampled;
};

struct RunMode {
  enum class Kind { kAnalytic, kSampled };
  Kind kind = Kind::kAnalytic;
  std::uint64_t seed = 0;
  std::size_t trials = 0;

  static RunMode analytic() { return {}; }
  static RunMode sampled(std::uint64_t seed, std::size_t trials) { return {Kind::kSampled, seed, trials}; }
};

struct RunOptions {
  RunMode mode;
  /// Skip per-round records; totals are still filled.
  bool record_rounds = true;
};

/// Play `seq` against a fresh learner. Analytic mode accumulates the exact
/// per-round mistake probability; sampled mode additionally draws predictions.
RunTrace run(const LearnerConfig& config, const HypothesisClass& cls, const Sequence& seq, RunOptions options = {});

/// One JSON object per round, newline separated.
std::string trace_to_jsonl(const RunTrace& trace);

}  // namespace regretlab
