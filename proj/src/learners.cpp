#include "regretlab/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "regretlab/random.hpp"

namespace regretlab {

Prediction Prediction::randomized(double p_one) { return Prediction(Kind::kRandomized, std::clamp(p_one, 0.0, 1.0)); }

namespace {

struct KindName {
  LearnerKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {LearnerKind::kConsistent, "consistent"},
    {LearnerKind::kHalving, "halving"},
    {LearnerKind::kSoa, "soa"},
    {LearnerKind::kWm, "wm"},
    {LearnerKind::kWmConsistent, "wm_consistent"},
    {LearnerKind::kWmHalving, "wm_halving"},
    {LearnerKind::kWmSoa, "wm_soa"},
};

Prediction tie_prediction(TiePolicy ties) {
  return ties == TiePolicy::kFairCoin ? Prediction::randomized(0.5) : Prediction::deterministic(1);
}

void require_nonempty(const VersionSpace& space) {
  if (space.empty()) throw WrongPhase("version space is empty; the realizable phase is over");
}

}  // namespace

std::string_view to_string(LearnerKind kind) {
  for (const auto& entry : kKindNames) {
    if (entry.kind == kind) return entry.name;
  }
  return "unknown";
}

std::string_view to_string(EtaVariant eta) { return eta == EtaVariant::kSqrt8 ? "sqrt8" : "sqrt2"; }

std::string_view to_string(TiePolicy ties) { return ties == TiePolicy::kPredictOne ? "one" : "coin"; }

LearnerKind parse_learner_kind(std::string_view name) {
  for (const auto& entry : kKindNames) {
    if (entry.name == name) return entry.kind;
  }
  throw ConfigError("unknown learner '" + std::string(name) + "'");
}

EtaVariant parse_eta_variant(std::string_view name) {
  if (name == "sqrt8") return EtaVariant::kSqrt8;
  if (name == "sqrt2") return EtaVariant::kSqrt2;
  throw ConfigError("unknown eta variant '" + std::string(name) + "' (expected sqrt8 or sqrt2)");
}

TiePolicy parse_tie_policy(std::string_view name) {
  if (name == "one") return TiePolicy::kPredictOne;
  if (name == "coin") return TiePolicy::kFairCoin;
  throw ConfigError("unknown tie policy '" + std::string(name) + "' (expected one or coin)");
}

bool is_hybrid(LearnerKind kind) {
  return kind == LearnerKind::kWmConsistent || kind == LearnerKind::kWmHalving || kind == LearnerKind::kWmSoa;
}

bool is_baseline(LearnerKind kind) {
  return kind == LearnerKind::kConsistent || kind == LearnerKind::kHalving || kind == LearnerKind::kSoa;
}

std::optional<RealizableEngine> realizable_engine(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kConsistent:
    case LearnerKind::kWmConsistent:
      return RealizableEngine::kConsistent;
    case LearnerKind::kHalving:
    case LearnerKind::kWmHalving:
      return RealizableEngine::kHalving;
    case LearnerKind::kSoa:
    case LearnerKind::kWmSoa:
      return RealizableEngine::kSoa;
    case LearnerKind::kWm:
      break;
  }
  return std::nullopt;
}

double learning_rate(EtaVariant variant, std::size_t d, std::size_t horizon) {
  if (d <= 1 || horizon == 0) return 0.0;
  const double scale = variant == EtaVariant::kSqrt8 ? 8.0 : 2.0;
  return std::sqrt(scale * std::log(static_cast<double>(d)) / static_cast<double>(horizon));
}

std::vector<double> WmState::weights() const {
  std::vector<double> w(mistakes.size());
  if (w.empty()) return w;
  // Shifting by the minimum count leaves the ratios unchanged and keeps the
  // largest term at exp(0) = 1.
  const auto lowest = *std::min_element(mistakes.begin(), mistakes.end());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(-eta * static_cast<double>(mistakes[i] - lowest));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= total;
  return w;
}

Prediction wm_step(const WmState& state, std::span<const Label> advice) {
  if (advice.size() != state.mistakes.size()) {
    throw DimensionMismatch("advice has " + std::to_string(advice.size()) + " entries, expected " +
                            std::to_string(state.mistakes.size()));
  }
  const auto w = state.weights();
  double p = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (advice[i] == 1) p += w[i];
  }
  return Prediction::randomized(p);
}

double wm_mistake_probability(const WmState& state, std::span<const Label> advice, Label y) {
  if (advice.size() != state.mistakes.size()) throw DimensionMismatch("advice length does not match expert count");
  const auto w = state.weights();
  double p = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (advice[i] != y) p += w[i];
  }
  return std::clamp(p, 0.0, 1.0);
}

void wm_update(WmState& state, std::span<const Label> advice, Label y) {
  if (advice.size() != state.mistakes.size()) throw DimensionMismatch("advice length does not match expert count");
  for (std::size_t i = 0; i < advice.size(); ++i) state.mistakes[i] += advice[i] != y;
}

Prediction consistent_step(const VersionSpace& space, const HypothesisClass& cls, Instance x) {
  require_nonempty(space);
  return Prediction::deterministic(evaluate(cls, space.first(), x));
}

Prediction halving_step(const VersionSpace& space, const HypothesisClass& cls, Instance x, TiePolicy ties) {
  require_nonempty(space);
  const auto& ones = cls.ones_at(cls.index_of(x));
  const std::size_t votes_one = (space & ones).count();
  const std::size_t votes_zero = space.count() - votes_one;
  if (votes_one == votes_zero) return tie_prediction(ties);
  return Prediction::deterministic(votes_one > votes_zero ? 1 : 0);
}

Prediction soa_step(const VersionSpace& space, const HypothesisClass& cls, Instance x, LdimSolver& solver,
                    TiePolicy ties) {
  require_nonempty(space);
  const auto& ones = cls.ones_at(cls.index_of(x));
  // An empty side scores -1, below any non-empty side.
  const int ldim_one = solver.value(space & ones);
  const int ldim_zero = solver.value(space & ~ones);
  if (ldim_one == ldim_zero) return tie_prediction(ties);
  return Prediction::deterministic(ldim_one > ldim_zero ? 1 : 0);
}

LearnerState::LearnerState(const HypothesisClass& cls, LearnerConfig config, std::size_t horizon)
    : config_(config),
      phase_(config.kind == LearnerKind::kWm ? Phase::kAgnostic : Phase::kRealizable),
      space_(VersionSpace::full(cls.size())),
      wm_(learning_rate(config.eta, cls.size(), horizon), cls.size()) {
  if (realizable_engine(config.kind) == RealizableEngine::kSoa) solver_ = std::make_unique<LdimSolver>(cls);
}

Prediction learner_step(LearnerState& state, const HypothesisClass& cls, Instance x) {
  if (state.phase_ == LearnerState::Phase::kAgnostic) return wm_step(state.wm_, cls.advice(x));
  switch (*realizable_engine(state.config_.kind)) {
    case RealizableEngine::kConsistent:
      return consistent_step(state.space_, cls, x);
    case RealizableEngine::kHalving:
      return halving_step(state.space_, cls, x, state.config_.ties);
    case RealizableEngine::kSoa:
      return soa_step(state.space_, cls, x, *state.solver_, state.config_.ties);
  }
  throw Error("unreachable learner engine");
}

void learner_feedback(LearnerState& state, const HypothesisClass& cls, Instance x, Label y) {
  const auto advice = cls.advice(x);
  ++state.rounds_;
  wm_update(state.wm_, advice, y);
  if (state.phase_ == LearnerState::Phase::kAgnostic) return;
  state.space_ = restrict(state.space_, cls, x, y);
  if (state.space_.empty() && is_hybrid(state.config_.kind)) {
    state.phase_ = LearnerState::Phase::kAgnostic;
    const auto& m = state.wm_.mistakes;
    state.switch_ = SwitchEvent{state.rounds_, *std::min_element(m.begin(), m.end())};
  }
}

double SampledSummary::mean() const {
  if (trial_mistakes.empty()) return 0.0;
  double total = 0.0;
  for (auto m : trial_mistakes) total += static_cast<double>(m);
  return total / static_cast<double>(trial_mistakes.size());
}

double SampledSummary::standard_error() const {
  const std::size_t n = trial_mistakes.size();
  if (n < 2) return 0.0;
  const double mu = mean();
  double ss = 0.0;
  for (auto m : trial_mistakes) ss += (static_cast<double>(m) - mu) * (static_cast<double>(m) - mu);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

std::uint64_t SampledSummary::max() const {
  return trial_mistakes.empty() ? 0 : *std::max_element(trial_mistakes.begin(), trial_mistakes.end());
}

RunTrace run(const LearnerConfig& config, const HypothesisClass& cls, const Sequence& seq, RunOptions options) {
  for (const auto& ex : seq) cls.index_of(ex.x);

  RunTrace trace;
  LearnerState state(cls, config, seq.size());
  // Predictions never feed back into the state, so one pass yields the exact
  // per-round probabilities that every sampled trial draws from.
  std::vector<double> p_one;
  std::vector<Label> truth;
  const bool sampled = options.mode.kind == RunMode::Kind::kSampled;
  if (options.record_rounds) trace.rounds.reserve(seq.size());
  if (sampled) {
    p_one.reserve(seq.size());
    truth.reserve(seq.size());
  }

  for (std::size_t t = 0; t < seq.size(); ++t) {
    const auto& ex = seq[t];
    const Prediction prediction = learner_step(state, cls, ex.x);
    double mistake_prob = 0.0;
    if (prediction.is_deterministic()) {
      mistake_prob = prediction.label() != ex.y ? 1.0 : 0.0;
      trace.deterministic_mistakes += prediction.label() != ex.y;
    } else if (state.phase() == LearnerState::Phase::kAgnostic) {
      // Summing the wrong experts' weights directly is more accurate than 1 - p.
      mistake_prob = wm_mistake_probability(state.wm(), cls.advice(ex.x), ex.y);
    } else {
      mistake_prob = prediction.mistake_probability(ex.y);
    }
    trace.expected_mistakes += mistake_prob;
    if (sampled) {
      p_one.push_back(prediction.p_one());
      truth.push_back(ex.y);
    }
    if (options.record_rounds) trace.rounds.push_back({t + 1, ex.x, ex.y, prediction, mistake_prob});
    learner_feedback(state, cls, ex.x, ex.y);
  }
  trace.switch_event = state.switch_event();
  trace.final_mistakes = state.mistakes();

  if (sampled) {
    SampledSummary summary;
    summary.seed = options.mode.seed;
    summary.trial_mistakes.reserve(options.mode.trials);
    Rng rng(options.mode.seed);
    for (std::size_t trial = 0; trial < options.mode.trials; ++trial) {
      std::uint64_t mistakes = 0;
      for (std::size_t t = 0; t < p_one.size(); ++t) {
        Label drawn;
        if (p_one[t] == 0.0 || p_one[t] == 1.0) {
          drawn = p_one[t] == 1.0 ? 1 : 0;
        } else {
          drawn = bernoulli(rng, p_one[t]) ? 1 : 0;
        }
        mistakes += drawn != truth[t];
      }
      summary.trial_mistakes.push_back(mistakes);
    }
    trace.sampled = std::move(summary);
  }
  return trace;
}

std::string trace_to_jsonl(const RunTrace& trace) {
  std::string out;
  for (const auto& r : trace.rounds) {
    nlohmann::json line;
    line["t"] = r.t;
    line["x"] = r.x;
    line["y"] = r.y;
    if (r.prediction.is_deterministic()) {
      line["prediction"] = {{"kind", "deterministic"}, {"label", r.prediction.label()}};
    } else {
      line["prediction"] = {{"kind", "randomized"}, {"p_hat", r.prediction.p_one()}};
    }
    line["mistake_prob"] = r.mistake_prob;
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace regretlab
