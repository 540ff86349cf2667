#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "regretlab/error.hpp"

namespace regretlab {

using Instance = std::int64_t;
using Label = std::uint8_t;

struct LabeledExample {
  Instance x = 0;
  Label y = 0;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

using Sequence = std::vector<LabeledExample>;

/// Fixed-size bitset over hypothesis indices [0, d).
///
/// Doubles as the version space V_t of the realizable learners and as the
/// memo key of the Ldim recursion, so equality and hashing are word-wise.
class VersionSpace {
 public:
  VersionSpace() = default;
  explicit VersionSpace(std::size_t universe, bool full = false);

  static VersionSpace full(std::size_t universe) { return VersionSpace(universe, true); }
  static VersionSpace of(std::size_t universe, std::initializer_list<std::size_t> members);

  std::size_t universe() const { return universe_; }
  std::size_t count() const;
  bool empty() const;
  bool contains(std::size_t i) const;
  void insert(std::size_t i);
  void erase(std::size_t i);

  /// Lowest member index; universe() if empty.
  std::size_t first() const;
  std::vector<std::size_t> members() const;

  VersionSpace& operator&=(const VersionSpace& other);
  VersionSpace operator&(const VersionSpace& other) const;
  VersionSpace operator~() const;
  bool is_subset_of(const VersionSpace& other) const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::size_t hash() const;

  friend bool operator==(const VersionSpace&, const VersionSpace&) = default;

 private:
  void clear_tail();

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct VersionSpaceHash {
  std::size_t operator()(const VersionSpace& v) const { return v.hash(); }
};

/// Per-hypothesis mistake counts M_i.
using MistakeVector = std::vector<std::uint64_t>;

/// A finite class of binary hypotheses materialized over a finite domain.
///
/// Labels are stored column-major: the d labels at one domain point are
/// contiguous, which is exactly the expert-advice vector the weighted
/// majority learner consumes. Duplicate rows are kept as distinct experts.
class HypothesisClass {
 public:
  /// `rows[i][j]` is hypothesis i's label on `domain[j]`.
  HypothesisClass(std::vector<Instance> domain, const std::vector<std::vector<Label>>& rows);

  std::size_t size() const { return d_; }
  std::size_t domain_size() const { return domain_.size(); }
  const std::vector<Instance>& domain() const { return domain_; }

  /// Position of `x` in the domain; throws UnknownInstance.
  std::size_t index_of(Instance x) const;
  bool contains(Instance x) const { return index_.count(x) != 0; }

  Label label(std::size_t hypothesis, std::size_t point) const { return labels_[point * d_ + hypothesis]; }

  /// Every hypothesis' label at domain position `point`.
  std::span<const Label> advice_at(std::size_t point) const {
    return {labels_.data() + point * d_, d_};
  }
  std::span<const Label> advice(Instance x) const { return advice_at(index_of(x)); }

  /// Hypotheses labeling domain position `point` with 1.
  const VersionSpace& ones_at(std::size_t point) const { return ones_[point]; }

  std::vector<std::vector<Label>> rows() const;

 private:
  std::size_t d_ = 0;
  std::vector<Instance> domain_;
  std::unordered_map<Instance, std::size_t> index_;
  std::vector<Label> labels_;
  std::vector<VersionSpace> ones_;
};

/// h_i(x). Throws IndexOutOfRange or UnknownInstance.
Label evaluate(const HypothesisClass& cls, std::size_t i, Instance x);

/// {i in space : h_i(x) = y}.
VersionSpace restrict(const VersionSpace& space, const HypothesisClass& cls, Instance x, Label y);

/// counts[i] = number of examples of `seq` that h_i mislabels.
MistakeVector mistake_profile(const HypothesisClass& cls, const Sequence& seq);

struct BestMistakes {
  std::uint64_t count = 0;
  std::vector<std::size_t> argmin;
};

BestMistakes best_mistakes(const MistakeVector& profile);

std::string class_to_json(const HypothesisClass& cls);
HypothesisClass class_from_json(const std::string& text);

}  // namespace regretlab
