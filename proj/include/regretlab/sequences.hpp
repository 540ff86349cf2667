#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "regretlab/hypothesis.hpp"

namespace regretlab {

enum class CaseKind { kRealizable, kUnrealizable };

std::string_view to_string(CaseKind kind);
CaseKind parse_case_kind(std::string_view name);

struct ExperimentCase {
  CaseKind kind = CaseKind::kRealizable;
  std::size_t horizon = 0;     // T
  std::size_t hypotheses = 0;  // d

  /// Throws ConfigError unless 1 <= d <= T.
  void validate() const;
};

/// The T consecutive integers floor(-T/2)+1 .. floor(T/2).
std::vector<Instance> make_domain(std::size_t horizon);

/// Thresholds h_0..h_{d-1} with h_i(x) = 0 iff x <= i.
HypothesisClass make_threshold_class(std::size_t d, const std::vector<Instance>& domain);

/// Realizable: labeled by h_0. Unrealizable: every label is 1.
Sequence label_sequence(const ExperimentCase& c, const std::vector<Instance>& domain);

inline constexpr std::size_t kDefaultFactorialCap = 9;

/// Random-access stream of reorderings of one base sequence.
///
/// Exhaustive streams enumerate all T! orders lexicographically by original
/// index; sampled streams draw `count` uniform shuffles, permutation k from
/// its own sub-seed, so any index range can be produced independently.
class PermutationStream {
 public:
  static PermutationStream exhaustive(Sequence base, std::size_t factorial_cap = kDefaultFactorialCap);
  static PermutationStream sampled(Sequence base, std::size_t count, std::uint64_t seed);

  bool is_exhaustive() const { return exhaustive_; }
  std::size_t size() const { return count_; }
  const Sequence& base() const { return base_; }
  std::uint64_t seed() const { return seed_; }

  /// Index order of permutation k.
  std::vector<std::size_t> order(std::size_t k) const;
  Sequence at(std::size_t k) const;

  class Iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Sequence;
    using difference_type = std::ptrdiff_t;

    Iterator(const PermutationStream* stream, std::size_t k) : stream_(stream), k_(k) {}
    Sequence operator*() const { return stream_->at(k_); }
    Iterator& operator++() {
      ++k_;
      return *this;
    }
    bool operator==(const Iterator& other) const { return k_ == other.k_; }

   private:
    const PermutationStream* stream_;
    std::size_t k_;
  };

  Iterator begin() const { return {this, 0}; }
  Iterator end() const { return {this, count_}; }

 private:
  PermutationStream(Sequence base, bool exhaustive, std::size_t count, std::uint64_t seed)
      : base_(std::move(base)), exhaustive_(exhaustive), count_(count), seed_(seed) {}

  Sequence base_;
  bool exhaustive_;
  std::size_t count_;
  std::uint64_t seed_;
};

/// "t,x,y" header, one row per example, t starting at 1.
std::string sequence_to_csv(const Sequence& seq);
Sequence sequence_from_csv(const std::string& text);

}  // namespace regretlab
