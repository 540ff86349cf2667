#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "regretlab/hypothesis.hpp"

namespace regretlab {

/// Complete binary tree of instances in heap order.
///
/// nodes[0] is the root; the child of node k (0-based) reached by label y is
/// 2k + 1 + y. This is the 1-based path-index rule
/// i_t = 2^{t-1} + sum_{j<t} y_j 2^{t-1-j} shifted down by one.
struct ShatteredTree {
  std::size_t depth = 0;
  std::vector<Instance> nodes;  // 2^depth - 1 entries

  friend bool operator==(const ShatteredTree&, const ShatteredTree&) = default;
};

struct LdimResult {
  int value = 0;
  std::optional<ShatteredTree> witness;
};

struct LdimOptions {
  /// Witness trees are only extracted for classes with at most this many hypotheses.
  std::size_t witness_cap = 20;
  /// Memo entries kept before the cache is flushed.
  std::size_t cache_limit = std::size_t{1} << 20;
};

/// Memoized Littlestone-dimension recursion relative to a class's domain.
///
///   Ldim(V) = 0                                    if no point splits V
///           = max_x 1 + min(Ldim(V|x->0), Ldim(V|x->1))   otherwise
///
/// The empty set has Ldim -1. A solver is bound to one class and is not
/// thread-safe; give each worker its own.
class LdimSolver {
 public:
  explicit LdimSolver(const HypothesisClass& cls, LdimOptions options = {});

  int value(const VersionSpace& members);

  /// A tree of exactly `depth` levels shattered by `members`; requires
  /// depth <= value(members). Ties between splitting points go to the
  /// lowest domain position.
  ShatteredTree witness(const VersionSpace& members, std::size_t depth);

  std::size_t cache_size() const { return memo_.size(); }

 private:
  void build(const VersionSpace& members, std::size_t depth, std::size_t node, std::vector<Instance>& nodes);

  const HypothesisClass* cls_;
  LdimOptions options_;
  std::unordered_map<VersionSpace, int, VersionSpaceHash> memo_;
};

/// Throws EmptyVersionSpace when `members` is empty.
LdimResult ldim(const HypothesisClass& cls, const VersionSpace& members, LdimOptions options = {});
LdimResult ldim(const HypothesisClass& cls, LdimOptions options = {});

/// True iff every root-to-leaf labeling of `tree` is realized by a member.
bool ldim_witness_check(const HypothesisClass& cls, const VersionSpace& members, const ShatteredTree& tree);

}  // namespace regretlab
