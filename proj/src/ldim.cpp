#include "regretlab/ldim.hpp"

#include <algorithm>
#include <bit>

namespace regretlab {

namespace {

int floor_log2(std::size_t n) { return n == 0 ? -1 : static_cast<int>(std::bit_width(n)) - 1; }

}  // namespace

LdimSolver::LdimSolver(const HypothesisClass& cls, LdimOptions options) : cls_(&cls), options_(options) {}

int LdimSolver::value(const VersionSpace& members) {
  const std::size_t size = members.count();
  if (size == 0) return -1;
  if (size == 1) return 0;
  if (auto it = memo_.find(members); it != memo_.end()) return it->second;

  // A shattered tree of depth k needs 2^k distinct members.
  const int ceiling = floor_log2(size);
  int best = 0;
  for (std::size_t j = 0; j < cls_->domain_size() && best < ceiling; ++j) {
    VersionSpace one_side = members & cls_->ones_at(j);
    const std::size_t ones = one_side.count();
    if (ones == 0 || ones == size) continue;
    if (1 + floor_log2(std::min(ones, size - ones)) <= best) continue;

    VersionSpace zero_side = members & ~cls_->ones_at(j);
    // Smaller side first: its value is cheaper and more often prunes the other.
    VersionSpace& small = ones <= size - ones ? one_side : zero_side;
    VersionSpace& large = ones <= size - ones ? zero_side : one_side;
    const int small_value = value(small);
    if (1 + small_value <= best) continue;
    const int large_value = value(large);
    best = std::max(best, 1 + std::min(small_value, large_value));
  }

  if (memo_.size() >= options_.cache_limit) memo_.clear();
  memo_.emplace(members, best);
  return best;
}

ShatteredTree LdimSolver::witness(const VersionSpace& members, std::size_t depth) {
  ShatteredTree tree;
  tree.depth = depth;
  tree.nodes.assign((std::size_t{1} << depth) - 1, 0);
  if (depth > 0) build(members, depth, 0, tree.nodes);
  return tree;
}

void LdimSolver::build(const VersionSpace& members, std::size_t depth, std::size_t node,
                       std::vector<Instance>& nodes) {
  const int need = static_cast<int>(depth) - 1;
  for (std::size_t j = 0; j < cls_->domain_size(); ++j) {
    const VersionSpace one_side = members & cls_->ones_at(j);
    const VersionSpace zero_side = members & ~cls_->ones_at(j);
    if (value(zero_side) < need || value(one_side) < need) continue;
    nodes[node] = cls_->domain()[j];
    if (depth > 1) {
      build(zero_side, depth - 1, 2 * node + 1, nodes);
      build(one_side, depth - 1, 2 * node + 2, nodes);
    }
    return;
  }
  throw Error("no shattered tree of depth " + std::to_string(depth) + " exists for this member set");
}

LdimResult ldim(const HypothesisClass& cls, const VersionSpace& members, LdimOptions options) {
  if (members.empty()) throw EmptyVersionSpace("Ldim of an empty member set is undefined");
  if (members.universe() != cls.size()) throw DimensionMismatch("member set does not match the class");
  LdimSolver solver(cls, options);
  LdimResult result;
  result.value = solver.value(members);
  if (cls.size() <= options.witness_cap) {
    result.witness = solver.witness(members, static_cast<std::size_t>(result.value));
  }
  return result;
}

LdimResult ldim(const HypothesisClass& cls, LdimOptions options) {
  return ldim(cls, VersionSpace::full(cls.size()), options);
}

bool ldim_witness_check(const HypothesisClass& cls, const VersionSpace& members, const ShatteredTree& tree) {
  if (tree.nodes.size() != (std::size_t{1} << tree.depth) - 1) return false;
  if (tree.depth == 0) return !members.empty();
  std::vector<std::size_t> points(tree.nodes.size());
  for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
    if (!cls.contains(tree.nodes[k])) return false;
    points[k] = cls.index_of(tree.nodes[k]);
  }
  const auto candidates = members.members();
  const std::size_t labelings = std::size_t{1} << tree.depth;
  for (std::size_t path = 0; path < labelings; ++path) {
    // Bit (depth-1-t) of `path` is the label y_{t+1} on level t.
    const bool realized = std::any_of(candidates.begin(), candidates.end(), [&](std::size_t h) {
      std::size_t node = 0;
      for (std::size_t t = 0; t < tree.depth; ++t) {
        const Label y = (path >> (tree.depth - 1 - t)) & 1U;
        if (cls.label(h, points[node]) != y) return false;
        node = 2 * node + 1 + y;
      }
      return true;
    });
    if (!realized) return false;
  }
  return true;
}

}  // namespace regretlab
