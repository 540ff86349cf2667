#include "regretlab/sequences.hpp"

#include <numeric>
#include <sstream>

#include "regretlab/random.hpp"

namespace regretlab {

namespace {

std::int64_t floor_div2(std::int64_t v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); }

}  // namespace

std::string_view to_string(CaseKind kind) { return kind == CaseKind::kRealizable ? "realizable" : "unrealizable"; }

CaseKind parse_case_kind(std::string_view name) {
  if (name == "realizable") return CaseKind::kRealizable;
  if (name == "unrealizable") return CaseKind::kUnrealizable;
  throw ConfigError("unknown case '" + std::string(name) + "' (expected realizable or unrealizable)");
}

void ExperimentCase::validate() const {
  if (horizon == 0) throw ConfigError("T must be at least 1");
  if (hypotheses == 0) throw ConfigError("d must be at least 1");
  if (hypotheses > horizon) {
    throw ConfigError("d = " + std::to_string(hypotheses) + " exceeds T = " + std::to_string(horizon));
  }
}

std::vector<Instance> make_domain(std::size_t horizon) {
  const auto t = static_cast<std::int64_t>(horizon);
  std::vector<Instance> domain(horizon);
  std::iota(domain.begin(), domain.end(), floor_div2(-t) + 1);
  return domain;
}

HypothesisClass make_threshold_class(std::size_t d, const std::vector<Instance>& domain) {
  if (d == 0 || d > domain.size()) {
    throw ConfigError("threshold class needs 1 <= d <= |domain|, got d = " + std::to_string(d));
  }
  std::vector<std::vector<Label>> rows(d, std::vector<Label>(domain.size()));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < domain.size(); ++j) rows[i][j] = domain[j] <= static_cast<Instance>(i) ? 0 : 1;
  }
  return HypothesisClass(domain, rows);
}

Sequence label_sequence(const ExperimentCase& c, const std::vector<Instance>& domain) {
  Sequence seq;
  seq.reserve(domain.size());
  for (Instance x : domain) {
    const Label y = c.kind == CaseKind::kUnrealizable ? 1 : (x <= 0 ? 0 : 1);
    seq.push_back({x, y});
  }
  return seq;
}

PermutationStream PermutationStream::exhaustive(Sequence base, std::size_t factorial_cap) {
  if (base.size() > factorial_cap) {
    throw FactorialCapExceeded("exhaustive permutations need T <= " + std::to_string(factorial_cap) + ", got T = " +
                               std::to_string(base.size()));
  }
  std::size_t count = 1;
  for (std::size_t k = 2; k <= base.size(); ++k) count *= k;
  return PermutationStream(std::move(base), true, count, 0);
}

PermutationStream PermutationStream::sampled(Sequence base, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ConfigError("sampled permutation count must be at least 1");
  return PermutationStream(std::move(base), false, count, seed);
}

std::vector<std::size_t> PermutationStream::order(std::size_t k) const {
  if (k >= count_) throw IndexOutOfRange("permutation index " + std::to_string(k) + " out of range");
  const std::size_t n = base_.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (exhaustive_) {
    // Unrank k through the factorial number system.
    std::vector<std::size_t> factorial(n + 1, 1);
    for (std::size_t i = 1; i <= n; ++i) factorial[i] = factorial[i - 1] * i;
    std::vector<std::size_t> out;
    out.reserve(n);
    std::size_t rest = k;
    for (std::size_t pos = n; pos > 0; --pos) {
      const std::size_t digit = rest / factorial[pos - 1];
      rest %= factorial[pos - 1];
      out.push_back(idx[digit]);
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(digit));
    }
    return out;
  }
  Rng rng(derive_seed(seed_, SeedStream::kPermutation, k));
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = uniform_below(rng, i);
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

Sequence PermutationStream::at(std::size_t k) const {
  const auto idx = order(k);
  Sequence out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(base_[i]);
  return out;
}

std::string sequence_to_csv(const Sequence& seq) {
  std::string out = "t,x,y\n";
  for (std::size_t t = 0; t < seq.size(); ++t) {
    out += std::to_string(t + 1) + ',' + std::to_string(seq[t].x) + ',' + std::to_string(seq[t].y) + '\n';
  }
  return out;
}

Sequence sequence_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t,x,y") throw ConfigError("sequence CSV must start with 't,x,y'");
  Sequence seq;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t, x, y;
    if (!std::getline(row, t, ',') || !std::getline(row, x, ',') || !std::getline(row, y)) {
      throw ConfigError("malformed sequence row '" + line + "'");
    }
    try {
      const int label = std::stoi(y);
      if (label != 0 && label != 1) throw ConfigError("label must be 0 or 1 in row '" + line + "'");
      seq.push_back({std::stoll(x), static_cast<Label>(label)});
    } catch (const std::logic_error&) {
      throw ConfigError("malformed sequence row '" + line + "'");
    }
  }
  return seq;
}

}  // namespace regretlab
