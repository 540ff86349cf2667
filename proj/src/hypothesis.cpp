#include "regretlab/hypothesis.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "json.hpp"

namespace regretlab {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t universe) { return (universe + kWordBits - 1) / kWordBits; }

}  // namespace

VersionSpace::VersionSpace(std::size_t universe, bool full)
    : universe_(universe), words_(word_count(universe), full ? ~std::uint64_t{0} : 0) {
  clear_tail();
}

VersionSpace VersionSpace::of(std::size_t universe, std::initializer_list<std::size_t> members) {
  VersionSpace v(universe);
  for (std::size_t i : members) v.insert(i);
  return v;
}

void VersionSpace::clear_tail() {
  const std::size_t rem = universe_ % kWordBits;
  if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

std::size_t VersionSpace::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool VersionSpace::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool VersionSpace::contains(std::size_t i) const {
  if (i >= universe_) return false;
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

void VersionSpace::insert(std::size_t i) {
  if (i >= universe_) throw IndexOutOfRange("hypothesis index " + std::to_string(i) + " >= " + std::to_string(universe_));
  words_[i / kWordBits] |= std::uint64_t{1} << (i % kWordBits);
}

void VersionSpace::erase(std::size_t i) {
  if (i >= universe_) return;
  words_[i / kWordBits] &= ~(std::uint64_t{1} << (i % kWordBits));
}

std::size_t VersionSpace::first() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return universe_;
}

std::vector<std::size_t> VersionSpace::members() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits != 0) {
      out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

VersionSpace& VersionSpace::operator&=(const VersionSpace& other) {
  if (other.universe_ != universe_) throw DimensionMismatch("version spaces over different classes");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

VersionSpace VersionSpace::operator&(const VersionSpace& other) const {
  VersionSpace out = *this;
  out &= other;
  return out;
}

VersionSpace VersionSpace::operator~() const {
  VersionSpace out = *this;
  for (auto& w : out.words_) w = ~w;
  out.clear_tail();
  return out;
}

bool VersionSpace::is_subset_of(const VersionSpace& other) const {
  if (other.universe_ != universe_) return false;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  }
  return true;
}

std::size_t VersionSpace::hash() const {
  // 64-bit FNV-1a over the words, mixed per word.
  std::uint64_t h = 0xcbf29ce484222325ULL ^ universe_;
  for (std::uint64_t w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

HypothesisClass::HypothesisClass(std::vector<Instance> domain, const std::vector<std::vector<Label>>& rows)
    : d_(rows.size()), domain_(std::move(domain)) {
  if (d_ == 0) throw InvalidClass("hypothesis class needs at least one hypothesis");
  if (domain_.empty()) throw InvalidClass("hypothesis class needs a non-empty domain");
  const std::size_t n = domain_.size();
  index_.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!index_.emplace(domain_[j], j).second) {
      throw InvalidClass("duplicate domain point " + std::to_string(domain_[j]));
    }
  }
  labels_.resize(n * d_);
  ones_.assign(n, VersionSpace(d_));
  for (std::size_t i = 0; i < d_; ++i) {
    if (rows[i].size() != n) {
      throw InvalidClass("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                         " labels, domain has " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const Label y = rows[i][j];
      if (y > 1) throw InvalidClass("labels must be 0 or 1");
      labels_[j * d_ + i] = y;
      if (y == 1) ones_[j].insert(i);
    }
  }
}

std::size_t HypothesisClass::index_of(Instance x) const {
  auto it = index_.find(x);
  if (it == index_.end()) throw UnknownInstance("instance " + std::to_string(x) + " is not in the domain");
  return it->second;
}

std::vector<std::vector<Label>> HypothesisClass::rows() const {
  std::vector<std::vector<Label>> out(d_, std::vector<Label>(domain_.size()));
  for (std::size_t j = 0; j < domain_.size(); ++j) {
    for (std::size_t i = 0; i < d_; ++i) out[i][j] = labels_[j * d_ + i];
  }
  return out;
}

Label evaluate(const HypothesisClass& cls, std::size_t i, Instance x) {
  if (i >= cls.size()) {
    throw IndexOutOfRange("hypothesis index " + std::to_string(i) + " >= " + std::to_string(cls.size()));
  }
  return cls.label(i, cls.index_of(x));
}

VersionSpace restrict(const VersionSpace& space, const HypothesisClass& cls, Instance x, Label y) {
  const auto& ones = cls.ones_at(cls.index_of(x));
  return y == 1 ? space & ones : space & ~ones;
}

MistakeVector mistake_profile(const HypothesisClass& cls, const Sequence& seq) {
  MistakeVector counts(cls.size(), 0);
  for (const auto& ex : seq) {
    const auto advice = cls.advice(ex.x);
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += advice[i] != ex.y;
  }
  return counts;
}

BestMistakes best_mistakes(const MistakeVector& profile) {
  BestMistakes best;
  if (profile.empty()) return best;
  best.count = *std::min_element(profile.begin(), profile.end());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] == best.count) best.argmin.push_back(i);
  }
  return best;
}

std::string class_to_json(const HypothesisClass& cls) {
  nlohmann::json doc;
  doc["domain"] = cls.domain();
  doc["table"] = cls.rows();
  return doc.dump();
}

HypothesisClass class_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    return HypothesisClass(doc.at("domain").get<std::vector<Instance>>(),
                           doc.at("table").get<std::vector<std::vector<Label>>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidClass(std::string("malformed hypothesis class JSON: ") + e.what());
  }
}

}  // namespace regretlab
