#ifndef SEQTAG_AUGMENT_HPP
#define SEQTAG_AUGMENT_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seqtag/corpus.hpp"
#include "seqtag/random.hpp"

namespace seqtag {

// Per-tag multiset of surface forms seen in training data. Keys are full
// prefixed tags, so "B-ORG" and "I-ORG" are distinct.
class LabelTokenDistribution {
 public:
  void add(const std::string& tag, const std::string& surface, std::size_t count = 1);

  bool contains(const std::string& tag) const { return table_.count(tag) != 0; }
  bool empty() const { return table_.empty(); }
  std::size_t size() const { return table_.size(); }
  // Surface counts for a tag, ordered by surface bytes. Throws MissingTagKey.
  const std::map<std::string, std::size_t>& counts(const std::string& tag) const;
  std::size_t total(const std::string& tag) const;
  const std::map<std::string, std::map<std::string, std::size_t>>& table() const { return table_; }

  // One uniform draw mapped through cumulative counts (surfaces in byte order).
  const std::string& sample(const std::string& tag, RandomSource& rng) const;

 private:
  std::map<std::string, std::map<std::string, std::size_t>> table_;
  std::map<std::string, std::size_t> totals_;
};

LabelTokenDistribution build_distribution(const Corpus& corpus);

enum class Technique { lwtr, sis };

struct AugmentConfig {
  std::vector<Technique> techniques{Technique::lwtr, Technique::sis};
  double p = 0.5;
  std::size_t copies_per_sentence = 1;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on an empty technique list, p outside
  // (0, 1] or zero copies.
  void check() const;
};

struct Segment {
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive
  std::optional<std::string> etype;  // empty for a run of O tokens

  bool operator==(const Segment&) const = default;
};

// Entity spans plus maximal O runs, in order; together they cover the sentence.
std::vector<Segment> segments(const Sentence& sentence, Scheme scheme);

Sentence lwtr_sentence(const Sentence& sentence, const LabelTokenDistribution& dist, double p,
                       RandomSource& rng);

Sentence sis_sentence(const Sentence& sentence, Scheme scheme, double p, RandomSource& rng);

// Original sentences followed by copies_per_sentence augmented versions of
// each, sentence-major. Sentence i draws from SeededRandom(mix_seed(seed, i)).
Corpus augment_corpus(const Corpus& corpus, const AugmentConfig& cfg);

}  // namespace seqtag

#endif  // SEQTAG_AUGMENT_HPP
