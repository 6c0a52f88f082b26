#include "seqtag/augment.hpp"

#include <stdexcept>
#include <utility>

#include "seqtag/errors.hpp"
#include "seqtag/schemes.hpp"

namespace seqtag {

void LabelTokenDistribution::add(const std::string& tag, const std::string& surface,
                                 std::size_t count) {
  if (count == 0) return;
  table_[tag][surface] += count;
  totals_[tag] += count;
}

const std::map<std::string, std::size_t>& LabelTokenDistribution::counts(
    const std::string& tag) const {
  auto it = table_.find(tag);
  if (it == table_.end()) throw MissingTagKey(tag);
  return it->second;
}

std::size_t LabelTokenDistribution::total(const std::string& tag) const {
  auto it = totals_.find(tag);
  if (it == totals_.end()) throw MissingTagKey(tag);
  return it->second;
}

const std::string& LabelTokenDistribution::sample(const std::string& tag,
                                                  RandomSource& rng) const {
  const auto& entries = counts(tag);
  const std::size_t n = total(tag);
  auto target = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
  if (target >= n) target = n - 1;
  std::size_t cumulative = 0;
  for (const auto& [surface, count] : entries) {
    cumulative += count;
    if (target < cumulative) return surface;
  }
  return entries.rbegin()->first;
}

LabelTokenDistribution build_distribution(const Corpus& corpus) {
  LabelTokenDistribution dist;
  for (const auto& s : corpus.sentences)
    for (const auto& t : s.tokens) dist.add(t.tag, t.surface);
  return dist;
}

void AugmentConfig::check() const {
  if (techniques.empty()) throw std::invalid_argument("at least one augmentation technique is required");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("augmentation probability must be in (0, 1]");
  if (copies_per_sentence == 0) throw std::invalid_argument("copies per sentence must be at least 1");
}

std::vector<Segment> segments(const Sentence& sentence, Scheme scheme) {
  std::vector<Segment> out;
  std::size_t cursor = 0;
  auto flush_o_run = [&](std::size_t upto) {
    if (cursor < upto) out.push_back({cursor, upto - 1, std::nullopt});
  };
  for (const auto& span : decode_spans(sentence.tags(), scheme, DecodeMode::lenient)) {
    flush_o_run(span.start);
    out.push_back({span.start, span.end, span.etype});
    cursor = span.end + 1;
  }
  flush_o_run(sentence.size());
  return out;
}

Sentence lwtr_sentence(const Sentence& sentence, const LabelTokenDistribution& dist, double p,
                       RandomSource& rng) {
  Sentence out = sentence;
  for (auto& token : out.tokens) {
    if (!dist.contains(token.tag)) throw MissingTagKey(token.tag);
    if (rng.uniform() < p) token.surface = dist.sample(token.tag, rng);
  }
  return out;
}

Sentence sis_sentence(const Sentence& sentence, Scheme scheme, double p, RandomSource& rng) {
  Sentence out = sentence;
  for (const auto& seg : segments(sentence, scheme)) {
    if (!(rng.uniform() < p)) continue;
    // Fisher-Yates over the segment's tokens.
    for (std::size_t i = seg.end; i > seg.start; --i) {
      std::size_t j = seg.start + static_cast<std::size_t>(rng.below(i - seg.start + 1));
      std::swap(out.tokens[i], out.tokens[j]);
    }
    if (seg.etype) {
      EntitySpan local{0, seg.end - seg.start, *seg.etype};
      auto tags = encode_spans(std::span(&local, 1), seg.end - seg.start + 1, scheme);
      for (std::size_t k = 0; k < tags.size(); ++k) out.tokens[seg.start + k].tag = tags[k];
    } else {
      for (std::size_t k = seg.start; k <= seg.end; ++k) out.tokens[k].tag = "O";
    }
  }
  return out;
}

Corpus augment_corpus(const Corpus& corpus, const AugmentConfig& cfg) {
  cfg.check();
  const Scheme scheme = corpus.scheme.value_or(infer_scheme(corpus));
  const auto dist = build_distribution(corpus);

  Corpus out = corpus;
  out.sentences.reserve(corpus.sentences.size() * (1 + cfg.copies_per_sentence));
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    SeededRandom rng(mix_seed(cfg.seed, i));
    const auto& source = corpus.sentences[i];
    for (std::size_t c = 0; c < cfg.copies_per_sentence; ++c) {
      Technique technique = cfg.techniques.size() == 1
                                ? cfg.techniques.front()
                                : cfg.techniques[rng.below(cfg.techniques.size())];
      if (technique == Technique::lwtr)
        out.sentences.push_back(lwtr_sentence(source, dist, cfg.p, rng));
      else
        out.sentences.push_back(sis_sentence(source, scheme, cfg.p, rng));
    }
  }
  return out;
}

}  // namespace seqtag
