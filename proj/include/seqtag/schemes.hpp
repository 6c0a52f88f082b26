#ifndef SEQTAG_SCHEMES_HPP
#define SEQTAG_SCHEMES_HPP

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqtag/corpus.hpp"
#include "seqtag/errors.hpp"

namespace seqtag {

struct EntitySpan {
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // inclusive
  std::string etype;

  bool operator==(const EntitySpan&) const = default;
  auto operator<=>(const EntitySpan&) const = default;
};

enum class DecodeMode { strict, lenient };

struct Violation {
  std::size_t position = 0;
  std::string found;
  std::string reason;  // orphan-inside, orphan-end, unterminated-entity, illegal-prefix

  bool operator==(const Violation&) const = default;
};

class ViolationError : public DataError {
 public:
  explicit ViolationError(std::vector<Violation> violations);
  std::vector<Violation> violations;
};

// Splits "B-PER" into ('B', "PER"); "O" yields ('O', "").
struct TagParts {
  char prefix = 'O';
  std::string_view type;
};
TagParts split_tag(std::string_view tag);

bool prefix_allowed(char prefix, Scheme scheme);

// Lenient decoding follows conlleval chunk semantics (with the usual S-/E-
// extensions): an inside-like tag without an opener starts an entity, a type
// change splits the run, and unterminated spans close at the break.
std::vector<EntitySpan> decode_spans(std::span<const std::string> tags, Scheme scheme,
                                     DecodeMode mode = DecodeMode::lenient);

std::vector<std::string> encode_spans(std::span<const EntitySpan> spans, std::size_t length,
                                      Scheme scheme);

std::vector<Violation> validate(std::span<const std::string> tags, Scheme scheme);

// Smallest scheme whose prefixes cover every tag in the corpus.
Scheme infer_scheme(const Corpus& corpus);

// Marks the corpus as carrying `scheme` after checking that every prefix is
// legal for it. Throws InvalidTagForScheme.
Corpus with_scheme(Corpus corpus, Scheme scheme);

Corpus convert(const Corpus& corpus, Scheme target);

std::set<std::string> entity_types(const Corpus& corpus);

// "O" followed by every scheme-prefixed type, sorted lexicographically.
// Size is T+1, 2T+1 or 4T+1 for IO, BIO, BIOES.
std::vector<std::string> label_set(const std::set<std::string>& types, Scheme scheme);

}  // namespace seqtag

#endif  // SEQTAG_SCHEMES_HPP
