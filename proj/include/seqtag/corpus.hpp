#ifndef SEQTAG_CORPUS_HPP
#define SEQTAG_CORPUS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace seqtag {

enum class Scheme { io, bio, bioes };

std::string_view to_string(Scheme scheme);
// Case-insensitive: "io", "BIO", "bioes".
std::optional<Scheme> parse_scheme(std::string_view name);

struct Token {
  std::string surface;
  // attributes[0] is the POS tag when the corpus carries one.
  std::vector<std::string> attributes;
  std::string tag;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  std::vector<std::string> tags() const;
  bool operator==(const Sentence&) const = default;
};

struct ColumnSpec {
  std::size_t surface_col = 0;
  std::size_t tag_col = 1;
  std::vector<std::pair<std::size_t, std::string>> attribute_cols;
  char separator = ' ';

  std::size_t width() const;
  bool has_pos() const { return !attribute_cols.empty(); }
  // Throws std::invalid_argument when two columns share an index or the
  // separator is neither space nor tab.
  void check() const;

  bool operator==(const ColumnSpec&) const = default;
};

struct Corpus {
  std::vector<Sentence> sentences;
  // Empty until a scheme has been validated against the tags (fresh parse).
  std::optional<Scheme> scheme;
  ColumnSpec columns;

  std::size_t token_count() const;
  bool empty() const { return sentences.empty(); }
};

// True when `tag` is "O" or <I|B|E|S>-<TYPE> with TYPE uppercase alphanumeric.
bool is_well_formed_tag(std::string_view tag);

Corpus parse_conll(std::string_view text, const ColumnSpec& spec);
std::string serialize_conll(const Corpus& corpus, const ColumnSpec& spec);

Corpus read_conll_file(const std::string& path, const ColumnSpec& spec);
// Writes through a temporary file and rename.
void write_text_file_atomic(const std::string& path, std::string_view contents);
std::string read_text_file(const std::string& path);

struct SplitRules {
  std::size_t max_len = 200;
  std::set<std::string> abbreviations = {"M.", "MM.", "Mme.", "Mlle.", "Dr.", "St.", "etc."};
};

Corpus split_sentences(const std::vector<Token>& tokens, const SplitRules& rules = {});

// Applies split_sentences inside every existing sentence, keeping the
// boundaries already present. Scheme and columns carry over.
Corpus insert_boundaries(const Corpus& corpus, const SplitRules& rules = {});

struct Stats {
  std::size_t tokens = 0;
  std::size_t sentences = 0;
  std::size_t entities_total = 0;
  std::map<std::string, std::size_t> entities_by_type;

  bool operator==(const Stats&) const = default;
};

// Entities are counted by lenient span decoding under the corpus scheme
// (inferred from the tags when the corpus is unvalidated).
Stats corpus_stats(const Corpus& corpus);

}  // namespace seqtag

#endif  // SEQTAG_CORPUS_HPP
