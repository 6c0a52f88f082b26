#include "seqtag/schemes.hpp"

#include <algorithm>

namespace seqtag {

ViolationError::ViolationError(std::vector<Violation> v)
    : DataError("tag sequence violates the scheme at position " +
                (v.empty() ? std::string("?") : std::to_string(v.front().position)) + " (" +
                (v.empty() ? std::string() : v.front().reason) + ")"),
      violations(std::move(v)) {}

TagParts split_tag(std::string_view tag) {
  if (tag.size() >= 2 && tag[1] == '-') return {tag[0], tag.substr(2)};
  return {'O', {}};
}

bool prefix_allowed(char prefix, Scheme scheme) {
  switch (prefix) {
    case 'O':
    case 'I':
      return true;
    case 'B':
      return scheme != Scheme::io;
    case 'E':
    case 'S':
      return scheme == Scheme::bioes;
    default:
      return false;
  }
}

namespace {

void check_prefixes(std::span<const std::string> tags, Scheme scheme) {
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (!is_well_formed_tag(tags[i]) || !prefix_allowed(split_tag(tags[i]).prefix, scheme))
      throw InvalidTagForScheme(i, tags[i]);
  }
}

bool chunk_ends(char prev, char cur, std::string_view prev_type, std::string_view type) {
  if (prev == 'E' || prev == 'S') return true;
  if ((prev == 'B' || prev == 'I') && (cur == 'B' || cur == 'S' || cur == 'O')) return true;
  return prev != 'O' && prev_type != type;
}

bool chunk_starts(char prev, char cur, std::string_view prev_type, std::string_view type) {
  if (cur == 'B' || cur == 'S') return true;
  if ((prev == 'E' || prev == 'S' || prev == 'O') && (cur == 'E' || cur == 'I')) return true;
  return cur != 'O' && prev_type != type;
}

std::vector<EntitySpan> decode_lenient(std::span<const std::string> tags) {
  std::vector<EntitySpan> spans;
  char prev = 'O';
  std::string_view prev_type;
  bool open = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= tags.size(); ++i) {
    TagParts cur = i < tags.size() ? split_tag(tags[i]) : TagParts{};
    if (open && chunk_ends(prev, cur.prefix, prev_type, cur.type)) {
      spans.push_back({start, i - 1, std::string(prev_type)});
      open = false;
    }
    if (cur.prefix != 'O' && chunk_starts(prev, cur.prefix, prev_type, cur.type)) {
      if (open) spans.push_back({start, i - 1, std::string(prev_type)});
      open = true;
      start = i;
    }
    prev = cur.prefix;
    prev_type = cur.type;
  }
  return spans;
}

}  // namespace

std::vector<Violation> validate(std::span<const std::string> tags, Scheme scheme) {
  std::vector<Violation> out;
  auto report = [&](std::size_t pos, const char* reason) {
    if (!out.empty() && out.back().position == pos) return;
    out.push_back({pos, tags[pos], reason});
  };

  std::string_view open;  // type of an entity still waiting for continuation
  bool is_open = false;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (!is_well_formed_tag(tags[i]) || !prefix_allowed(split_tag(tags[i]).prefix, scheme)) {
      if (is_open && scheme == Scheme::bioes) report(i - 1, "unterminated-entity");
      report(i, "illegal-prefix");
      is_open = false;
      continue;
    }
    auto [prefix, type] = split_tag(tags[i]);
    switch (scheme) {
      case Scheme::io:
        break;
      case Scheme::bio:
        if (prefix == 'I' && !(is_open && open == type)) report(i, "orphan-inside");
        is_open = prefix != 'O';
        open = type;
        break;
      case Scheme::bioes: {
        bool continues = is_open && open == type && (prefix == 'I' || prefix == 'E');
        if (is_open && !continues) report(i - 1, "unterminated-entity");
        if (!continues && prefix == 'I') report(i, "orphan-inside");
        if (!continues && prefix == 'E') report(i, "orphan-end");
        is_open = prefix == 'B' || prefix == 'I';
        open = type;
        break;
      }
    }
  }
  if (is_open && scheme == Scheme::bioes) report(tags.size() - 1, "unterminated-entity");
  std::stable_sort(out.begin(), out.end(),
                   [](const Violation& a, const Violation& b) { return a.position < b.position; });
  return out;
}

std::vector<EntitySpan> decode_spans(std::span<const std::string> tags, Scheme scheme,
                                     DecodeMode mode) {
  check_prefixes(tags, scheme);
  if (mode == DecodeMode::strict) {
    auto violations = validate(tags, scheme);
    if (!violations.empty()) throw ViolationError(std::move(violations));
  }
  return decode_lenient(tags);
}

std::vector<std::string> encode_spans(std::span<const EntitySpan> spans, std::size_t length,
                                      Scheme scheme) {
  std::vector<std::string> tags(length, "O");
  std::size_t next_free = 0;
  for (const auto& s : spans) {
    if (s.start < next_free || s.end < s.start || s.end >= length || s.etype.empty())
      throw OverlappingSpans();
    next_free = s.end + 1;
    for (std::size_t i = s.start; i <= s.end; ++i) {
      char prefix = 'I';
      if (scheme == Scheme::bio && i == s.start) {
        prefix = 'B';
      } else if (scheme == Scheme::bioes) {
        if (s.start == s.end) prefix = 'S';
        else if (i == s.start) prefix = 'B';
        else if (i == s.end) prefix = 'E';
      }
      tags[i] = std::string(1, prefix) + "-" + s.etype;
    }
  }
  return tags;
}

Scheme infer_scheme(const Corpus& corpus) {
  Scheme scheme = Scheme::io;
  for (const auto& s : corpus.sentences) {
    for (const auto& t : s.tokens) {
      char p = split_tag(t.tag).prefix;
      if (p == 'E' || p == 'S') return Scheme::bioes;
      if (p == 'B') scheme = Scheme::bio;
    }
  }
  return scheme;
}

Corpus with_scheme(Corpus corpus, Scheme scheme) {
  for (const auto& s : corpus.sentences) check_prefixes(s.tags(), scheme);
  corpus.scheme = scheme;
  return corpus;
}

Corpus convert(const Corpus& corpus, Scheme target) {
  Scheme source = corpus.scheme.value_or(infer_scheme(corpus));
  Corpus out = corpus;
  out.scheme = target;
  for (auto& sentence : out.sentences) {
    auto tags = sentence.tags();
    auto spans = decode_spans(tags, source, DecodeMode::lenient);
    auto encoded = encode_spans(spans, tags.size(), target);
    for (std::size_t i = 0; i < encoded.size(); ++i) sentence.tokens[i].tag = std::move(encoded[i]);
  }
  return out;
}

std::set<std::string> entity_types(const Corpus& corpus) {
  std::set<std::string> types;
  for (const auto& s : corpus.sentences)
    for (const auto& t : s.tokens)
      if (t.tag != "O") types.emplace(split_tag(t.tag).type);
  return types;
}

std::vector<std::string> label_set(const std::set<std::string>& types, Scheme scheme) {
  std::vector<std::string> labels;
  for (const auto& type : types) {
    for (char p : {'B', 'I', 'E', 'S'})
      if (prefix_allowed(p, scheme)) labels.push_back(std::string(1, p) + "-" + type);
  }
  std::sort(labels.begin(), labels.end());
  labels.insert(labels.begin(), "O");
  return labels;
}

}  // namespace seqtag
