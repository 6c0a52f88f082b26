#include "seqtag/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "seqtag/errors.hpp"
#include "seqtag/schemes.hpp"
#include "seqtag/utf8.hpp"

namespace seqtag {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::io:
      return "IO";
    case Scheme::bio:
      return "BIO";
    case Scheme::bioes:
      return "BIOES";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  std::string upper;
  for (char c : name) upper.push_back(static_cast<char>(c >= 'a' && c <= 'z' ? c - 32 : c));
  if (upper == "IO") return Scheme::io;
  if (upper == "BIO") return Scheme::bio;
  if (upper == "BIOES") return Scheme::bioes;
  return std::nullopt;
}

std::vector<std::string> Sentence::tags() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.tag);
  return out;
}

std::size_t ColumnSpec::width() const {
  std::size_t w = std::max(surface_col, tag_col);
  for (const auto& [idx, name] : attribute_cols) w = std::max(w, idx);
  return w + 1;
}

void ColumnSpec::check() const {
  if (separator != ' ' && separator != '\t')
    throw std::invalid_argument("column separator must be space or tab");
  std::vector<std::size_t> cols{surface_col, tag_col};
  for (const auto& [idx, name] : attribute_cols) cols.push_back(idx);
  std::sort(cols.begin(), cols.end());
  if (std::adjacent_find(cols.begin(), cols.end()) != cols.end())
    throw std::invalid_argument("column indices must be distinct");
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

bool is_well_formed_tag(std::string_view tag) {
  if (tag == "O") return true;
  if (tag.size() < 3 || tag[1] != '-') return false;
  if (tag[0] != 'I' && tag[0] != 'B' && tag[0] != 'E' && tag[0] != 'S') return false;
  return std::all_of(tag.begin() + 2, tag.end(),
                     [](char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); });
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) next = line.size();
    auto field = line.substr(pos, next - pos);
    // Runs of spaces act as one separator; tabs are exact.
    if (!(sep == ' ' && field.empty())) fields.push_back(field);
    pos = next + 1;
  }
  return fields;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

bool has_whitespace(std::string_view s) {
  for (char32_t cp : utf8::decode(s))
    if (utf8::is_space(cp)) return true;
  return false;
}

}  // namespace

Corpus parse_conll(std::string_view text, const ColumnSpec& spec) {
  spec.check();
  Corpus corpus;
  corpus.columns = spec;
  const std::size_t width = spec.width();

  Sentence current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (is_blank(line)) {
      if (!current.tokens.empty()) corpus.sentences.push_back(std::move(current));
      current = {};
      continue;
    }
    if (line.starts_with("# ")) continue;

    auto fields = split_fields(line, spec.separator);
    if (fields.size() < width) throw MalformedRow(line_no);
    Token token;
    token.surface = std::string(fields[spec.surface_col]);
    token.tag = std::string(fields[spec.tag_col]);
    for (const auto& [idx, name] : spec.attribute_cols) token.attributes.emplace_back(fields[idx]);
    if (token.surface.empty() || has_whitespace(token.surface) || !is_well_formed_tag(token.tag))
      throw MalformedRow(line_no);
    current.tokens.push_back(std::move(token));
  }
  if (!current.tokens.empty()) corpus.sentences.push_back(std::move(current));
  if (corpus.sentences.empty()) throw EmptyInput();
  return corpus;
}

std::string serialize_conll(const Corpus& corpus, const ColumnSpec& spec) {
  spec.check();
  const std::size_t width = spec.width();
  std::string out;
  std::vector<std::string_view> row(width);
  bool first = true;
  for (const auto& sentence : corpus.sentences) {
    if (!first) out.push_back('\n');
    first = false;
    for (const auto& token : sentence.tokens) {
      std::fill(row.begin(), row.end(), std::string_view("_"));
      row[spec.surface_col] = token.surface;
      row[spec.tag_col] = token.tag;
      for (std::size_t a = 0; a < spec.attribute_cols.size(); ++a)
        if (a < token.attributes.size()) row[spec.attribute_cols[a].first] = token.attributes[a];
      for (std::size_t c = 0; c < width; ++c) {
        if (c) out.push_back(spec.separator);
        out.append(row[c]);
      }
      out.push_back('\n');
    }
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Corpus read_conll_file(const std::string& path, const ColumnSpec& spec) {
  return parse_conll(read_text_file(path), spec);
}

void write_text_file_atomic(const std::string& path, std::string_view contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "': " + ec.message());
}

namespace {

bool starts_upper_or_digit(std::string_view surface) {
  auto cps = utf8::decode(utf8::prefix(surface, 1));
  return !cps.empty() && (utf8::is_upper(cps[0]) || utf8::is_digit(cps[0]));
}

bool is_abbreviation(const std::string& surface, const SplitRules& rules) {
  if (rules.abbreviations.count(surface)) return true;
  return surface.size() > 1 && surface.back() == '.' && utf8::length(surface) <= 3;
}

}  // namespace

Corpus split_sentences(const std::vector<Token>& tokens, const SplitRules& rules) {
  Corpus corpus;
  Sentence current;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    current.tokens.push_back(tokens[i]);
    const auto& surface = tokens[i].surface;
    bool terminal = surface == "." || surface == "!" || surface == "?";
    bool boundary = terminal && !is_abbreviation(surface, rules) && i + 1 < tokens.size() &&
                    starts_upper_or_digit(tokens[i + 1].surface);
    if (boundary || (rules.max_len > 0 && current.size() >= rules.max_len)) {
      corpus.sentences.push_back(std::move(current));
      current = {};
    }
  }
  if (!current.tokens.empty()) corpus.sentences.push_back(std::move(current));
  return corpus;
}

Corpus insert_boundaries(const Corpus& corpus, const SplitRules& rules) {
  Corpus out;
  out.scheme = corpus.scheme;
  out.columns = corpus.columns;
  for (const auto& sentence : corpus.sentences) {
    auto pieces = split_sentences(sentence.tokens, rules);
    for (auto& piece : pieces.sentences) out.sentences.push_back(std::move(piece));
  }
  return out;
}

Stats corpus_stats(const Corpus& corpus) {
  Stats stats;
  const Scheme scheme = corpus.scheme.value_or(infer_scheme(corpus));
  stats.sentences = corpus.sentences.size();
  for (const auto& sentence : corpus.sentences) {
    stats.tokens += sentence.size();
    for (const auto& span : decode_spans(sentence.tags(), scheme, DecodeMode::lenient)) {
      ++stats.entities_by_type[span.etype];
      ++stats.entities_total;
    }
  }
  return stats;
}

}  // namespace seqtag
