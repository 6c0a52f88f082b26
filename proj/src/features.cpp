#include "seqtag/features.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "seqtag/utf8.hpp"

namespace seqtag {

namespace {

constexpr std::array<std::pair<Template, std::string_view>, 18> kNames{{
    {Template::bias, "bias"},
    {Template::word, "w0"},
    {Template::prev_word, "w-1"},
    {Template::next_word, "w+1"},
    {Template::prefix1, "pre1"},
    {Template::prefix2, "pre2"},
    {Template::prefix3, "pre3"},
    {Template::suffix1, "suf1"},
    {Template::suffix2, "suf2"},
    {Template::suffix3, "suf3"},
    {Template::shape, "shape"},
    {Template::capitalized, "cap"},
    {Template::all_caps, "allcaps"},
    {Template::has_digit, "digit"},
    {Template::has_hyphen, "hyphen"},
    {Template::pos, "pos0"},
    {Template::prev_pos, "pos-1"},
    {Template::next_pos, "pos+1"},
}};

constexpr std::string_view kBos = "<BOS>";
constexpr std::string_view kEos = "<EOS>";
constexpr std::string_view kNoPos = "<NONE>";

}  // namespace

std::string_view template_name(Template t) {
  for (const auto& [tmpl, name] : kNames)
    if (tmpl == t) return name;
  return "?";
}

std::optional<Template> parse_template(std::string_view name) {
  for (const auto& [tmpl, n] : kNames)
    if (n == name) return tmpl;
  return std::nullopt;
}

FeatureTemplateSet FeatureTemplateSet::standard(bool with_pos) {
  FeatureTemplateSet set;
  for (const auto& [tmpl, name] : kNames) {
    bool is_pos = tmpl == Template::pos || tmpl == Template::prev_pos || tmpl == Template::next_pos;
    if (!is_pos || with_pos) set.templates.push_back(tmpl);
  }
  return set;
}

bool FeatureTemplateSet::uses_pos() const {
  return std::any_of(templates.begin(), templates.end(), [](Template t) {
    return t == Template::pos || t == Template::prev_pos || t == Template::next_pos;
  });
}

std::string FeatureTemplateSet::join() const {
  std::string out;
  for (std::size_t i = 0; i < templates.size(); ++i) {
    if (i) out.push_back(',');
    out.append(template_name(templates[i]));
  }
  return out;
}

FeatureTemplateSet FeatureTemplateSet::parse(std::string_view joined) {
  FeatureTemplateSet set;
  std::size_t pos = 0;
  while (pos <= joined.size()) {
    std::size_t comma = joined.find(',', pos);
    if (comma == std::string_view::npos) comma = joined.size();
    auto name = joined.substr(pos, comma - pos);
    auto t = parse_template(name);
    if (!t) throw std::invalid_argument("unknown feature template '" + std::string(name) + "'");
    set.templates.push_back(*t);
    pos = comma + 1;
  }
  if (set.templates.empty()) throw std::invalid_argument("empty feature template set");
  return set;
}

std::string word_shape(std::string_view surface) {
  std::string out;
  char32_t last = 0;
  for (char32_t cp : utf8::decode(surface)) {
    char32_t mapped = cp;
    if (utf8::is_upper(cp)) mapped = 'X';
    else if (utf8::is_lower(cp)) mapped = 'x';
    else if (utf8::is_digit(cp)) mapped = 'd';
    if (mapped == last) continue;
    utf8::append(out, mapped);
    last = mapped;
  }
  return out;
}

std::vector<PositionFeatures> extract_features(const Sentence& sentence,
                                               const FeatureTemplateSet& templates) {
  const std::size_t n = sentence.size();
  std::vector<PositionFeatures> out(n);

  auto word_at = [&](std::ptrdiff_t i) -> std::string {
    if (i < 0) return std::string(kBos);
    if (i >= static_cast<std::ptrdiff_t>(n)) return std::string(kEos);
    return sentence.tokens[static_cast<std::size_t>(i)].surface;
  };
  auto pos_at = [&](std::ptrdiff_t i) -> std::string {
    if (i < 0) return std::string(kBos);
    if (i >= static_cast<std::ptrdiff_t>(n)) return std::string(kEos);
    const auto& attrs = sentence.tokens[static_cast<std::size_t>(i)].attributes;
    return attrs.empty() ? std::string(kNoPos) : attrs.front();
  };

  for (std::size_t t = 0; t < n; ++t) {
    const auto i = static_cast<std::ptrdiff_t>(t);
    const std::string& w = sentence.tokens[t].surface;
    const auto cps = utf8::decode(w);
    auto& feats = out[t];
    feats.reserve(templates.templates.size());
    for (Template tmpl : templates.templates) {
      std::string name(template_name(tmpl));
      switch (tmpl) {
        case Template::bias:
          feats.push_back(name);
          continue;
        case Template::word:
          feats.push_back(name + "=" + utf8::lowercase(w));
          break;
        case Template::prev_word:
          feats.push_back(name + "=" + word_at(i - 1));
          break;
        case Template::next_word:
          feats.push_back(name + "=" + word_at(i + 1));
          break;
        case Template::prefix1:
        case Template::prefix2:
        case Template::prefix3:
          feats.push_back(name + "=" +
                          utf8::prefix(w, static_cast<std::size_t>(tmpl) -
                                              static_cast<std::size_t>(Template::prefix1) + 1));
          break;
        case Template::suffix1:
        case Template::suffix2:
        case Template::suffix3:
          feats.push_back(name + "=" +
                          utf8::suffix(w, static_cast<std::size_t>(tmpl) -
                                              static_cast<std::size_t>(Template::suffix1) + 1));
          break;
        case Template::shape:
          feats.push_back(name + "=" + word_shape(w));
          break;
        case Template::capitalized:
          feats.push_back(name + "=" + (!cps.empty() && utf8::is_upper(cps[0]) ? "1" : "0"));
          break;
        case Template::all_caps: {
          bool any_letter = false, all_upper = true;
          for (char32_t cp : cps) {
            if (utf8::is_upper(cp)) any_letter = true;
            else if (utf8::is_lower(cp)) any_letter = true, all_upper = false;
          }
          feats.push_back(name + "=" + (any_letter && all_upper ? "1" : "0"));
          break;
        }
        case Template::has_digit:
          feats.push_back(name + "=" +
                          (std::any_of(cps.begin(), cps.end(), utf8::is_digit) ? "1" : "0"));
          break;
        case Template::has_hyphen:
          feats.push_back(name + "=" + (w.find('-') != std::string::npos ? "1" : "0"));
          break;
        case Template::pos:
          feats.push_back(name + "=" + pos_at(i));
          break;
        case Template::prev_pos:
          feats.push_back(name + "=" + pos_at(i - 1));
          break;
        case Template::next_pos:
          feats.push_back(name + "=" + pos_at(i + 1));
          break;
      }
    }
  }
  return out;
}

std::int32_t FeatureIndex::add(const std::string& feature) {
  auto [it, inserted] = ids_.try_emplace(feature, static_cast<std::int32_t>(names_.size()));
  if (inserted) names_.push_back(feature);
  return it->second;
}

std::int32_t FeatureIndex::find(const std::string& feature) const {
  auto it = ids_.find(feature);
  return it == ids_.end() ? absent : it->second;
}

}  // namespace seqtag
