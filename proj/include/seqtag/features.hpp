#ifndef SEQTAG_FEATURES_HPP
#define SEQTAG_FEATURES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "seqtag/corpus.hpp"

namespace seqtag {

// Fixed template catalog. Each template emits exactly one "name=value"
// string per position ("bias" has no value part).
enum class Template {
  bias,
  word,       // w0, lowercased
  prev_word,  // w-1
  next_word,  // w+1
  prefix1,
  prefix2,
  prefix3,
  suffix1,
  suffix2,
  suffix3,
  shape,
  capitalized,
  all_caps,
  has_digit,
  has_hyphen,
  pos,
  prev_pos,
  next_pos,
};

std::string_view template_name(Template t);
std::optional<Template> parse_template(std::string_view name);

struct FeatureTemplateSet {
  std::vector<Template> templates;

  // Every lexical template; the three POS templates only when with_pos.
  static FeatureTemplateSet standard(bool with_pos);
  bool uses_pos() const;
  std::string join() const;  // comma-separated names
  static FeatureTemplateSet parse(std::string_view joined);

  bool operator==(const FeatureTemplateSet&) const = default;
};

// Uppercase -> X, lowercase -> x, digit -> d, anything else verbatim, with
// runs of the same output character collapsed: "Saint-Brieuc" -> "Xx-Xx".
std::string word_shape(std::string_view surface);

using PositionFeatures = std::vector<std::string>;

std::vector<PositionFeatures> extract_features(const Sentence& sentence,
                                               const FeatureTemplateSet& templates);

// Dense ids for feature strings seen in training; unseen strings are absent.
class FeatureIndex {
 public:
  static constexpr std::int32_t absent = -1;

  std::int32_t add(const std::string& feature);
  std::int32_t find(const std::string& feature) const;
  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t id) const { return names_[id]; }

 private:
  std::unordered_map<std::string, std::int32_t> ids_;
  std::vector<std::string> names_;
};

}  // namespace seqtag

#endif  // SEQTAG_FEATURES_HPP
