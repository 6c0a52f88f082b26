// Text model format:
//   SCHEME<TAB><scheme>
//   LABELS<TAB><comma-joined labels>
//   TEMPLATES<TAB><comma-joined template names>      (optional)
//   T<TAB><from><TAB><to><TAB><hexfloat>              one per label pair
//   F<TAB><feature><TAB><label><TAB><hexfloat>        one per nonzero weight
//   END

#include <charconv>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "seqtag/corpus.hpp"
#include "seqtag/crf.hpp"
#include "seqtag/errors.hpp"

namespace seqtag {

namespace {

std::string hex_double(double value) {
  char buf[64];
  double magnitude = std::abs(value);
  auto res = std::to_chars(buf, buf + sizeof(buf), magnitude, std::chars_format::hex);
  std::string out = std::signbit(value) ? "-0x" : "0x";
  out.append(buf, res.ptr);
  return out;
}

std::optional<double> parse_hex_double(std::string_view text) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') negative = true, text.remove_prefix(1);
  if (!text.starts_with("0x")) return std::nullopt;
  text.remove_prefix(2);
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value, std::chars_format::hex);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value))
    return std::nullopt;
  return negative ? -value : value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

}  // namespace

std::string model_to_text(const CrfModel& model) {
  const std::size_t K = model.num_labels();
  std::string out;
  out += "SCHEME\t";
  out += to_string(model.scheme);
  out += "\nLABELS\t";
  for (std::size_t i = 0; i < K; ++i) {
    if (i) out += ',';
    out += model.labels[i];
  }
  out += "\nTEMPLATES\t" + model.templates.join() + "\n";
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j)
      out += "T\t" + model.labels[i] + "\t" + model.labels[j] + "\t" + hex_double(model.trans(i, j)) + "\n";
  for (std::size_t f = 0; f < model.features.size(); ++f)
    for (std::size_t y = 0; y < K; ++y) {
      double w = model.obs(f, y);
      if (w == 0.0) continue;
      out += "F\t" + model.features.name(f) + "\t" + model.labels[y] + "\t" + hex_double(w) + "\n";
    }
  out += "END\n";
  return out;
}

CrfModel model_from_text(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      lines.push_back(text.substr(pos, eol - pos));
      pos = eol + 1;
    }
  }
  auto header = [&](std::size_t idx, std::string_view key) {
    if (idx >= lines.size()) throw FormatError(idx + 1, "missing " + std::string(key) + " line");
    auto fields = split(lines[idx], '\t');
    if (fields.size() != 2 || fields[0] != key)
      throw FormatError(idx + 1, "expected " + std::string(key) + " line");
    return fields[1];
  };

  auto scheme = parse_scheme(header(0, "SCHEME"));
  if (!scheme) throw FormatError(1, "unknown scheme");
  std::vector<std::string> labels;
  for (auto l : split(header(1, "LABELS"), ',')) {
    if (l.empty()) throw FormatError(2, "empty label");
    labels.emplace_back(l);
  }
  std::map<std::string, std::size_t, std::less<>> label_ids;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (!label_ids.emplace(labels[i], i).second) throw FormatError(2, "duplicate label");

  std::size_t next = 2;
  std::optional<FeatureTemplateSet> templates;
  if (next < lines.size() && lines[next].starts_with("TEMPLATES\t")) {
    try {
      templates = FeatureTemplateSet::parse(header(next, "TEMPLATES"));
    } catch (const std::invalid_argument& e) {
      throw FormatError(next + 1, e.what());
    }
    ++next;
  }

  CrfModel model = make_model(*scheme, labels, templates.value_or(FeatureTemplateSet{}));
  const std::size_t K = labels.size();
  auto label_of = [&](std::string_view name, std::size_t line_no) {
    auto it = label_ids.find(name);
    if (it == label_ids.end()) throw FormatError(line_no, "unknown label '" + std::string(name) + "'");
    return it->second;
  };

  std::size_t transitions_seen = 0;
  bool ended = false;
  bool saw_pos_feature = false;
  for (std::size_t idx = next; idx < lines.size(); ++idx) {
    const std::size_t line_no = idx + 1;
    if (ended) {
      if (!lines[idx].empty()) throw FormatError(line_no, "content after END");
      continue;
    }
    if (lines[idx] == "END") {
      ended = true;
      continue;
    }
    auto fields = split(lines[idx], '\t');
    if (fields.size() != 4 || (fields[0] != "T" && fields[0] != "F"))
      throw FormatError(line_no, "expected T or F record");
    auto weight = parse_hex_double(fields[3]);
    if (!weight) throw FormatError(line_no, "bad weight");
    if (fields[0] == "T") {
      model.trans(label_of(fields[1], line_no), label_of(fields[2], line_no)) = *weight;
      ++transitions_seen;
    } else {
      if (fields[1].empty()) throw FormatError(line_no, "empty feature");
      std::string feature(fields[1]);
      if (feature.starts_with("pos")) saw_pos_feature = true;
      auto id = static_cast<std::size_t>(model.add_feature(feature));
      model.obs(id, label_of(fields[2], line_no)) = *weight;
    }
  }
  if (!ended) throw FormatError(lines.size(), "truncated model (no END record)");
  if (transitions_seen != K * K) throw FormatError(lines.size(), "transition table incomplete");
  if (!templates) model.templates = FeatureTemplateSet::standard(saw_pos_feature);
  return model;
}

void save_model(const CrfModel& model, const std::string& path) {
  write_text_file_atomic(path, model_to_text(model));
}

CrfModel load_model(const std::string& path) { return model_from_text(read_text_file(path)); }

}  // namespace seqtag
