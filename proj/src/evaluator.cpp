#include "seqtag/evaluator.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "seqtag/errors.hpp"
#include "seqtag/schemes.hpp"

namespace seqtag {

void EntityCounts::finalize() {
  precision = pred ? 100.0 * static_cast<double>(correct) / static_cast<double>(pred) : 0.0;
  recall = gold ? 100.0 * static_cast<double>(correct) / static_cast<double>(gold) : 0.0;
  f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

namespace {

struct Decoded {
  std::vector<EntitySpan> spans;
  std::vector<std::string> tags;
};

Decoded decode_side(const Sentence& sentence, Scheme scheme, bool normalize_io) {
  Decoded d;
  d.tags = sentence.tags();
  d.spans = decode_spans(d.tags, scheme, DecodeMode::lenient);
  if (normalize_io) {
    d.tags = encode_spans(d.spans, d.tags.size(), Scheme::io);
    d.spans = decode_spans(d.tags, Scheme::io, DecodeMode::lenient);
  }
  return d;
}

}  // namespace

EvalReport evaluate(const Corpus& gold, const Corpus& pred, bool normalize_io) {
  if (gold.sentences.size() != pred.sentences.size())
    throw AlignmentError(std::min(gold.sentences.size(), pred.sentences.size()), 0);
  const Scheme gold_scheme = gold.scheme.value_or(infer_scheme(gold));
  const Scheme pred_scheme = pred.scheme.value_or(infer_scheme(pred));

  EvalReport report;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    const auto& gs = gold.sentences[s];
    const auto& ps = pred.sentences[s];
    if (gs.size() != ps.size()) throw AlignmentError(s, std::min(gs.size(), ps.size()));
    for (std::size_t i = 0; i < gs.size(); ++i)
      if (gs.tokens[i].surface != ps.tokens[i].surface) throw AlignmentError(s, i);

    auto g = decode_side(gs, gold_scheme, normalize_io);
    auto p = decode_side(ps, pred_scheme, normalize_io);
    report.tokens += gs.size();
    for (std::size_t i = 0; i < gs.size(); ++i)
      if (g.tags[i] == p.tags[i]) ++report.correct_tags;

    for (const auto& span : g.spans) ++report.per_type[span.etype].gold;
    for (const auto& span : p.spans) ++report.per_type[span.etype].pred;
    // Both span lists are sorted by start and non-overlapping.
    std::size_t a = 0, b = 0;
    while (a < g.spans.size() && b < p.spans.size()) {
      if (g.spans[a] == p.spans[b]) {
        ++report.per_type[g.spans[a].etype].correct;
        ++a, ++b;
      } else if (g.spans[a].start < p.spans[b].start ||
                 (g.spans[a].start == p.spans[b].start && g.spans[a].end < p.spans[b].end)) {
        ++a;
      } else {
        ++b;
      }
    }
  }

  for (auto& [type, counts] : report.per_type) {
    counts.finalize();
    report.overall.gold += counts.gold;
    report.overall.pred += counts.pred;
    report.overall.correct += counts.correct;
  }
  report.overall.finalize();
  report.token_accuracy =
      report.tokens ? 100.0 * static_cast<double>(report.correct_tags) / static_cast<double>(report.tokens) : 0.0;
  return report;
}

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string format_report(const EvalReport& r, ReportStyle style) {
  std::string out;
  char buf[256];
  if (style == ReportStyle::csv) {
    out = "type,gold,pred,correct,precision,recall,f1\n";
    auto row = [&](const std::string& name, const EntityCounts& c) {
      out += name + "," + std::to_string(c.gold) + "," + std::to_string(c.pred) + "," +
             std::to_string(c.correct) + "," + fixed2(c.precision) + "," + fixed2(c.recall) + "," +
             fixed2(c.f1) + "\n";
    };
    for (const auto& [type, c] : r.per_type) row(type, c);
    if (!r.per_type.empty()) row("ALL", r.overall);
    return out;
  }

  // Same layout as conlleval's summary.
  std::snprintf(buf, sizeof(buf), "processed %zu tokens with %zu phrases; found: %zu phrases; correct: %zu.\n",
                r.tokens, r.overall.gold, r.overall.pred, r.overall.correct);
  out += buf;
  if (r.tokens > 0) {
    std::snprintf(buf, sizeof(buf), "accuracy: %6.2f%%; ", r.token_accuracy);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "precision: %6.2f%%; recall: %6.2f%%; FB1: %6.2f\n",
                r.overall.precision, r.overall.recall, r.overall.f1);
  out += buf;
  for (const auto& [type, c] : r.per_type) {
    std::snprintf(buf, sizeof(buf), "%17s: precision: %6.2f%%; recall: %6.2f%%; FB1: %6.2f  %zu\n",
                  type.c_str(), c.precision, c.recall, c.f1, c.pred);
    out += buf;
  }
  return out;
}

}  // namespace seqtag
