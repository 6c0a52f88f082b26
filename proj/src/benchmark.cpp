#include "seqtag/benchmark.hpp"

#include <cstdio>
#include <ostream>

#include "seqtag/schemes.hpp"

namespace seqtag {

std::vector<BenchmarkCell> run_benchmark(const BenchmarkPlan& plan, const Corpus& train_corpus,
                                         const Corpus& test, std::ostream* progress) {
  std::vector<bool> pos_variants{false};
  if (plan.use_pos) {
    if (train_corpus.columns.has_pos()) pos_variants.push_back(true);
    else if (progress) *progress << "no POS column in the corpus; skipping POS cells\n";
  }
  std::vector<bool> augment_variants{false};
  if (plan.augment) augment_variants.push_back(true);

  std::vector<BenchmarkCell> cells;
  for (bool pos : pos_variants) {
    for (bool augmented : augment_variants) {
      for (Scheme scheme : plan.schemes) {
        BenchmarkCell cell;
        cell.scheme = scheme;
        cell.pos = pos;
        cell.augmented = augmented;
        Corpus cell_train = convert(train_corpus, scheme);
        if (augmented) cell_train = augment_corpus(cell_train, *plan.augment);
        if (progress)
          *progress << "training " << to_string(scheme) << (pos ? " +POS" : "")
                    << (augmented ? " +DA" : "") << " on " << cell_train.sentences.size()
                    << " sentences\n";
        CrfModel model = train(cell_train, plan.train, FeatureTemplateSet::standard(pos), &cell.train_log);
        Corpus predicted = tag_corpus(model, test);
        cell.report = evaluate(test, predicted, /*normalize_io=*/true);
        if (progress) {
          char buf[128];
          std::snprintf(buf, sizeof(buf), "  %zu accepted / %zu rejected steps, F1 %.2f\n",
                        cell.train_log.accepted, cell.train_log.rejected, cell.report.overall.f1);
          *progress << buf;
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

namespace {

std::string variant_title(bool pos, bool augmented) {
  if (pos && augmented) return "NER results with POS tags and data augmentation";
  if (pos) return "NER results with POS tags";
  if (augmented) return "NER results with data augmentation";
  return "NER results using original corpus";
}

}  // namespace

std::string benchmark_table(const std::vector<BenchmarkCell>& cells) {
  std::string out;
  char buf[64];
  std::size_t i = 0;
  while (i < cells.size()) {
    std::size_t j = i;
    while (j < cells.size() && cells[j].pos == cells[i].pos && cells[j].augmented == cells[i].augmented) ++j;
    if (!out.empty()) out += "\n";
    out += variant_title(cells[i].pos, cells[i].augmented) + "\n";
    std::string header = "          ", row = "F1 score  ";
    for (std::size_t k = i; k < j; ++k) {
      std::snprintf(buf, sizeof(buf), "%8s", std::string(to_string(cells[k].scheme)).c_str());
      header += buf;
      std::snprintf(buf, sizeof(buf), "%8.2f", cells[k].report.overall.f1);
      row += buf;
    }
    out += header + "\n" + row + "\n";
    i = j;
  }
  return out;
}

std::string benchmark_csv(const std::vector<BenchmarkCell>& cells) {
  std::string out = "scheme,pos,augment,type,gold,pred,correct,precision,recall,f1\n";
  char buf[256];
  for (const auto& cell : cells) {
    auto row = [&](const std::string& type, const EntityCounts& c) {
      std::snprintf(buf, sizeof(buf), "%s,%d,%d,%s,%zu,%zu,%zu,%.2f,%.2f,%.2f\n",
                    std::string(to_string(cell.scheme)).c_str(), cell.pos ? 1 : 0,
                    cell.augmented ? 1 : 0, type.c_str(), c.gold, c.pred, c.correct, c.precision,
                    c.recall, c.f1);
      out += buf;
    };
    for (const auto& [type, counts] : cell.report.per_type) row(type, counts);
    row("ALL", cell.report.overall);
  }
  return out;
}

}  // namespace seqtag
