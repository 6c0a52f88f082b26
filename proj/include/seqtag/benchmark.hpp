#ifndef SEQTAG_BENCHMARK_HPP
#define SEQTAG_BENCHMARK_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "seqtag/augment.hpp"
#include "seqtag/corpus.hpp"
#include "seqtag/crf.hpp"
#include "seqtag/evaluator.hpp"
#include "seqtag/ingest.hpp"

namespace seqtag {

// One grid: every scheme, optionally repeated with POS features and with
// augmented training data.
struct BenchmarkPlan {
  std::vector<Scheme> schemes{Scheme::io, Scheme::bio, Scheme::bioes};
  bool use_pos = false;
  std::optional<AugmentConfig> augment;
  TrainConfig train;
  SplitRules split_rules;
};

struct BenchmarkCell {
  Scheme scheme = Scheme::io;
  bool pos = false;
  bool augmented = false;
  EvalReport report;
  TrainLog train_log;
};

// Trains one model per cell on `train_corpus` and scores `test` with IO-normalized
// conlleval matching. POS cells are skipped when the corpus has no POS column.
std::vector<BenchmarkCell> run_benchmark(const BenchmarkPlan& plan, const Corpus& train_corpus,
                                         const Corpus& test, std::ostream* progress = nullptr);

// Overall F1 per scheme, one block per (pos, augmented) variant.
std::string benchmark_table(const std::vector<BenchmarkCell>& cells);
// scheme,pos,augment,type,gold,pred,correct,precision,recall,f1
std::string benchmark_csv(const std::vector<BenchmarkCell>& cells);

}  // namespace seqtag

#endif  // SEQTAG_BENCHMARK_HPP
