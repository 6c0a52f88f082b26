#ifndef SEQTAG_EVALUATOR_HPP
#define SEQTAG_EVALUATOR_HPP

#include <cstddef>
#include <map>
#include <string>

#include "seqtag/corpus.hpp"

namespace seqtag {

struct EntityCounts {
  std::size_t gold = 0;
  std::size_t pred = 0;
  std::size_t correct = 0;
  // Percentages; zero when the denominator is zero.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  void finalize();
};

struct EvalReport {
  std::map<std::string, EntityCounts> per_type;
  EntityCounts overall;
  std::size_t tokens = 0;
  std::size_t correct_tags = 0;
  double token_accuracy = 0.0;  // percent
};

// Exact-boundary, exact-type entity matching over leniently decoded spans.
// With normalize_io both sides are first collapsed to IO (merging adjacent
// same-type entities). Throws AlignmentError.
EvalReport evaluate(const Corpus& gold, const Corpus& pred, bool normalize_io);

enum class ReportStyle { text, csv };

std::string format_report(const EvalReport& report, ReportStyle style);

}  // namespace seqtag

#endif  // SEQTAG_EVALUATOR_HPP
