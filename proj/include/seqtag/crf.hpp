#ifndef SEQTAG_CRF_HPP
#define SEQTAG_CRF_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqtag/corpus.hpp"
#include "seqtag/features.hpp"

namespace seqtag {

// Node log-potentials (length x labels, row-major) and the labels x labels
// transition log-potentials, indexed [from * labels + to].
struct Lattice {
  std::size_t length = 0;
  std::size_t labels = 0;
  std::vector<double> node;
  std::vector<double> trans;

  Lattice() = default;
  Lattice(std::size_t length, std::size_t labels)
      : length(length), labels(labels), node(length * labels, 0.0), trans(labels * labels, 0.0) {}

  double& at(std::size_t t, std::size_t y) { return node[t * labels + y]; }
  double at(std::size_t t, std::size_t y) const { return node[t * labels + y]; }
  double& edge(std::size_t from, std::size_t to) { return trans[from * labels + to]; }
  double edge(std::size_t from, std::size_t to) const { return trans[from * labels + to]; }
};

struct CrfModel {
  Scheme scheme = Scheme::bioes;
  // labels[0] is "O"; the rest are sorted.
  std::vector<std::string> labels;
  FeatureTemplateSet templates;
  FeatureIndex features;
  std::vector<double> obs_weights;    // features.size() x labels.size()
  std::vector<double> trans_weights;  // labels.size() x labels.size()

  std::size_t num_labels() const { return labels.size(); }
  std::optional<std::size_t> label_id(std::string_view label) const;
  double& obs(std::size_t feature, std::size_t label) { return obs_weights[feature * labels.size() + label]; }
  double obs(std::size_t feature, std::size_t label) const { return obs_weights[feature * labels.size() + label]; }
  double& trans(std::size_t from, std::size_t to) { return trans_weights[from * labels.size() + to]; }
  double trans(std::size_t from, std::size_t to) const { return trans_weights[from * labels.size() + to]; }

  // Registers a feature string, growing obs_weights with a zero row.
  std::int32_t add_feature(const std::string& feature);
};

// Zero-weight model with no features.
CrfModel make_model(Scheme scheme, std::vector<std::string> labels, FeatureTemplateSet templates);

struct TrainConfig {
  double l2_lambda = 1.0;
  std::size_t max_iter = 200;  // accepted iterations
  double tol = 1e-6;
  // Reserved: training is full-batch and uses no randomness.
  std::uint64_t seed = 0;
  // Worker threads for the per-sentence lattice work; 0 means hardware
  // concurrency. Results do not depend on this value.
  std::size_t threads = 0;
};

struct TrainLog {
  std::vector<double> objectives;  // initial objective, then one per accepted iteration
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  bool converged = false;
};

Lattice log_potentials(const CrfModel& model, const std::vector<PositionFeatures>& features);

double log_partition(const Lattice& lattice);

double path_score(const Lattice& lattice, std::span<const std::size_t> path);

struct Posteriors {
  double log_z = 0.0;
  std::vector<double> node;  // length x labels marginals
  std::vector<double> edge;  // labels x labels, expected transition counts summed over positions
};

Posteriors forward_backward(const Lattice& lattice);

// Highest-scoring path; ties go to the lowest label index.
std::vector<std::size_t> viterbi_path(const Lattice& lattice);

std::vector<std::string> viterbi(const CrfModel& model, const Sentence& sentence);

using LabeledSentence = std::pair<Sentence, std::vector<std::string>>;

struct Objective {
  double value = 0.0;
  std::vector<double> obs_grad;    // same layout as CrfModel::obs_weights
  std::vector<double> trans_grad;  // same layout as CrfModel::trans_weights
};

// Negative conditional log-likelihood of the gold paths plus (l2/2)|w|^2, and
// its gradient. Throws UnknownLabel.
Objective nll_and_gradient(const CrfModel& model, std::span<const LabeledSentence> batch,
                           double l2_lambda, std::size_t threads = 1);

// Label set comes from the corpus entity types under its scheme. Throws
// EmptyCorpus.
CrfModel train(const Corpus& corpus, const TrainConfig& cfg, const FeatureTemplateSet& templates,
               TrainLog* log = nullptr);

// Copy of the corpus with every tag replaced by the Viterbi prediction.
Corpus tag_corpus(const CrfModel& model, const Corpus& corpus);

std::string model_to_text(const CrfModel& model);
CrfModel model_from_text(std::string_view text);
void save_model(const CrfModel& model, const std::string& path);
CrfModel load_model(const std::string& path);

}  // namespace seqtag

#endif  // SEQTAG_CRF_HPP
