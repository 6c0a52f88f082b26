#include "seqtag/crf.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <thread>

#include "seqtag/errors.hpp"
#include "seqtag/schemes.hpp"

namespace seqtag {

std::optional<std::size_t> CrfModel::label_id(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  return std::nullopt;
}

std::int32_t CrfModel::add_feature(const std::string& feature) {
  const std::size_t before = features.size();
  std::int32_t id = features.add(feature);
  if (features.size() != before) obs_weights.resize(features.size() * labels.size(), 0.0);
  return id;
}

CrfModel make_model(Scheme scheme, std::vector<std::string> labels, FeatureTemplateSet templates) {
  CrfModel model;
  model.scheme = scheme;
  model.labels = std::move(labels);
  model.templates = std::move(templates);
  model.trans_weights.assign(model.labels.size() * model.labels.size(), 0.0);
  return model;
}

namespace {

double log_sum_exp(const double* values, std::size_t n) {
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) hi = std::max(hi, values[i]);
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::exp(values[i] - hi);
  return hi + std::log(sum);
}

// Forward scores alpha(t, y), row-major.
std::vector<double> forward(const Lattice& lat) {
  const std::size_t T = lat.length, K = lat.labels;
  std::vector<double> alpha(T * K);
  std::vector<double> scratch(K);
  for (std::size_t y = 0; y < K; ++y) alpha[y] = lat.at(0, y);
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t j = 0; j < K; ++j) {
      for (std::size_t i = 0; i < K; ++i) scratch[i] = alpha[(t - 1) * K + i] + lat.edge(i, j);
      alpha[t * K + j] = log_sum_exp(scratch.data(), K) + lat.at(t, j);
    }
  }
  return alpha;
}

std::vector<double> backward(const Lattice& lat) {
  const std::size_t T = lat.length, K = lat.labels;
  std::vector<double> beta(T * K, 0.0);
  std::vector<double> scratch(K);
  for (std::size_t t = T - 1; t-- > 0;) {
    for (std::size_t i = 0; i < K; ++i) {
      for (std::size_t j = 0; j < K; ++j)
        scratch[j] = lat.edge(i, j) + lat.at(t + 1, j) + beta[(t + 1) * K + j];
      beta[t * K + i] = log_sum_exp(scratch.data(), K);
    }
  }
  return beta;
}

template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  const std::size_t workers = std::min(threads, n);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested != 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Feature ids per position, flattened, plus gold label ids.
struct CompiledSentence {
  std::vector<std::uint32_t> offsets;  // length + 1
  std::vector<std::int32_t> ids;
  std::vector<std::uint32_t> gold;

  std::size_t length() const { return offsets.size() - 1; }
};

CompiledSentence compile(const std::vector<PositionFeatures>& feats, const FeatureIndex& index,
                         const std::vector<std::uint32_t>& gold) {
  CompiledSentence c;
  c.offsets.push_back(0);
  for (const auto& position : feats) {
    for (const auto& f : position) {
      std::int32_t id = index.find(f);
      if (id != FeatureIndex::absent) c.ids.push_back(id);
    }
    c.offsets.push_back(static_cast<std::uint32_t>(c.ids.size()));
  }
  c.gold = gold;
  return c;
}

Lattice compiled_lattice(const CompiledSentence& s, const std::vector<double>& obs,
                         const std::vector<double>& trans, std::size_t K) {
  Lattice lat(s.length(), K);
  for (std::size_t t = 0; t < s.length(); ++t) {
    double* row = &lat.node[t * K];
    for (std::uint32_t k = s.offsets[t]; k < s.offsets[t + 1]; ++k) {
      const double* w = &obs[static_cast<std::size_t>(s.ids[k]) * K];
      for (std::size_t y = 0; y < K; ++y) row[y] += w[y];
    }
  }
  lat.trans = trans;
  return lat;
}

struct SentenceTerms {
  double log_z = 0.0;
  double gold = 0.0;
  Posteriors posteriors;
};

Objective compiled_objective(const std::vector<double>& obs, const std::vector<double>& trans,
                             std::size_t K, std::span<const CompiledSentence> batch, double l2,
                             std::size_t threads) {
  Objective out;
  out.obs_grad.assign(obs.size(), 0.0);
  out.trans_grad.assign(trans.size(), 0.0);

  constexpr std::size_t kBlock = 1024;
  std::vector<SentenceTerms> terms;
  for (std::size_t base = 0; base < batch.size(); base += kBlock) {
    const std::size_t n = std::min(kBlock, batch.size() - base);
    terms.assign(n, {});
    parallel_for(n, threads, [&](std::size_t i) {
      const auto& s = batch[base + i];
      if (s.length() == 0) return;
      Lattice lat = compiled_lattice(s, obs, trans, K);
      std::vector<std::size_t> path(s.gold.begin(), s.gold.end());
      terms[i].gold = path_score(lat, path);
      terms[i].posteriors = forward_backward(lat);
      terms[i].log_z = terms[i].posteriors.log_z;
    });
    // Reduction runs in sentence order so the sums are bit-stable.
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = batch[base + i];
      if (s.length() == 0) continue;
      const auto& post = terms[i].posteriors;
      out.value += terms[i].log_z - terms[i].gold;
      for (std::size_t t = 0; t < s.length(); ++t) {
        const double* marg = &post.node[t * K];
        for (std::uint32_t k = s.offsets[t]; k < s.offsets[t + 1]; ++k) {
          double* g = &out.obs_grad[static_cast<std::size_t>(s.ids[k]) * K];
          for (std::size_t y = 0; y < K; ++y) g[y] += marg[y];
          g[s.gold[t]] -= 1.0;
        }
        if (t > 0) out.trans_grad[s.gold[t - 1] * K + s.gold[t]] -= 1.0;
      }
      for (std::size_t e = 0; e < K * K; ++e) out.trans_grad[e] += post.edge[e];
    }
  }

  if (l2 != 0.0) {
    double sq = 0.0;
    for (std::size_t k = 0; k < obs.size(); ++k) {
      sq += obs[k] * obs[k];
      out.obs_grad[k] += l2 * obs[k];
    }
    for (std::size_t k = 0; k < trans.size(); ++k) {
      sq += trans[k] * trans[k];
      out.trans_grad[k] += l2 * trans[k];
    }
    out.value += 0.5 * l2 * sq;
  }
  return out;
}

std::vector<std::uint32_t> gold_ids(const CrfModel& model, const std::vector<std::string>& tags) {
  std::vector<std::uint32_t> ids;
  ids.reserve(tags.size());
  for (const auto& tag : tags) {
    auto id = model.label_id(tag);
    if (!id) throw UnknownLabel(tag);
    ids.push_back(static_cast<std::uint32_t>(*id));
  }
  return ids;
}

}  // namespace

Lattice log_potentials(const CrfModel& model, const std::vector<PositionFeatures>& features) {
  const std::size_t K = model.num_labels();
  Lattice lat(features.size(), K);
  for (std::size_t t = 0; t < features.size(); ++t) {
    for (const auto& f : features[t]) {
      std::int32_t id = model.features.find(f);
      if (id == FeatureIndex::absent) continue;
      for (std::size_t y = 0; y < K; ++y) lat.at(t, y) += model.obs(static_cast<std::size_t>(id), y);
    }
  }
  lat.trans = model.trans_weights;
  return lat;
}

double log_partition(const Lattice& lattice) {
  if (lattice.length == 0) return 0.0;
  auto alpha = forward(lattice);
  return log_sum_exp(&alpha[(lattice.length - 1) * lattice.labels], lattice.labels);
}

double path_score(const Lattice& lattice, std::span<const std::size_t> path) {
  double score = 0.0;
  for (std::size_t t = 0; t < path.size(); ++t) {
    if (t > 0) score += lattice.edge(path[t - 1], path[t]);
    score += lattice.at(t, path[t]);
  }
  return score;
}

Posteriors forward_backward(const Lattice& lat) {
  const std::size_t T = lat.length, K = lat.labels;
  Posteriors post;
  post.edge.assign(K * K, 0.0);
  if (T == 0) return post;
  auto alpha = forward(lat);
  auto beta = backward(lat);
  post.log_z = log_sum_exp(&alpha[(T - 1) * K], K);
  post.node.resize(T * K);
  for (std::size_t k = 0; k < T * K; ++k) post.node[k] = std::exp(alpha[k] + beta[k] - post.log_z);
  for (std::size_t t = 1; t < T; ++t)
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = 0; j < K; ++j)
        post.edge[i * K + j] += std::exp(alpha[(t - 1) * K + i] + lat.edge(i, j) + lat.at(t, j) +
                                         beta[t * K + j] - post.log_z);
  return post;
}

std::vector<std::size_t> viterbi_path(const Lattice& lat) {
  const std::size_t T = lat.length, K = lat.labels;
  if (T == 0 || K == 0) return {};
  std::vector<double> delta(T * K);
  std::vector<std::size_t> back(T * K, 0);
  for (std::size_t y = 0; y < K; ++y) delta[y] = lat.at(0, y);
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t j = 0; j < K; ++j) {
      std::size_t best = 0;
      double best_score = delta[(t - 1) * K] + lat.edge(0, j);
      for (std::size_t i = 1; i < K; ++i) {
        double s = delta[(t - 1) * K + i] + lat.edge(i, j);
        if (s > best_score) best_score = s, best = i;
      }
      delta[t * K + j] = best_score + lat.at(t, j);
      back[t * K + j] = best;
    }
  }
  std::vector<std::size_t> path(T);
  std::size_t best = 0;
  for (std::size_t y = 1; y < K; ++y)
    if (delta[(T - 1) * K + y] > delta[(T - 1) * K + best]) best = y;
  path[T - 1] = best;
  for (std::size_t t = T - 1; t > 0; --t) path[t - 1] = back[t * K + path[t]];
  return path;
}

std::vector<std::string> viterbi(const CrfModel& model, const Sentence& sentence) {
  auto lat = log_potentials(model, extract_features(sentence, model.templates));
  std::vector<std::string> tags;
  tags.reserve(sentence.size());
  for (std::size_t y : viterbi_path(lat)) tags.push_back(model.labels[y]);
  return tags;
}

Objective nll_and_gradient(const CrfModel& model, std::span<const LabeledSentence> batch,
                           double l2_lambda, std::size_t threads) {
  std::vector<CompiledSentence> compiled;
  compiled.reserve(batch.size());
  for (const auto& [sentence, tags] : batch)
    compiled.push_back(compile(extract_features(sentence, model.templates), model.features,
                               gold_ids(model, tags)));
  return compiled_objective(model.obs_weights, model.trans_weights, model.num_labels(), compiled,
                            l2_lambda, resolve_threads(threads));
}

CrfModel train(const Corpus& corpus, const TrainConfig& cfg, const FeatureTemplateSet& templates,
               TrainLog* log) {
  if (corpus.token_count() == 0) throw EmptyCorpus();
  const Scheme scheme = corpus.scheme.value_or(infer_scheme(corpus));
  CrfModel model = make_model(scheme, label_set(entity_types(corpus), scheme), templates);
  const std::size_t K = model.num_labels();
  const std::size_t threads = resolve_threads(cfg.threads);

  // Feature ids in first-occurrence order; occurrence counts drive the
  // diagonal step scaling below.
  std::vector<std::vector<PositionFeatures>> extracted;
  extracted.reserve(corpus.sentences.size());
  std::vector<double> occurrences;
  std::size_t transitions = 0;
  for (const auto& sentence : corpus.sentences) {
    extracted.push_back(extract_features(sentence, templates));
    for (const auto& position : extracted.back())
      for (const auto& f : position) {
        auto id = static_cast<std::size_t>(model.add_feature(f));
        if (id >= occurrences.size()) occurrences.resize(id + 1, 0.0);
        occurrences[id] += 1.0;
      }
    if (sentence.size() > 0) transitions += sentence.size() - 1;
  }
  std::vector<CompiledSentence> batch;
  batch.reserve(corpus.sentences.size());
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i)
    batch.push_back(compile(extracted[i], model.features, gold_ids(model, corpus.sentences[i].tags())));
  extracted.clear();

  // Step direction is the gradient scaled per coordinate by 1 / (occurrences + lambda).
  std::vector<double> obs_scale(model.obs_weights.size());
  for (std::size_t f = 0; f < occurrences.size(); ++f)
    for (std::size_t y = 0; y < K; ++y) obs_scale[f * K + y] = 1.0 / (occurrences[f] + cfg.l2_lambda);
  const double trans_scale = 1.0 / (static_cast<double>(std::max<std::size_t>(transitions, 1)) + cfg.l2_lambda);

  Objective current =
      compiled_objective(model.obs_weights, model.trans_weights, K, batch, cfg.l2_lambda, threads);
  TrainLog local;
  local.objectives.push_back(current.value);

  double step = 0.5;
  std::vector<double> obs_candidate(model.obs_weights.size());
  std::vector<double> trans_candidate(model.trans_weights.size());
  while (local.accepted < cfg.max_iter) {
    for (std::size_t k = 0; k < obs_candidate.size(); ++k)
      obs_candidate[k] = model.obs_weights[k] - step * obs_scale[k] * current.obs_grad[k];
    for (std::size_t k = 0; k < trans_candidate.size(); ++k)
      trans_candidate[k] = model.trans_weights[k] - step * trans_scale * current.trans_grad[k];
    Objective next = compiled_objective(obs_candidate, trans_candidate, K, batch, cfg.l2_lambda, threads);
    if (!(next.value < current.value)) {
      ++local.rejected;
      step *= 0.5;
      if (step < 1e-12) {
        local.converged = true;
        break;
      }
      continue;
    }
    const double change = (current.value - next.value) / std::max(std::abs(current.value), 1e-300);
    std::swap(model.obs_weights, obs_candidate);
    std::swap(model.trans_weights, trans_candidate);
    current = std::move(next);
    ++local.accepted;
    local.objectives.push_back(current.value);
    if (change < cfg.tol) {
      local.converged = true;
      break;
    }
  }
  if (log) *log = std::move(local);
  return model;
}

Corpus tag_corpus(const CrfModel& model, const Corpus& corpus) {
  Corpus out = corpus;
  out.scheme = model.scheme;
  for (auto& sentence : out.sentences) {
    auto tags = viterbi(model, sentence);
    for (std::size_t i = 0; i < tags.size(); ++i) sentence.tokens[i].tag = std::move(tags[i]);
  }
  return out;
}

}  // namespace seqtag
